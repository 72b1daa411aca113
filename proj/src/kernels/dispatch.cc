// Copyright 2026 The clustercoop Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "clustercoop/kernels.h"
#include "kernels_internal.h"

namespace clustercoop::kernels {
namespace {

bool cpu_has_avx2() noexcept {
#if defined(CLUSTERCOOP_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* auto_select() noexcept {
  const char* env = std::getenv("CLUSTERCOOP_KERNELS");
  if (env != nullptr && std::string_view(env) == "scalar") {
    return &scalar_kernels();
  }
  if (const KernelTable* t = avx2_kernels()) return t;
  return &scalar_kernels();
}

std::atomic<const KernelTable*>& selected() noexcept {
  static std::atomic<const KernelTable*> table{auto_select()};
  return table;
}

}  // namespace

const KernelTable* avx2_kernels() noexcept {
#if defined(CLUSTERCOOP_HAVE_AVX2)
  if (cpu_has_avx2()) return &avx2_kernels_unchecked();
#endif
  return nullptr;
}

const KernelTable& active_kernels() noexcept {
  return *selected().load(std::memory_order_relaxed);
}

bool select_kernels(std::string_view name) noexcept {
  const KernelTable* table = nullptr;
  if (name == "scalar") {
    table = &scalar_kernels();
  } else if (name == "avx2") {
    table = avx2_kernels();
  } else if (name == "auto") {
    table = avx2_kernels() != nullptr ? avx2_kernels() : &scalar_kernels();
  }
  if (table == nullptr) return false;
  selected().store(table, std::memory_order_relaxed);
  return true;
}

}  // namespace clustercoop::kernels
