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

#ifndef CLUSTERCOOP_SRC_KERNELS_KERNELS_INTERNAL_H_
#define CLUSTERCOOP_SRC_KERNELS_KERNELS_INTERNAL_H_

#include "clustercoop/kernels.h"

namespace clustercoop::kernels {

inline constexpr double kSqrt3Over2 = 0.86602540378443864676;

#if defined(CLUSTERCOOP_HAVE_AVX2)
const KernelTable& avx2_kernels_unchecked() noexcept;
#endif

}  // namespace clustercoop::kernels

#endif  // CLUSTERCOOP_SRC_KERNELS_KERNELS_INTERNAL_H_
