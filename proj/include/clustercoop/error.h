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

#ifndef CLUSTERCOOP_ERROR_H_
#define CLUSTERCOOP_ERROR_H_

#include <stdexcept>
#include <string>

namespace clustercoop {

enum class ErrorCode {
  kInvalidParameter,
  kSingularity,
  kNumericalFailure,
  kCalibrationUnavailable,
  kInvalidConfig,
};

// All library failures are reported as Error; the code decides the CLI exit
// status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidParameter, what);
}

inline void require(bool condition, const std::string& what) {
  if (!condition) throw_invalid(what);
}

}  // namespace clustercoop

#endif  // CLUSTERCOOP_ERROR_H_
