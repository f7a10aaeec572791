// Copyright 2026 The iraug Authors.
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

#ifndef IRAUG_ERROR_H_
#define IRAUG_ERROR_H_

#include <stdexcept>
#include <string>

namespace iraug {

// Failure categories. The numeric values are the CLI exit codes.
enum class ErrorKind {
  kUsage = 1,
  kData = 2,
  kMismatch = 3,  // model / vocabulary mismatch
  kNumeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }
  int exit_code() const { return static_cast<int>(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void UsageError(const std::string& msg) {
  throw Error(ErrorKind::kUsage, msg);
}
[[noreturn]] inline void DataError(const std::string& msg) {
  throw Error(ErrorKind::kData, msg);
}
[[noreturn]] inline void MismatchError(const std::string& msg) {
  throw Error(ErrorKind::kMismatch, msg);
}
[[noreturn]] inline void NumericError(const std::string& msg) {
  throw Error(ErrorKind::kNumeric, msg);
}

}  // namespace iraug

#endif  // IRAUG_ERROR_H_
