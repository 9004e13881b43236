/* Copyright 2026 The sca-eval Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef SCAEVAL_ERROR_HPP_
#define SCAEVAL_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace scaeval {

// Machine-readable failure codes. The names double as the `code` field of
// HTTP error bodies, so keep them stable.
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kMissingTable,
  kDanglingReference,
  kMalformedRecord,
  kDuplicateObservation,
  kInconsistentClipLength,
  kMalformedRle,
  kWindowTooLong,
  kEmptyInput,
  kDimensionMismatch,
  kMissingMetric,
  kUnknownTask,
  kDuplicateVerdict,
  kTransportError,
  kUnparseableResponse,
};

std::string_view ErrorCodeName(ErrorCode code);

// Status-like exception carrying a code. Validation failures and I/O
// failures are distinguished by code so that callers (the CLI in
// particular) can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  bool is_io() const noexcept { return code_ == ErrorCode::kIoError; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace scaeval

#endif  // SCAEVAL_ERROR_HPP_
