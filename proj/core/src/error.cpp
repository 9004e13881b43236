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

#include "scaeval/error.hpp"

namespace scaeval {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kMissingTable: return "MissingTable";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kDuplicateObservation: return "DuplicateObservation";
    case ErrorCode::kInconsistentClipLength: return "InconsistentClipLength";
    case ErrorCode::kMalformedRle: return "MalformedRle";
    case ErrorCode::kWindowTooLong: return "WindowTooLong";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingMetric: return "MissingMetric";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kDuplicateVerdict: return "DuplicateVerdict";
    case ErrorCode::kTransportError: return "TransportError";
    case ErrorCode::kUnparseableResponse: return "UnparseableResponse";
  }
  return "Unknown";
}

}  // namespace scaeval
