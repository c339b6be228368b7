// Copyright 2026 The mdfair Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mdfair/error.h"

namespace mdfair {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidSchema: return "InvalidSchema";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kMissingColumn: return "MissingColumn";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kUnparsableRow: return "UnparsableRow";
    case ErrorCode::kMissingValue: return "MissingValue";
    case ErrorCode::kIncompleteRule: return "IncompleteRule";
    case ErrorCode::kNonNumericThreshold: return "NonNumericThreshold";
    case ErrorCode::kNotBinarized: return "NotBinarized";
    case ErrorCode::kMissingLabels: return "MissingLabels";
    case ErrorCode::kLabelsRequired: return "LabelsRequired";
    case ErrorCode::kPredictionsRequired: return "PredictionsRequired";
    case ErrorCode::kUndefinedRate: return "UndefinedRate";
    case ErrorCode::kZeroRate: return "ZeroRate";
    case ErrorCode::kDegeneratePenalty: return "DegeneratePenalty";
    case ErrorCode::kNoEligibleSubgroup: return "NoEligibleSubgroup";
    case ErrorCode::kTooManySubgroups: return "TooManySubgroups";
    case ErrorCode::kInvalidPipeline: return "InvalidPipeline";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& detail)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
      code_(code) {}

}  // namespace mdfair
