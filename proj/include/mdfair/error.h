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

#ifndef MDFAIR_ERROR_H_
#define MDFAIR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdfair {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidSchema,
  kIo,
  kMissingColumn,
  kDomainViolation,
  kUnparsableRow,
  kMissingValue,
  kIncompleteRule,
  kNonNumericThreshold,
  kNotBinarized,
  kMissingLabels,
  kLabelsRequired,
  kPredictionsRequired,
  kUndefinedRate,
  kZeroRate,
  kDegeneratePenalty,
  kNoEligibleSubgroup,
  kTooManySubgroups,
  kInvalidPipeline,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. The message is
// prefixed with the code name, e.g. "MissingColumn: income".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mdfair

#endif  // MDFAIR_ERROR_H_
