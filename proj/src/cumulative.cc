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

#include "mdfair/cumulative.h"

#include <algorithm>
#include <string>

#include "mdfair/error.h"

namespace mdfair {

std::string_view OperatorName(CombineOperator op) {
  switch (op) {
    case CombineOperator::kMax: return "max";
    case CombineOperator::kSum: return "sum";
    case CombineOperator::kMean: return "mean";
  }
  return "unknown";
}

CombineOperator ParseOperator(std::string_view text) {
  if (text == "max") return CombineOperator::kMax;
  if (text == "sum") return CombineOperator::kSum;
  if (text == "mean") return CombineOperator::kMean;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown operator '" + std::string(text) + "'");
}

double Combine(CombineOperator op, std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "nothing to combine");
  }
  switch (op) {
    case CombineOperator::kMax:
      return *std::max_element(values.begin(), values.end());
    case CombineOperator::kSum:
    case CombineOperator::kMean: {
      double sum = 0.0;
      for (double v : values) sum += v;
      return op == CombineOperator::kSum
                 ? sum
                 : sum / static_cast<double>(values.size());
    }
  }
  return 0.0;
}

CumulativeResult CumulativeDiscrimination(
    const Dataset& dataset, std::span<const std::size_t> attributes,
    Condition condition, CombineOperator op, double epsilon, double alpha) {
  if (attributes.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "cumulative discrimination needs at least one attribute");
  }
  CumulativeResult result;
  result.op = op;
  std::vector<double> values;
  std::string subject;
  for (std::size_t attribute : attributes) {
    result.breakdown.push_back(
        GroupDiscrimination(dataset, attribute, condition, epsilon, alpha));
    values.push_back(result.breakdown.back().value);
    if (!subject.empty()) subject += "+";
    subject += result.breakdown.back().subject;
  }
  result.combined = MakeResult(subject, Combine(op, values), epsilon);
  if (op == CombineOperator::kMax) {
    result.arg_max = static_cast<std::size_t>(
        std::max_element(values.begin(), values.end()) - values.begin());
  }
  return result;
}

}  // namespace mdfair
