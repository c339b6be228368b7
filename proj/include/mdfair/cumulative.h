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

#ifndef MDFAIR_CUMULATIVE_H_
#define MDFAIR_CUMULATIVE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mdfair/dataset.h"
#include "mdfair/metrics.h"

namespace mdfair {

enum class CombineOperator { kMax, kSum, kMean };

std::string_view OperatorName(CombineOperator op);
CombineOperator ParseOperator(std::string_view text);

// Throws InvalidArgument on an empty input.
double Combine(CombineOperator op, std::span<const double> values);

struct CumulativeResult {
  CombineOperator op = CombineOperator::kMax;
  MetricResult combined;
  // One group discrimination result per requested attribute, in request
  // order.
  std::vector<MetricResult> breakdown;
  // Index into breakdown of the largest term (first on ties). Set for kMax.
  std::optional<std::size_t> arg_max;
};

CumulativeResult CumulativeDiscrimination(
    const Dataset& dataset, std::span<const std::size_t> attributes,
    Condition condition, CombineOperator op, double epsilon,
    double alpha = 0.0);

}  // namespace mdfair

#endif  // MDFAIR_CUMULATIVE_H_
