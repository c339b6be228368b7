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

#ifndef MDFAIR_SEQUENTIAL_H_
#define MDFAIR_SEQUENTIAL_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mdfair/cumulative.h"
#include "mdfair/metrics.h"
#include "mdfair/pipeline.h"
#include "mdfair/subgroups.h"

namespace mdfair {

struct StageEvaluation {
  std::size_t stage = 0;  // 1-based
  std::string name;
  // Rates among the individuals who reached the stage.
  GroupRate reference;
  GroupRate target;
  double ratio = 0.0;    // reference rate / target rate
  double penalty = 0.0;  // product over l < stage of 1 / (1 + F(l))
  double fairness = 0.0;  // F(stage) = ratio - penalty
};

struct SequentialResult {
  std::string subject;
  std::string target;
  std::string reference;
  Condition condition = Condition::kSelectionRate;
  double f0 = 0.0;
  std::vector<StageEvaluation> stages;

  // F(0), F(1), ..., F(T).
  std::vector<double> FSequence() const;
  // Stage value as a metric result (violated when F > 0).
  MetricResult StageResult(std::size_t index) const;
};

// Sequential fairness of the protected group of a binary attribute against
// the rest of the population.
SequentialResult SequentialGroupFairness(
    const PipelineTrace& trace, std::size_t attribute,
    Condition condition = Condition::kSelectionRate, double f0 = 0.0);

// Sequential fairness of subgroup `target` against `reference`, or against
// MostPrivilegedSubgroup when no reference is given.
SequentialResult SequentialSubgroupFairness(
    const PipelineTrace& trace, const SubgroupKey& target,
    const std::optional<SubgroupKey>& reference = std::nullopt,
    Condition condition = Condition::kSelectionRate, double f0 = 0.0);

// Occupied subgroup with the highest end-to-end acceptance rate (positive at
// the last stage over subgroup size). Ties go to the smallest key.
SubgroupKey MostPrivilegedSubgroup(const PipelineTrace& trace);

// Product over t < T of 1 / (1 + F(t)) where T is the number of stages: the
// reference:target rate ratio at the last stage for which F(T) = 0. Only
// stages 1..T-1 are evaluated.
double RequiredTerminalRatio(const PipelineTrace& trace, std::size_t attribute,
                             Condition condition = Condition::kSelectionRate,
                             double f0 = 0.0);

// Product of 1 / (1 + f) over `sequence`.
double PenaltyProduct(std::span<const double> sequence);

// F(0..T) from F(0) and the per-stage rate ratios.
std::vector<double> RecomputeFSequence(double f0,
                                       std::span<const double> ratios);

struct SequentialMultiResult {
  CombineOperator op = CombineOperator::kMax;
  std::vector<SequentialResult> breakdown;  // one per attribute
  std::vector<MetricResult> combined;       // one per stage
};

SequentialMultiResult SequentialMulti(const PipelineTrace& trace,
                                      std::span<const std::size_t> attributes,
                                      Condition condition, CombineOperator op,
                                      std::span<const double> f0);

}  // namespace mdfair

#endif  // MDFAIR_SEQUENTIAL_H_
