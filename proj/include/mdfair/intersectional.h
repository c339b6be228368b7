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

#ifndef MDFAIR_INTERSECTIONAL_H_
#define MDFAIR_INTERSECTIONAL_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mdfair/cumulative.h"
#include "mdfair/dataset.h"
#include "mdfair/metrics.h"
#include "mdfair/subgroups.h"

namespace mdfair {

struct SubgroupResult {
  SubgroupKey key;
  std::string name;
  MetricResult result;
  std::vector<std::string> flags;
};

struct SubgroupRate {
  SubgroupKey key;
  std::string name;
  GroupRate rate;
};

// Indices refer to SubgroupMetricSet::rates.
struct PairResult {
  std::size_t first = 0;
  std::size_t second = 0;
  MetricResult result;
  bool infinite = false;
};

struct ExcludedSubgroup {
  SubgroupKey key;
  std::string name;
  std::string reason;
};

struct SubgroupMetricSet {
  std::string metric;
  // Per-subgroup values (SPSF, FPSF).
  std::vector<SubgroupResult> subgroups;
  // Rates of the included subgroups (DF, WCF).
  std::vector<SubgroupRate> rates;
  // Unordered pairs i < j (DF).
  std::vector<PairResult> pairs;
  std::vector<ExcludedSubgroup> excluded;
  MetricResult combined;
  std::optional<SubgroupKey> arg_min;
  std::optional<SubgroupKey> arg_max;
  // DF only: smallest epsilon for which no pair is violated, ln(max/min).
  std::optional<double> epsilon_star;
};

// Default threshold plus per-pair overrides; lookups ignore pair order.
class PairEpsilonPolicy {
 public:
  explicit PairEpsilonPolicy(double default_epsilon = 0.0);

  void SetOverride(const SubgroupKey& a, const SubgroupKey& b, double epsilon);
  double Epsilon(const SubgroupKey& a, const SubgroupKey& b) const;
  double default_epsilon() const { return default_epsilon_; }

 private:
  double default_epsilon_;
  std::map<std::pair<SubgroupKey, SubgroupKey>, double> overrides_;
};

// P(sg) * |P(yhat=+) - P(yhat=+ | sg)| - epsilon per occupied subgroup;
// combined with `op`.
SubgroupMetricSet StatisticalParitySubgroupFairness(
    const Dataset& dataset, const SubgroupIndex& index, double epsilon,
    CombineOperator op = CombineOperator::kMax);

// P(y=-, sg) * |P(yhat=+ | y=-) - P(yhat=+ | y=-, sg)| - epsilon. Subgroups
// with no negatives get -epsilon and the flag "no negative support".
SubgroupMetricSet FalsePositiveSubgroupFairness(
    const Dataset& dataset, const SubgroupIndex& index, double epsilon,
    CombineOperator op = CombineOperator::kMax);

struct DifferentialFairnessOptions {
  Label outcome = Label::kPositive;  // class c
  double alpha = 0.0;
  std::size_t min_support = 0;
  CombineOperator op = CombineOperator::kMax;
  // The pair list is quadratic; more included subgroups than this is an
  // error (TooManySubgroups).
  std::size_t max_subgroups = 4096;
};

// max(r_i, r_j) / min(r_i, r_j) - e^epsilon(i, j) for every unordered pair
// of included subgroups, r = P(yhat=c | sg). A zero minimum against a
// positive maximum gives +infinity.
SubgroupMetricSet DifferentialFairness(const Dataset& dataset,
                                       const SubgroupIndex& index,
                                       const PairEpsilonPolicy& policy,
                                       const DifferentialFairnessOptions& options = {});

// Value of a single DF pair, also used for the self-pair (1 - e^epsilon).
double DifferentialFairnessPairValue(double rate_a, double rate_b,
                                     double epsilon);

// 1 - min/max of the subgroup rates under `condition`; 0 when every rate is
// zero. Throws NoEligibleSubgroup when nothing survives filtering.
SubgroupMetricSet WorstCaseFairness(const Dataset& dataset,
                                    const SubgroupIndex& index,
                                    Condition condition,
                                    std::size_t min_support = 0,
                                    double alpha = 0.0);

}  // namespace mdfair

#endif  // MDFAIR_INTERSECTIONAL_H_
