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

#include "mdfair/intersectional.h"

#include <cmath>
#include <limits>

#include "mdfair/error.h"

namespace mdfair {
namespace {

void CheckEpsilon(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
}

MetricResult CombineSubgroups(const std::string& metric,
                              const std::vector<SubgroupResult>& subgroups,
                              CombineOperator op, double epsilon) {
  std::vector<double> values;
  for (const auto& s : subgroups) values.push_back(s.result.value);
  const double value = values.empty() ? -epsilon : Combine(op, values);
  return MakeResult(metric, value, epsilon);
}

// Shared body of SPSF and FPSF: weight * |overall - rate(sg)| - epsilon.
SubgroupMetricSet WeightedDeviation(const Dataset& dataset,
                                    const SubgroupIndex& index,
                                    Condition condition, double epsilon,
                                    CombineOperator op,
                                    const std::string& metric) {
  CheckEpsilon(epsilon);
  const GroupRate overall = EstimateRate(dataset, condition);
  if (!overall.defined()) {
    throw Error(ErrorCode::kUndefinedRate,
                metric + ": overall " + std::string(ConditionName(condition)) +
                    " has no qualifying records");
  }
  const double overall_rate = overall.value();
  const double n = static_cast<double>(index.total());

  SubgroupMetricSet set;
  set.metric = metric;
  for (const Subgroup& sg : index.subgroups()) {
    const GroupRate rate = EstimateRate(dataset, sg.records, condition);
    SubgroupResult entry;
    entry.key = sg.key;
    entry.name = SubgroupName(dataset.schema(), sg.key);
    // The weight is the mass of the qualifying records: P(sg) for selection
    // rate, P(y=-, sg) for false positive rate.
    const double weight = static_cast<double>(rate.denominator) / n;
    double value = -epsilon;
    if (rate.denominator > 0) {
      value = weight * std::abs(overall_rate - rate.value()) - epsilon;
    } else {
      entry.flags.push_back(condition == Condition::kFalsePositiveRate
                                ? "no negative support"
                                : "no support");
    }
    entry.result = MakeResult(
        entry.name, value, epsilon,
        {Support{entry.name, rate.numerator, rate.denominator},
         Support{"overall", overall.numerator, overall.denominator}});
    set.subgroups.push_back(std::move(entry));
  }
  set.combined = CombineSubgroups(metric, set.subgroups, op, epsilon);
  return set;
}

}  // namespace

PairEpsilonPolicy::PairEpsilonPolicy(double default_epsilon)
    : default_epsilon_(default_epsilon) {
  CheckEpsilon(default_epsilon);
}

void PairEpsilonPolicy::SetOverride(const SubgroupKey& a, const SubgroupKey& b,
                                    double epsilon) {
  CheckEpsilon(epsilon);
  overrides_[a < b ? std::pair(a, b) : std::pair(b, a)] = epsilon;
}

double PairEpsilonPolicy::Epsilon(const SubgroupKey& a,
                                  const SubgroupKey& b) const {
  const auto it = overrides_.find(a < b ? std::pair(a, b) : std::pair(b, a));
  return it == overrides_.end() ? default_epsilon_ : it->second;
}

SubgroupMetricSet StatisticalParitySubgroupFairness(const Dataset& dataset,
                                                    const SubgroupIndex& index,
                                                    double epsilon,
                                                    CombineOperator op) {
  return WeightedDeviation(dataset, index, Condition::kSelectionRate, epsilon,
                           op, "spsf");
}

SubgroupMetricSet FalsePositiveSubgroupFairness(const Dataset& dataset,
                                                const SubgroupIndex& index,
                                                double epsilon,
                                                CombineOperator op) {
  if (!dataset.has_labels()) {
    throw Error(ErrorCode::kLabelsRequired, "fpsf needs ground truth");
  }
  return WeightedDeviation(dataset, index, Condition::kFalsePositiveRate,
                           epsilon, op, "fpsf");
}

double DifferentialFairnessPairValue(double rate_a, double rate_b,
                                     double epsilon) {
  const double hi = std::max(rate_a, rate_b);
  const double lo = std::min(rate_a, rate_b);
  double ratio = 1.0;
  if (hi > 0.0) {
    ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  }
  return ratio - std::exp(epsilon);
}

SubgroupMetricSet DifferentialFairness(
    const Dataset& dataset, const SubgroupIndex& index,
    const PairEpsilonPolicy& policy,
    const DifferentialFairnessOptions& options) {
  if (options.outcome == Label::kAbsent) {
    throw Error(ErrorCode::kInvalidArgument, "DF class must be + or -");
  }
  if (!(options.alpha >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing alpha must be >= 0");
  }
  if (!dataset.has_predictions()) {
    throw Error(ErrorCode::kPredictionsRequired, "dataset has no predictions");
  }
  SubgroupMetricSet set;
  set.metric = "df";
  for (const Subgroup& sg : index.subgroups()) {
    const std::string name = SubgroupName(dataset.schema(), sg.key);
    if (sg.records.size() < options.min_support) {
      set.excluded.push_back(
          {sg.key, name,
           "support " + std::to_string(sg.records.size()) +
               " below min_support " + std::to_string(options.min_support)});
      continue;
    }
    GroupRate rate;
    rate.alpha = options.alpha;
    rate.denominator = static_cast<std::int64_t>(sg.records.size());
    for (std::uint32_t r : sg.records) {
      rate.numerator += dataset.prediction(r) == options.outcome;
    }
    if (!rate.defined()) {
      set.excluded.push_back({sg.key, name, "undefined rate"});
      continue;
    }
    set.rates.push_back({sg.key, name, rate});
  }
  if (set.rates.empty()) {
    throw Error(ErrorCode::kNoEligibleSubgroup,
                "df: no subgroup meets the support policy");
  }
  if (set.rates.size() > options.max_subgroups) {
    throw Error(ErrorCode::kTooManySubgroups,
                "df: " + std::to_string(set.rates.size()) +
                    " subgroups exceed the pair limit of " +
                    std::to_string(options.max_subgroups));
  }

  std::vector<double> values(set.rates.size());
  for (std::size_t i = 0; i < set.rates.size(); ++i) {
    values[i] = set.rates[i].rate.value();
  }
  for (std::size_t i = 0; i < set.rates.size(); ++i) {
    for (std::size_t j = i + 1; j < set.rates.size(); ++j) {
      const double eps = policy.Epsilon(set.rates[i].key, set.rates[j].key);
      PairResult pair;
      pair.first = i;
      pair.second = j;
      const double value = DifferentialFairnessPairValue(values[i], values[j], eps);
      pair.infinite = std::isinf(value);
      pair.result = MakeResult(
          set.rates[i].name + " | " + set.rates[j].name, value, eps,
          {Support{set.rates[i].name, set.rates[i].rate.numerator,
                   set.rates[i].rate.denominator},
           Support{set.rates[j].name, set.rates[j].rate.numerator,
                   set.rates[j].rate.denominator}});
      set.pairs.push_back(std::move(pair));
    }
  }

  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] < values[lo]) lo = i;
    if (values[i] > values[hi]) hi = i;
  }
  set.arg_min = set.rates[lo].key;
  set.arg_max = set.rates[hi].key;
  if (values[hi] == 0.0) {
    set.epsilon_star = 0.0;
  } else if (values[lo] == 0.0) {
    set.epsilon_star = std::numeric_limits<double>::infinity();
  } else {
    set.epsilon_star = std::log(values[hi] / values[lo]);
  }

  if (set.pairs.empty()) {
    const double eps = policy.Epsilon(set.rates[0].key, set.rates[0].key);
    set.combined = MakeResult("df", DifferentialFairnessPairValue(
                                        values[0], values[0], eps),
                              eps);
  } else {
    std::vector<double> pair_values;
    for (const auto& p : set.pairs) pair_values.push_back(p.result.value);
    set.combined = MakeResult("df", Combine(options.op, pair_values),
                              policy.default_epsilon());
  }
  return set;
}

SubgroupMetricSet WorstCaseFairness(const Dataset& dataset,
                                    const SubgroupIndex& index,
                                    Condition condition,
                                    std::size_t min_support, double alpha) {
  SubgroupMetricSet set;
  set.metric = "wcf";
  for (const Subgroup& sg : index.subgroups()) {
    const std::string name = SubgroupName(dataset.schema(), sg.key);
    if (sg.records.size() < min_support) {
      set.excluded.push_back(
          {sg.key, name,
           "support " + std::to_string(sg.records.size()) +
               " below min_support " + std::to_string(min_support)});
      continue;
    }
    const GroupRate rate = EstimateRate(dataset, sg.records, condition, alpha);
    if (!rate.defined()) {
      set.excluded.push_back({sg.key, name, "undefined rate"});
      continue;
    }
    set.rates.push_back({sg.key, name, rate});
  }
  if (set.rates.empty()) {
    throw Error(ErrorCode::kNoEligibleSubgroup,
                "wcf: no subgroup has a defined rate under the support policy");
  }
  std::size_t lo = 0;
  std::size_t hi = 0;
  for (std::size_t i = 1; i < set.rates.size(); ++i) {
    if (set.rates[i].rate.value() < set.rates[lo].rate.value()) lo = i;
    if (set.rates[i].rate.value() > set.rates[hi].rate.value()) hi = i;
  }
  const double min_rate = set.rates[lo].rate.value();
  const double max_rate = set.rates[hi].rate.value();
  const double value = max_rate == 0.0 ? 0.0 : 1.0 - min_rate / max_rate;
  set.arg_min = set.rates[lo].key;
  set.arg_max = set.rates[hi].key;
  set.combined = MakeResult(
      "wcf", value, 0.0,
      {Support{set.rates[lo].name, set.rates[lo].rate.numerator,
               set.rates[lo].rate.denominator},
       Support{set.rates[hi].name, set.rates[hi].rate.numerator,
               set.rates[hi].rate.denominator}});
  return set;
}

}  // namespace mdfair
