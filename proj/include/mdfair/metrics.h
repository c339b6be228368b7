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

#ifndef MDFAIR_METRICS_H_
#define MDFAIR_METRICS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mdfair/dataset.h"

namespace mdfair {

// Which event rate a metric compares.
//   kSelectionRate     P(yhat=+)          over all records
//   kTruePositiveRate  P(yhat=y | y=+)    over y=+
//   kFalsePositiveRate P(yhat=+ | y=-)    over y=-
//   kAccuracy          P(yhat=y)          over all records
enum class Condition {
  kSelectionRate,
  kTruePositiveRate,
  kFalsePositiveRate,
  kAccuracy,
};

std::string_view ConditionName(Condition condition);
// Accepts the canonical names and the short forms sp, tpr, eo, fpr, acc.
Condition ParseCondition(std::string_view text);
bool NeedsLabels(Condition condition);

// Smoothed empirical rate (numerator + alpha) / (denominator + 2 alpha).
struct GroupRate {
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
  double alpha = 0.0;

  bool defined() const { return static_cast<double>(denominator) + 2 * alpha > 0; }
  // Throws UndefinedRate when !defined().
  double value() const;
  std::optional<double> maybe_value() const;
};

// Classifies single records for one condition. Shared by every estimator
// that counts records (datasets and pipeline stages).
struct ConditionEvent {
  bool in_denominator = false;
  bool in_numerator = false;
};
ConditionEvent Classify(Condition condition, Label truth, Label prediction);

GroupRate EstimateRate(const Dataset& dataset,
                       std::span<const std::uint32_t> records,
                       Condition condition, double alpha = 0.0);
GroupRate EstimateRate(const Dataset& dataset, Condition condition,
                       double alpha = 0.0);

struct Support {
  std::string label;
  std::int64_t numerator = 0;
  std::int64_t denominator = 0;
};

struct MetricResult {
  std::string subject;
  double value = 0.0;
  double epsilon = 0.0;
  // value > 0, exactly.
  bool violated = false;
  std::optional<double> signed_difference;
  std::vector<Support> supports;
};

MetricResult MakeResult(std::string subject, double value, double epsilon,
                        std::vector<Support> supports = {});

// |rate(g) - rate(g-bar)| - epsilon for one binary attribute, with the
// signed difference rate(g-bar) - rate(g) reported alongside.
MetricResult GroupDiscrimination(const Dataset& dataset, std::size_t attribute,
                                 Condition condition, double epsilon,
                                 double alpha = 0.0);

}  // namespace mdfair

#endif  // MDFAIR_METRICS_H_
