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

#include "mdfair/metrics.h"

#include <cmath>

#include "mdfair/error.h"

namespace mdfair {
namespace {

void CheckInputs(const Dataset& dataset, Condition condition, double alpha) {
  if (!(alpha >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "smoothing alpha must be >= 0");
  }
  if (!dataset.has_predictions()) {
    throw Error(ErrorCode::kPredictionsRequired, "dataset has no predictions");
  }
  if (NeedsLabels(condition) && !dataset.has_labels()) {
    throw Error(ErrorCode::kLabelsRequired,
                std::string(ConditionName(condition)) + " needs ground truth");
  }
}

void Accumulate(const Dataset& dataset, std::uint32_t record,
                Condition condition, GroupRate& rate) {
  const Label truth = dataset.label(record);
  if (NeedsLabels(condition) && truth == Label::kAbsent) {
    throw Error(ErrorCode::kLabelsRequired,
                "record " + std::to_string(record) + " has no label");
  }
  const ConditionEvent e = Classify(condition, truth, dataset.prediction(record));
  rate.denominator += e.in_denominator;
  rate.numerator += e.in_numerator;
}

}  // namespace

std::string_view ConditionName(Condition condition) {
  switch (condition) {
    case Condition::kSelectionRate: return "selection-rate";
    case Condition::kTruePositiveRate: return "true-positive-rate";
    case Condition::kFalsePositiveRate: return "false-positive-rate";
    case Condition::kAccuracy: return "accuracy";
  }
  return "unknown";
}

Condition ParseCondition(std::string_view text) {
  if (text == "selection-rate" || text == "sp") return Condition::kSelectionRate;
  if (text == "true-positive-rate" || text == "tpr" || text == "eo") {
    return Condition::kTruePositiveRate;
  }
  if (text == "false-positive-rate" || text == "fpr") {
    return Condition::kFalsePositiveRate;
  }
  if (text == "accuracy" || text == "acc") return Condition::kAccuracy;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown condition '" + std::string(text) + "'");
}

bool NeedsLabels(Condition condition) {
  return condition != Condition::kSelectionRate;
}

double GroupRate::value() const {
  if (!defined()) {
    throw Error(ErrorCode::kUndefinedRate, "empty denominator");
  }
  return (static_cast<double>(numerator) + alpha) /
         (static_cast<double>(denominator) + 2 * alpha);
}

std::optional<double> GroupRate::maybe_value() const {
  if (!defined()) return std::nullopt;
  return value();
}

ConditionEvent Classify(Condition condition, Label truth, Label prediction) {
  const bool predicted_positive = prediction == Label::kPositive;
  switch (condition) {
    case Condition::kSelectionRate:
      return {true, predicted_positive};
    case Condition::kTruePositiveRate:
      return {truth == Label::kPositive,
              truth == Label::kPositive && predicted_positive};
    case Condition::kFalsePositiveRate:
      return {truth == Label::kNegative,
              truth == Label::kNegative && predicted_positive};
    case Condition::kAccuracy:
      return {true, truth == prediction};
  }
  return {};
}

GroupRate EstimateRate(const Dataset& dataset,
                       std::span<const std::uint32_t> records,
                       Condition condition, double alpha) {
  CheckInputs(dataset, condition, alpha);
  GroupRate rate;
  rate.alpha = alpha;
  for (std::uint32_t r : records) Accumulate(dataset, r, condition, rate);
  return rate;
}

GroupRate EstimateRate(const Dataset& dataset, Condition condition,
                       double alpha) {
  CheckInputs(dataset, condition, alpha);
  GroupRate rate;
  rate.alpha = alpha;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    Accumulate(dataset, static_cast<std::uint32_t>(r), condition, rate);
  }
  return rate;
}

MetricResult MakeResult(std::string subject, double value, double epsilon,
                        std::vector<Support> supports) {
  MetricResult result;
  result.subject = std::move(subject);
  result.value = value;
  result.epsilon = epsilon;
  result.violated = value > 0.0;
  result.supports = std::move(supports);
  return result;
}

MetricResult GroupDiscrimination(const Dataset& dataset, std::size_t attribute,
                                 Condition condition, double epsilon,
                                 double alpha) {
  if (!(epsilon >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  CheckInputs(dataset, condition, alpha);
  const ProtectedAttribute& attr = dataset.schema().attributes.at(attribute);
  const std::uint32_t protected_code = attr.ProtectedCode();
  GroupRate rates[2];
  rates[0].alpha = rates[1].alpha = alpha;
  for (std::size_t r = 0; r < dataset.size(); ++r) {
    const int slot = dataset.code(r, attribute) == protected_code ? 0 : 1;
    Accumulate(dataset, static_cast<std::uint32_t>(r), condition, rates[slot]);
  }
  const std::string& protected_label = attr.domain[protected_code];
  const std::string& other_label = attr.domain[1 - protected_code];
  if (!rates[0].defined()) {
    throw Error(ErrorCode::kUndefinedRate,
                attr.name + "=" + protected_label + " has no qualifying records");
  }
  if (!rates[1].defined()) {
    throw Error(ErrorCode::kUndefinedRate,
                attr.name + "=" + other_label + " has no qualifying records");
  }
  const double protected_rate = rates[0].value();
  const double other_rate = rates[1].value();
  MetricResult result = MakeResult(
      attr.name, std::abs(protected_rate - other_rate) - epsilon, epsilon,
      {Support{protected_label, rates[0].numerator, rates[0].denominator},
       Support{other_label, rates[1].numerator, rates[1].denominator}});
  result.signed_difference = other_rate - protected_rate;
  return result;
}

}  // namespace mdfair
