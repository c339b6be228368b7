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

#include "mdfair/sequential.h"

#include <algorithm>
#include <cstdint>
#include <utility>

#include "mdfair/error.h"

namespace mdfair {
namespace {

std::string StageLabel(const PipelineTrace& trace, std::size_t t) {
  return "stage " + std::to_string(t + 1) + " (" + trace.stages()[t] + ")";
}

GroupRate StageRate(const PipelineTrace& trace, std::size_t stage,
                    const std::vector<char>& member, Condition condition) {
  GroupRate rate;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (!member[i]) continue;
    const StageOutcome o = trace.outcome(i, stage);
    if (o == StageOutcome::kNotReached) continue;
    const Label prediction =
        o == StageOutcome::kPositive ? Label::kPositive : Label::kNegative;
    const Label truth = trace.truth(i, stage);
    if (NeedsLabels(condition) && truth == Label::kAbsent) {
      throw Error(ErrorCode::kLabelsRequired,
                  StageLabel(trace, stage) + ": individual " +
                      std::to_string(i) + " has no ground truth");
    }
    const ConditionEvent e = Classify(condition, truth, prediction);
    if (!e.in_denominator) continue;
    ++rate.denominator;
    if (e.in_numerator) ++rate.numerator;
  }
  return rate;
}

SequentialResult Evaluate(const PipelineTrace& trace, std::size_t num_stages,
                          const std::vector<char>& target,
                          const std::vector<char>& reference,
                          std::string target_name, std::string reference_name,
                          Condition condition, double f0) {
  SequentialResult result;
  result.subject = target_name + " vs " + reference_name;
  result.target = std::move(target_name);
  result.reference = std::move(reference_name);
  result.condition = condition;
  result.f0 = f0;
  double penalty = 1.0;
  double previous = f0;
  for (std::size_t t = 0; t < num_stages; ++t) {
    if (1.0 + previous == 0.0) {
      throw Error(ErrorCode::kDegeneratePenalty,
                  "F = -1 before " + StageLabel(trace, t));
    }
    penalty *= 1.0 / (1.0 + previous);
    StageEvaluation stage;
    stage.stage = t + 1;
    stage.name = trace.stages()[t];
    stage.reference = StageRate(trace, t, reference, condition);
    stage.target = StageRate(trace, t, target, condition);
    for (const auto* side : {&stage.reference, &stage.target}) {
      if (!side->defined()) {
        const std::string& who =
            side == &stage.target ? result.target : result.reference;
        throw Error(ErrorCode::kUndefinedRate,
                    StageLabel(trace, t) + ", group " + who +
                        ": no eligible survivors");
      }
    }
    if (stage.target.numerator == 0) {
      throw Error(ErrorCode::kZeroRate,
                  StageLabel(trace, t) + ", group " + result.target +
                      ": rate is 0");
    }
    stage.ratio = stage.reference.value() / stage.target.value();
    stage.penalty = penalty;
    stage.fairness = stage.ratio - penalty;
    previous = stage.fairness;
    result.stages.push_back(std::move(stage));
  }
  return result;
}

std::vector<char> GroupMask(const Dataset& population, std::size_t attribute,
                            bool protected_side) {
  const std::uint32_t code =
      population.schema().attributes[attribute].ProtectedCode();
  std::vector<char> mask(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    mask[i] = (population.code(i, attribute) == code) == protected_side;
  }
  return mask;
}

std::vector<char> SubgroupMask(const Dataset& population,
                               const SubgroupKey& key) {
  if (key.groups.size() != population.num_attributes()) {
    throw Error(ErrorCode::kInvalidArgument, "subgroup key arity mismatch");
  }
  std::vector<char> mask(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < key.groups.size() && match; ++j) {
      match = population.code(i, j) == key.groups[j];
    }
    mask[i] = match;
  }
  return mask;
}

void CheckAttribute(const PipelineTrace& trace, std::size_t attribute) {
  if (attribute >= trace.schema().attributes.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "attribute index " + std::to_string(attribute) +
                    " out of range");
  }
}

SequentialResult GroupSequence(const PipelineTrace& trace,
                               std::size_t attribute, std::size_t num_stages,
                               Condition condition, double f0) {
  CheckAttribute(trace, attribute);
  const ProtectedAttribute& attr = trace.schema().attributes[attribute];
  const std::uint32_t code = attr.ProtectedCode();
  std::string target = attr.domain[code];
  std::string reference = attr.domain[1 - code];
  SequentialResult result = Evaluate(
      trace, num_stages, GroupMask(trace.population(), attribute, true),
      GroupMask(trace.population(), attribute, false), std::move(target),
      std::move(reference), condition, f0);
  result.subject = attr.name;
  return result;
}

}  // namespace

std::vector<double> SequentialResult::FSequence() const {
  std::vector<double> sequence{f0};
  for (const auto& stage : stages) sequence.push_back(stage.fairness);
  return sequence;
}

MetricResult SequentialResult::StageResult(std::size_t index) const {
  const StageEvaluation& s = stages.at(index);
  MetricResult result = MakeResult(
      subject + " @ " + s.name, s.fairness, 0.0,
      {{reference, s.reference.numerator, s.reference.denominator},
       {target, s.target.numerator, s.target.denominator}});
  return result;
}

SequentialResult SequentialGroupFairness(const PipelineTrace& trace,
                                         std::size_t attribute,
                                         Condition condition, double f0) {
  return GroupSequence(trace, attribute, trace.num_stages(), condition, f0);
}

SubgroupKey MostPrivilegedSubgroup(const PipelineTrace& trace) {
  const SubgroupIndex index = EnumerateSubgroups(trace.population());
  if (index.subgroups().empty()) {
    throw Error(ErrorCode::kNoEligibleSubgroup, "empty population");
  }
  const std::size_t last = trace.num_stages() - 1;
  const Subgroup* best = nullptr;
  std::int64_t best_accepted = 0;
  for (const Subgroup& sg : index.subgroups()) {
    std::int64_t accepted = 0;
    for (const std::uint32_t i : sg.records) {
      if (trace.outcome(i, last) == StageOutcome::kPositive) ++accepted;
    }
    // accepted / size > best_accepted / best_size, in integers.
    if (best == nullptr ||
        accepted * static_cast<std::int64_t>(best->records.size()) >
            best_accepted * static_cast<std::int64_t>(sg.records.size())) {
      best = &sg;
      best_accepted = accepted;
    }
  }
  return best->key;
}

SequentialResult SequentialSubgroupFairness(
    const PipelineTrace& trace, const SubgroupKey& target,
    const std::optional<SubgroupKey>& reference, Condition condition,
    double f0) {
  const SubgroupKey ref = reference ? *reference : MostPrivilegedSubgroup(trace);
  const AttributeSchema& schema = trace.schema();
  SequentialResult result =
      Evaluate(trace, trace.num_stages(),
               SubgroupMask(trace.population(), target),
               SubgroupMask(trace.population(), ref),
               SubgroupName(schema, target), SubgroupName(schema, ref),
               condition, f0);
  return result;
}

double PenaltyProduct(std::span<const double> sequence) {
  double product = 1.0;
  for (const double f : sequence) {
    if (1.0 + f == 0.0) {
      throw Error(ErrorCode::kDegeneratePenalty, "F = -1 in sequence");
    }
    product *= 1.0 / (1.0 + f);
  }
  return product;
}

double RequiredTerminalRatio(const PipelineTrace& trace,
                             std::size_t attribute, Condition condition,
                             double f0) {
  CheckAttribute(trace, attribute);
  std::vector<double> sequence{f0};
  if (trace.num_stages() > 1) {
    sequence = GroupSequence(trace, attribute, trace.num_stages() - 1,
                             condition, f0)
                   .FSequence();
  }
  return PenaltyProduct(sequence);
}

std::vector<double> RecomputeFSequence(double f0,
                                       std::span<const double> ratios) {
  std::vector<double> sequence{f0};
  double penalty = 1.0;
  for (const double ratio : ratios) {
    const double previous = sequence.back();
    if (1.0 + previous == 0.0) {
      throw Error(ErrorCode::kDegeneratePenalty, "F = -1 in sequence");
    }
    penalty *= 1.0 / (1.0 + previous);
    sequence.push_back(ratio - penalty);
  }
  return sequence;
}

SequentialMultiResult SequentialMulti(const PipelineTrace& trace,
                                      std::span<const std::size_t> attributes,
                                      Condition condition, CombineOperator op,
                                      std::span<const double> f0) {
  if (attributes.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no attributes");
  }
  if (f0.size() != attributes.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "need one F(0) per attribute");
  }
  SequentialMultiResult result;
  result.op = op;
  for (std::size_t a = 0; a < attributes.size(); ++a) {
    result.breakdown.push_back(
        SequentialGroupFairness(trace, attributes[a], condition, f0[a]));
  }
  std::string subject;
  for (const auto& seq : result.breakdown) {
    subject += (subject.empty() ? "" : "+") + seq.subject;
  }
  for (std::size_t t = 0; t < trace.num_stages(); ++t) {
    std::vector<double> values;
    for (const auto& seq : result.breakdown) {
      values.push_back(seq.stages[t].fairness);
    }
    result.combined.push_back(MakeResult(
        subject + " @ " + trace.stages()[t], Combine(op, values), 0.0));
  }
  return result;
}

}  // namespace mdfair
