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

#ifndef MDFAIR_TESTS_INVARIANTS_H_
#define MDFAIR_TESTS_INVARIANTS_H_

// Property checks over generated datasets and traces. Each check returns a
// list of human-readable failures; an empty list means the property held.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mdfair/cumulative.h"
#include "mdfair/dataset.h"
#include "mdfair/error.h"
#include "mdfair/intersectional.h"
#include "mdfair/metrics.h"
#include "mdfair/pipeline.h"
#include "mdfair/scenarios.h"
#include "mdfair/sequential.h"
#include "mdfair/subgroups.h"

namespace invariants {

using Failures = std::vector<std::string>;

inline constexpr int kDatasets = 200;
inline constexpr int kTraces = 100;

inline mdfair::RandomSpec Spec(int i) {
  return {.n = static_cast<std::size_t>(1 + (i * 37) % 300),
          .k = static_cast<std::size_t>(1 + i % 4),
          .seed = 0x1a7a0000u + static_cast<std::uint64_t>(i)};
}

inline std::optional<double> Try(const std::function<double()>& f) {
  try {
    return f();
  } catch (const mdfair::Error&) {
    return std::nullopt;
  }
}

inline std::string Show(std::optional<double> v) {
  if (!v) return "error";
  std::ostringstream s;
  s.precision(17);
  s << *v;
  return s.str();
}

// Every record lands in exactly one occupied subgroup whose key is the
// record's own attribute codes, and the occupied count is at most min(n, 2^k).
inline Failures Partition() {
  Failures failures;
  for (int i = 0; i < kDatasets; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom(Spec(i));
    const mdfair::SubgroupIndex index = mdfair::EnumerateSubgroups(d);
    std::vector<int> seen(d.size(), 0);
    for (const auto& sg : index.subgroups()) {
      for (const auto r : sg.records) {
        ++seen[r];
        for (std::size_t j = 0; j < d.num_attributes(); ++j) {
          if (d.code(r, j) != sg.key.groups[j]) {
            failures.push_back("dataset " + std::to_string(i) + ": record " +
                               std::to_string(r) + " in wrong subgroup");
          }
        }
      }
    }
    if (std::any_of(seen.begin(), seen.end(), [](int s) { return s != 1; })) {
      failures.push_back("dataset " + std::to_string(i) +
                         ": records not covered exactly once");
    }
    const double bound = std::min(static_cast<double>(d.size()),
                                  std::ldexp(1.0, static_cast<int>(d.num_attributes())));
    if (static_cast<double>(index.subgroups().size()) > bound ||
        index.total() != d.size() ||
        index.empty_count() !=
            index.lattice_size() - static_cast<double>(index.subgroups().size())) {
      failures.push_back("dataset " + std::to_string(i) + ": bad counts");
    }
  }
  return failures;
}

inline mdfair::Dataset Duplicated(const mdfair::Dataset& d) {
  std::ostringstream out;
  mdfair::WriteCsv(d, out);
  const std::string csv = out.str();
  const std::size_t header_end = csv.find('\n') + 1;
  std::istringstream in(csv + csv.substr(header_end));
  return mdfair::ReadCsv(in, d.schema());
}

// Named metric values of a dataset; undefined values are recorded as errors.
inline std::vector<std::pair<std::string, std::optional<double>>> MetricValues(
    const mdfair::Dataset& d) {
  using namespace mdfair;
  std::vector<std::pair<std::string, std::optional<double>>> values;
  const SubgroupIndex index = EnumerateSubgroups(d);
  std::vector<std::size_t> attrs(d.num_attributes());
  for (std::size_t j = 0; j < attrs.size(); ++j) attrs[j] = j;
  for (const Condition c :
       {Condition::kSelectionRate, Condition::kTruePositiveRate,
        Condition::kFalsePositiveRate, Condition::kAccuracy}) {
    const std::string name(ConditionName(c));
    for (std::size_t j = 0; j < attrs.size(); ++j) {
      values.emplace_back("group " + name + " " + std::to_string(j), Try([&] {
                            return GroupDiscrimination(d, j, c, 0).value;
                          }));
    }
    for (const CombineOperator op :
         {CombineOperator::kMax, CombineOperator::kSum, CombineOperator::kMean}) {
      values.emplace_back("cumulative " + name + " " + std::string(OperatorName(op)),
                          Try([&] {
                            return CumulativeDiscrimination(d, attrs, c, op, 0)
                                .combined.value;
                          }));
    }
    values.emplace_back("wcf " + name, Try([&] {
                          return WorstCaseFairness(d, index, c).combined.value;
                        }));
  }
  values.emplace_back("spsf", Try([&] {
                        return StatisticalParitySubgroupFairness(d, index, 0)
                            .combined.value;
                      }));
  values.emplace_back("fpsf", Try([&] {
                        return FalsePositiveSubgroupFairness(d, index, 0)
                            .combined.value;
                      }));
  values.emplace_back("df", Try([&] {
                        return DifferentialFairness(d, index, PairEpsilonPolicy(0))
                            .combined.value;
                      }));
  return values;
}

// With no smoothing every metric is a function of rates and shares, so
// doubling every record changes nothing.
inline Failures DuplicationInvariance() {
  Failures failures;
  for (int i = 0; i < kDatasets; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom(Spec(i));
    const auto before = MetricValues(d);
    const auto after = MetricValues(Duplicated(d));
    for (std::size_t m = 0; m < before.size(); ++m) {
      const auto& a = before[m].second;
      const auto& b = after[m].second;
      const bool same = a.has_value() == b.has_value() &&
                        (!a || *a == *b || (std::isnan(*a) && std::isnan(*b)));
      if (!same) {
        failures.push_back("dataset " + std::to_string(i) + " " +
                           before[m].first + ": " + Show(a) + " vs " + Show(b));
      }
    }
  }
  return failures;
}

// DF pair values do not depend on argument order, and DF over a dataset does
// not depend on the order in which attributes are declared.
inline Failures DfSymmetry() {
  Failures failures;
  const double rates[] = {0.0, 0.1, 0.25, 0.5, 0.8, 1.0};
  for (const double a : rates) {
    for (const double b : rates) {
      for (const double eps : {0.0, 0.2, std::log(1.25)}) {
        const double ab = mdfair::DifferentialFairnessPairValue(a, b, eps);
        const double ba = mdfair::DifferentialFairnessPairValue(b, a, eps);
        if (ab != ba) {
          failures.push_back("pair value asymmetric at " + Show(a) + ", " + Show(b));
        }
      }
    }
  }
  for (int i = 0; i < kDatasets; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom(Spec(i));
    if (d.num_attributes() < 2) continue;
    mdfair::AttributeSchema reversed = d.schema();
    std::reverse(reversed.attributes.begin(), reversed.attributes.end());
    std::ostringstream out;
    mdfair::WriteCsv(d, out);
    std::istringstream in(out.str());
    const mdfair::Dataset r = mdfair::ReadCsv(in, reversed);
    for (const mdfair::Label c : {mdfair::Label::kPositive, mdfair::Label::kNegative}) {
      const auto df = [&](const mdfair::Dataset& x) {
        return Try([&] {
          return mdfair::DifferentialFairness(x, mdfair::EnumerateSubgroups(x),
                                              mdfair::PairEpsilonPolicy(0),
                                              {.outcome = c})
              .combined.value;
        });
      };
      const auto a = df(d);
      const auto b = df(r);
      if (a.has_value() != b.has_value() || (a && *a != *b)) {
        failures.push_back("dataset " + std::to_string(i) +
                           ": DF changes with attribute order: " + Show(a) +
                           " vs " + Show(b));
      }
    }
  }
  return failures;
}

// 0 <= WCF <= 1 for every condition and support threshold.
inline Failures WcfRange() {
  Failures failures;
  for (int i = 0; i < kDatasets; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom(Spec(i));
    const mdfair::SubgroupIndex index = mdfair::EnumerateSubgroups(d);
    for (const mdfair::Condition c :
         {mdfair::Condition::kSelectionRate, mdfair::Condition::kTruePositiveRate,
          mdfair::Condition::kFalsePositiveRate, mdfair::Condition::kAccuracy}) {
      for (const std::size_t min_support : {0u, 5u}) {
        const auto v = Try([&] {
          return mdfair::WorstCaseFairness(d, index, c, min_support).combined.value;
        });
        if (v && !(*v >= 0.0 && *v <= 1.0)) {
          failures.push_back("dataset " + std::to_string(i) + ": WCF " + Show(v));
        }
      }
    }
  }
  return failures;
}

// At epsilon 0 each SPSF term lies in [0, min(P(sg), 1/4)] and each FPSF
// term in [0, min(P(y=-, sg), 1/4)].
inline Failures WeightingBounds() {
  Failures failures;
  for (int i = 0; i < kDatasets; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom(Spec(i));
    if (d.size() == 0) continue;
    const mdfair::SubgroupIndex index = mdfair::EnumerateSubgroups(d);
    for (const bool fpr : {false, true}) {
      std::optional<mdfair::SubgroupMetricSet> set;
      try {
        set = fpr ? mdfair::FalsePositiveSubgroupFairness(d, index, 0)
                  : mdfair::StatisticalParitySubgroupFairness(d, index, 0);
      } catch (const mdfair::Error&) {
        continue;
      }
      for (const auto& s : set->subgroups) {
        const double weight = static_cast<double>(s.result.supports[0].denominator) /
                              static_cast<double>(d.size());
        const double v = s.result.value;
        if (!(v >= 0.0 && v <= weight + 1e-15 && v <= 0.25 + 1e-15)) {
          failures.push_back("dataset " + std::to_string(i) + " " +
                             (fpr ? "fpsf " : "spsf ") + s.name + ": " +
                             Show(v) + " weight " + Show(weight));
        }
      }
    }
  }
  return failures;
}

// Dropping records from a subgroup without changing its rate lowers its
// SPSF term and leaves WCF unchanged.
inline Failures ScarcitySensitivity() {
  Failures failures;
  int evaluated = 0;
  for (int i = 0; i < 50; ++i) {
    const mdfair::Dataset d = mdfair::GenRandom({.n = 400, .k = 2,
                                                 .seed = 0x5ca7u + static_cast<std::uint64_t>(i)});
    const mdfair::SubgroupIndex index = mdfair::EnumerateSubgroups(d);
    if (index.subgroups().size() < 2) continue;
    // Halve the first subgroup by keeping every other positive and every
    // other negative prediction, which keeps its selection rate when both
    // counts are even.
    const auto& target = index.subgroups()[0];
    std::size_t pos = 0;
    std::size_t neg = 0;
    for (const auto r : target.records) {
      (d.prediction(r) == mdfair::Label::kPositive ? pos : neg)++;
    }
    if (pos % 2 || neg % 2 || pos + neg < 4) continue;
    ++evaluated;
    std::vector<char> keep(d.size(), 1);
    std::size_t seen_pos = 0;
    std::size_t seen_neg = 0;
    for (const auto r : target.records) {
      const bool positive = d.prediction(r) == mdfair::Label::kPositive;
      std::size_t& seen = positive ? seen_pos : seen_neg;
      keep[r] = seen++ % 2 == 0;
    }
    std::ostringstream out;
    mdfair::WriteCsv(d, out);
    std::istringstream lines(out.str());
    std::string line;
    std::string filtered;
    std::getline(lines, line);
    filtered += line + "\n";
    for (std::size_t r = 0; std::getline(lines, line); ++r) {
      if (keep[r]) filtered += line + "\n";
    }
    std::istringstream in(filtered);
    const mdfair::Dataset shrunk = mdfair::ReadCsv(in, d.schema());
    const mdfair::SubgroupIndex shrunk_index = mdfair::EnumerateSubgroups(shrunk);
    const auto spsf_before =
        mdfair::StatisticalParitySubgroupFairness(d, index, 0).subgroups[0].result.value;
    const auto spsf_after = mdfair::StatisticalParitySubgroupFairness(shrunk, shrunk_index, 0)
                                .subgroups[0]
                                .result.value;
    const double wcf_before =
        mdfair::WorstCaseFairness(d, index, mdfair::Condition::kSelectionRate)
            .combined.value;
    const double wcf_after =
        mdfair::WorstCaseFairness(shrunk, shrunk_index, mdfair::Condition::kSelectionRate)
            .combined.value;
    if (spsf_before > 0 && !(spsf_after < spsf_before)) {
      failures.push_back("seed " + std::to_string(i) + ": SPSF did not drop");
    }
    if (wcf_before != wcf_after) {
      failures.push_back("seed " + std::to_string(i) + ": WCF moved " +
                         Show(wcf_before) + " -> " + Show(wcf_after));
    }
  }
  if (evaluated < 5) {
    failures.push_back("only " + std::to_string(evaluated) + " shrink cases evaluated");
  }
  return failures;
}

// Copies `trace` with one outcome replaced.
inline mdfair::PipelineTrace WithOutcome(const mdfair::PipelineTrace& trace,
                                         std::size_t individual,
                                         std::size_t stage,
                                         mdfair::StageOutcome value) {
  std::vector<mdfair::StageOutcome> outcomes;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    for (std::size_t s = 0; s < trace.num_stages(); ++s) {
      outcomes.push_back(i == individual && s == stage ? value : trace.outcome(i, s));
    }
  }
  return mdfair::PipelineTrace(trace.population(), trace.stages(), std::move(outcomes));
}

// Generated funnels validate; any single corruption of a funnel is reported
// at the corrupted cell.
inline Failures MonotoneValidation() {
  using mdfair::StageOutcome;
  Failures failures;
  for (int i = 0; i < kTraces; ++i) {
    const mdfair::PipelineTrace t = mdfair::GenRandomPipeline(
        {.n = 60, .k = 2, .stages = 3, .seed = 0x3000u + static_cast<std::uint64_t>(i)});
    if (!mdfair::ValidatePipeline(t).ok()) {
      failures.push_back("trace " + std::to_string(i) + ": generated funnel invalid");
      continue;
    }
    std::size_t corrupted = 0;
    for (std::size_t person = 0; person < t.size() && corrupted < 5; ++person) {
      for (std::size_t s = 1; s < t.num_stages(); ++s) {
        const StageOutcome previous = t.outcome(person, s - 1);
        const StageOutcome current = t.outcome(person, s);
        StageOutcome replacement;
        std::string kind;
        if (previous != StageOutcome::kPositive) {
          replacement = StageOutcome::kPositive;
          kind = "non-monotone";
        } else if (current != StageOutcome::kNotReached) {
          replacement = StageOutcome::kNotReached;
          kind = "missing-outcome";
        } else {
          continue;
        }
        ++corrupted;
        const auto v = mdfair::ValidatePipeline(WithOutcome(t, person, s, replacement));
        const bool found = std::any_of(
            v.violations.begin(), v.violations.end(), [&](const auto& x) {
              return x.individual == person && x.stage == s + 1 && x.kind == kind;
            });
        if (!found) {
          failures.push_back("trace " + std::to_string(i) + ": " + kind +
                             " at individual " + std::to_string(person) +
                             " stage " + std::to_string(s + 1) + " not reported");
        }
        break;
      }
    }
  }
  return failures;
}

// Replacing the last stage ratio by RequiredTerminalRatio gives F(T) = 0.
inline Failures TerminalFixPoint() {
  Failures failures;
  int evaluated = 0;
  for (int i = 0; i < kTraces; ++i) {
    const mdfair::PipelineTrace t = mdfair::GenRandomPipeline(
        {.n = 300, .k = 2, .stages = 3, .seed = 0x7e40u + static_cast<std::uint64_t>(i)});
    const double f0 = 0.01 * (i % 50);
    for (std::size_t j = 0; j < t.schema().attributes.size(); ++j) {
      double required = 0;
      mdfair::SequentialResult r;
      try {
        required = mdfair::RequiredTerminalRatio(t, j, mdfair::Condition::kSelectionRate, f0);
        r = mdfair::SequentialGroupFairness(t, j, mdfair::Condition::kSelectionRate, f0);
      } catch (const mdfair::Error&) {
        continue;
      }
      ++evaluated;
      std::vector<double> ratios;
      for (const auto& s : r.stages) ratios.push_back(s.ratio);
      ratios.back() = required;
      const double last = mdfair::RecomputeFSequence(f0, ratios).back();
      if (!(std::abs(last) <= 1e-12)) {
        failures.push_back("trace " + std::to_string(i) + " attribute " +
                           std::to_string(j) + ": F(T) = " + Show(last));
      }
    }
  }
  if (evaluated < kTraces) {
    failures.push_back("only " + std::to_string(evaluated) + " fix-point cases evaluated");
  }
  return failures;
}

struct Check {
  const char* name;
  Failures (*run)();
};

inline constexpr Check kAllChecks[] = {
    {"partition", Partition},
    {"duplication invariance", DuplicationInvariance},
    {"DF symmetry", DfSymmetry},
    {"WCF range", WcfRange},
    {"SPSF/FPSF weighting bounds", WeightingBounds},
    {"scarcity sensitivity", ScarcitySensitivity},
    {"monotone validation", MonotoneValidation},
    {"terminal fix-point", TerminalFixPoint},
};

}  // namespace invariants

#endif  // MDFAIR_TESTS_INVARIANTS_H_
