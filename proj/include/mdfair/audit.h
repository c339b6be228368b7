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

#ifndef MDFAIR_AUDIT_H_
#define MDFAIR_AUDIT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mdfair/cumulative.h"
#include "mdfair/dataset.h"
#include "mdfair/metrics.h"
#include "mdfair/pipeline.h"
#include "mdfair/report.h"

namespace mdfair {

enum class MetricKind {
  kGroup,
  kCumulative,
  kSpsf,
  kFpsf,
  kDf,
  kWcf,
  kSeqGroup,
  kSeqSubgroup,
  kSeqMulti,
};

std::string_view MetricName(MetricKind kind);
MetricKind ParseMetric(std::string_view text);
// Comma-separated metric names; empty text selects nothing.
std::vector<MetricKind> ParseMetricList(std::string_view text);
// "cumulative", "intersectional" or "sequential".
std::string_view Typology(MetricKind kind);
bool IsSequential(MetricKind kind);

struct PairEpsilon {
  std::string first;
  std::string second;
  double epsilon = 0.0;
};

struct AuditConfig {
  std::vector<MetricKind> metrics;
  Condition condition = Condition::kSelectionRate;
  double epsilon = 0.0;
  // DF per-pair tolerances, subgroups given by name.
  std::vector<PairEpsilon> pair_epsilons;
  CombineOperator op = CombineOperator::kMax;
  double alpha = 0.0;
  std::size_t min_support = 0;
  // Attributes to audit, in order; empty means all.
  std::vector<std::string> attributes;
  // DF outcome class.
  Label df_outcome = Label::kPositive;
  // F(0): one value for every attribute, or one per audited attribute.
  std::vector<double> f0 = {0.0};
  // Sequential subgroup mode. Without a target every occupied subgroup is
  // compared with the reference; without a reference the subgroup with the
  // highest end-to-end acceptance rate is used.
  std::optional<std::string> target;
  std::optional<std::string> reference;
};

// JSON config file. Keys mirror the fields above: "metrics" (array of
// names), "condition", "epsilon", "pair_epsilons" ([{"first", "second",
// "epsilon"}]), "operator", "alpha", "min_support", "attributes",
// "df_outcome" ("positive" | "negative"), "f0" (number or array), "target",
// "reference".
AuditConfig ParseAuditConfig(const std::string& json_text);
Json ToJson(const AuditConfig& config);

struct AuditOutcome {
  Json report;
  // Number of metric entries with at least one violated result.
  int violations = 0;
  int exit_code() const { return violations > 0 ? 1 : 0; }
};

// Applies the schema's declared binarization, restricts to the configured
// attributes and evaluates the selected non-sequential metrics.
AuditOutcome RunAudit(const Dataset& dataset, const AuditConfig& config);

// Validates the trace (InvalidPipeline listing the violations), binarizes
// and evaluates the selected sequential metrics.
AuditOutcome RunPipelineAudit(const PipelineTrace& trace,
                              const AuditConfig& config);

// Scarcity report after declared binarization.
Json RunSubgroups(const Dataset& dataset,
                  const std::vector<std::string>& attributes = {});

Json SummarizeDataset(const Dataset& dataset);

}  // namespace mdfair

#endif  // MDFAIR_AUDIT_H_
