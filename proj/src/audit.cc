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

#include "mdfair/audit.h"

#include <algorithm>
#include <array>
#include <utility>

#include "mdfair/error.h"
#include "mdfair/intersectional.h"
#include "mdfair/sequential.h"
#include "mdfair/subgroups.h"

namespace mdfair {
namespace {

struct MetricInfo {
  MetricKind kind;
  std::string_view name;
  std::string_view typology;
};

constexpr std::array<MetricInfo, 9> kMetrics = {{
    {MetricKind::kGroup, "group", "cumulative"},
    {MetricKind::kCumulative, "cumulative", "cumulative"},
    {MetricKind::kSpsf, "spsf", "intersectional"},
    {MetricKind::kFpsf, "fpsf", "intersectional"},
    {MetricKind::kDf, "df", "intersectional"},
    {MetricKind::kWcf, "wcf", "intersectional"},
    {MetricKind::kSeqGroup, "seq-group", "sequential"},
    {MetricKind::kSeqSubgroup, "seq-subgroup", "sequential"},
    {MetricKind::kSeqMulti, "seq-multi", "sequential"},
}};

const MetricInfo& Info(MetricKind kind) {
  for (const auto& info : kMetrics) {
    if (info.kind == kind) return info;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown metric kind");
}

[[noreturn]] void BadConfig(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, "config: " + what);
}

Json MetricEntry(MetricKind kind) {
  Json entry = Json::object();
  entry["metric"] = std::string(MetricName(kind));
  entry["typology"] = std::string(Typology(kind));
  return entry;
}

std::vector<std::size_t> AllAttributes(const AttributeSchema& schema) {
  std::vector<std::size_t> all(schema.attributes.size());
  for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
  return all;
}

std::vector<double> F0PerAttribute(const AuditConfig& config,
                                   std::size_t count) {
  if (config.f0.size() == 1) return std::vector<double>(count, config.f0[0]);
  if (config.f0.size() != count) {
    BadConfig("f0 needs one value or one per attribute (" +
              std::to_string(count) + ")");
  }
  return config.f0;
}

void CheckMetricCompatibility(const AuditConfig& config, bool pipeline) {
  for (const MetricKind kind : config.metrics) {
    if (IsSequential(kind) != pipeline) {
      BadConfig("metric '" + std::string(MetricName(kind)) + "' requires " +
                (pipeline ? "a flat dataset (audit)" : "a pipeline trace"));
    }
  }
  if (config.epsilon < 0) BadConfig("epsilon must be non-negative");
  if (config.alpha < 0) BadConfig("alpha must be non-negative");
}

void Merge(Json& into, const Json& from) {
  for (const auto& [key, value] : from.items()) into[key] = value;
}

bool AnyStageViolated(const SequentialResult& result) {
  for (std::size_t t = 0; t < result.stages.size(); ++t) {
    if (result.StageResult(t).violated) return true;
  }
  return false;
}

}  // namespace

std::string_view MetricName(MetricKind kind) { return Info(kind).name; }

std::string_view Typology(MetricKind kind) { return Info(kind).typology; }

bool IsSequential(MetricKind kind) {
  return kind == MetricKind::kSeqGroup || kind == MetricKind::kSeqSubgroup ||
         kind == MetricKind::kSeqMulti;
}

MetricKind ParseMetric(std::string_view text) {
  for (const auto& info : kMetrics) {
    if (info.name == text) return info.kind;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown metric '" + std::string(text) + "'");
}

std::vector<MetricKind> ParseMetricList(std::string_view text) {
  std::vector<MetricKind> out;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    if (!item.empty()) {
      const MetricKind kind = ParseMetric(item);
      if (std::find(out.begin(), out.end(), kind) == out.end()) {
        out.push_back(kind);
      }
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

AuditConfig ParseAuditConfig(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidArgument, e.what());
  }
  if (!root.is_object()) BadConfig("expected an object");
  AuditConfig config;
  try {
    for (const auto& [key, v] : root.items()) {
      if (key == "metrics") {
        config.metrics.clear();
        for (const Json& m : v) {
          const MetricKind kind = ParseMetric(m.get<std::string>());
          if (std::find(config.metrics.begin(), config.metrics.end(), kind) ==
              config.metrics.end()) {
            config.metrics.push_back(kind);
          }
        }
      } else if (key == "condition") {
        config.condition = ParseCondition(v.get<std::string>());
      } else if (key == "epsilon") {
        config.epsilon = v.get<double>();
      } else if (key == "pair_epsilons") {
        for (const Json& p : v) {
          config.pair_epsilons.push_back({p.at("first").get<std::string>(),
                                          p.at("second").get<std::string>(),
                                          p.at("epsilon").get<double>()});
        }
      } else if (key == "operator") {
        config.op = ParseOperator(v.get<std::string>());
      } else if (key == "alpha") {
        config.alpha = v.get<double>();
      } else if (key == "min_support") {
        config.min_support = v.get<std::size_t>();
      } else if (key == "attributes") {
        config.attributes = v.get<std::vector<std::string>>();
      } else if (key == "df_outcome") {
        const std::string o = v.get<std::string>();
        if (o != "positive" && o != "negative") {
          BadConfig("df_outcome must be \"positive\" or \"negative\"");
        }
        config.df_outcome =
            o == "positive" ? Label::kPositive : Label::kNegative;
      } else if (key == "f0") {
        config.f0 = v.is_array() ? v.get<std::vector<double>>()
                                 : std::vector<double>{v.get<double>()};
      } else if (key == "target") {
        if (!v.is_null()) config.target = v.get<std::string>();
      } else if (key == "reference") {
        if (!v.is_null()) config.reference = v.get<std::string>();
      } else {
        BadConfig("unknown key \"" + key + "\"");
      }
    }
  } catch (const Json::exception& e) {
    BadConfig(e.what());
  }
  if (config.f0.empty()) BadConfig("f0 must not be empty");
  return config;
}

Json ToJson(const AuditConfig& config) {
  Json obj = Json::object();
  Json metrics = Json::array();
  for (const MetricKind kind : config.metrics) {
    metrics.push_back(std::string(MetricName(kind)));
  }
  obj["metrics"] = std::move(metrics);
  obj["condition"] = std::string(ConditionName(config.condition));
  obj["epsilon"] = NumberJson(config.epsilon);
  Json pairs = Json::array();
  for (const auto& p : config.pair_epsilons) {
    pairs.push_back({{"first", p.first},
                     {"second", p.second},
                     {"epsilon", NumberJson(p.epsilon)}});
  }
  obj["pair_epsilons"] = std::move(pairs);
  obj["operator"] = std::string(OperatorName(config.op));
  obj["alpha"] = NumberJson(config.alpha);
  obj["min_support"] = config.min_support;
  obj["attributes"] = config.attributes;
  obj["df_outcome"] =
      config.df_outcome == Label::kPositive ? "positive" : "negative";
  Json f0 = Json::array();
  for (const double f : config.f0) f0.push_back(NumberJson(f));
  obj["f0"] = std::move(f0);
  obj["target"] = config.target ? Json(*config.target) : Json(nullptr);
  obj["reference"] = config.reference ? Json(*config.reference) : Json(nullptr);
  return obj;
}

Json SummarizeDataset(const Dataset& dataset) {
  Json obj = Json::object();
  obj["rows"] = dataset.size();
  obj["dropped_rows"] = dataset.dropped_rows();
  Json attrs = Json::array();
  for (const auto& attr : dataset.schema().attributes) {
    Json a = Json::object();
    a["name"] = attr.name;
    a["domain"] = attr.domain;
    a["protected"] =
        attr.protected_value ? Json(*attr.protected_value) : Json(nullptr);
    attrs.push_back(std::move(a));
  }
  obj["attributes"] = std::move(attrs);
  obj["has_labels"] = dataset.has_labels();
  obj["has_predictions"] = dataset.has_predictions();
  const SubgroupIndex index = EnumerateSubgroups(dataset);
  obj["lattice_size"] = NumberJson(index.lattice_size());
  obj["occupied_subgroups"] = index.subgroups().size();
  obj["empty_subgroups"] = NumberJson(index.empty_count());
  return obj;
}

namespace {

Dataset Prepare(const Dataset& dataset,
                const std::vector<std::string>& attributes) {
  Dataset binarized = BinarizeDeclared(dataset);
  if (attributes.empty()) return binarized;
  return SelectAttributes(binarized, attributes);
}

bool LabelsComplete(const Dataset& dataset) {
  if (!dataset.has_labels()) return false;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.label(i) == Label::kAbsent) return false;
  }
  return true;
}

Json ReportHeader(std::string_view command) {
  Json report = Json::object();
  report["report_version"] = std::string(kReportVersion);
  report["command"] = std::string(command);
  return report;
}

void Finish(AuditOutcome& outcome, Json metrics) {
  Json summary = Json::object();
  summary["metrics"] = metrics.size();
  summary["violations"] = outcome.violations;
  summary["violated"] = outcome.violations > 0;
  outcome.report["metrics"] = std::move(metrics);
  outcome.report["summary"] = std::move(summary);
}

}  // namespace

AuditOutcome RunAudit(const Dataset& raw, const AuditConfig& config) {
  CheckMetricCompatibility(config, false);
  const Dataset dataset = Prepare(raw, config.attributes);
  AuditOutcome outcome;
  outcome.report = ReportHeader("audit");
  outcome.report["config"] = ToJson(config);
  outcome.report["dataset"] = SummarizeDataset(dataset);
  const SubgroupIndex index = EnumerateSubgroups(dataset);
  if (LabelsComplete(dataset)) {
    outcome.report["scarcity"] = ToJson(BuildScarcityReport(index, dataset));
  }
  const std::vector<std::size_t> all = AllAttributes(dataset.schema());

  Json metrics = Json::array();
  for (const MetricKind kind : config.metrics) {
    Json entry = MetricEntry(kind);
    bool violated = false;
    switch (kind) {
      case MetricKind::kGroup: {
        entry["condition"] = std::string(ConditionName(config.condition));
        Json results = Json::array();
        for (const std::size_t j : all) {
          const MetricResult r = GroupDiscrimination(
              dataset, j, config.condition, config.epsilon, config.alpha);
          violated = violated || r.violated;
          results.push_back(ToJson(r));
        }
        entry["results"] = std::move(results);
        break;
      }
      case MetricKind::kCumulative: {
        entry["condition"] = std::string(ConditionName(config.condition));
        const CumulativeResult r = CumulativeDiscrimination(
            dataset, all, config.condition, config.op, config.epsilon,
            config.alpha);
        violated = r.combined.violated;
        Merge(entry, ToJson(r));
        break;
      }
      case MetricKind::kSpsf:
      case MetricKind::kFpsf: {
        entry["condition"] =
            std::string(ConditionName(kind == MetricKind::kSpsf
                                          ? Condition::kSelectionRate
                                          : Condition::kFalsePositiveRate));
        const SubgroupMetricSet r =
            kind == MetricKind::kSpsf
                ? StatisticalParitySubgroupFairness(dataset, index,
                                                    config.epsilon, config.op)
                : FalsePositiveSubgroupFairness(dataset, index,
                                                config.epsilon, config.op);
        violated = r.combined.violated;
        Merge(entry, ToJson(r));
        break;
      }
      case MetricKind::kDf: {
        entry["condition"] = std::string(ConditionName(Condition::kSelectionRate));
        entry["outcome"] =
            config.df_outcome == Label::kPositive ? "positive" : "negative";
        PairEpsilonPolicy policy(config.epsilon);
        for (const auto& p : config.pair_epsilons) {
          policy.SetOverride(ParseSubgroup(dataset.schema(), p.first),
                             ParseSubgroup(dataset.schema(), p.second),
                             p.epsilon);
        }
        DifferentialFairnessOptions options;
        options.outcome = config.df_outcome;
        options.alpha = config.alpha;
        options.min_support = config.min_support;
        options.op = config.op;
        const SubgroupMetricSet r =
            DifferentialFairness(dataset, index, policy, options);
        violated = r.combined.violated;
        Merge(entry, ToJson(r));
        break;
      }
      case MetricKind::kWcf: {
        entry["condition"] = std::string(ConditionName(config.condition));
        const SubgroupMetricSet r =
            WorstCaseFairness(dataset, index, config.condition,
                              config.min_support, config.alpha);
        violated = r.combined.violated;
        Merge(entry, ToJson(r));
        break;
      }
      default:
        break;
    }
    entry["violated"] = violated;
    if (violated) ++outcome.violations;
    metrics.push_back(std::move(entry));
  }
  Finish(outcome, std::move(metrics));
  return outcome;
}

AuditOutcome RunPipelineAudit(const PipelineTrace& raw,
                              const AuditConfig& config) {
  CheckMetricCompatibility(config, true);
  const PipelineValidation validation = ValidatePipeline(raw);
  if (!validation.ok()) {
    std::string message = std::to_string(validation.violations.size()) +
                          " funnel violation(s):";
    const std::size_t shown =
        std::min<std::size_t>(validation.violations.size(), 20);
    for (std::size_t v = 0; v < shown; ++v) {
      const auto& item = validation.violations[v];
      message += "\n  individual " + std::to_string(item.individual) +
                 ", stage " + std::to_string(item.stage) + ": " + item.kind;
    }
    if (shown < validation.violations.size()) message += "\n  ...";
    throw Error(ErrorCode::kInvalidPipeline, message);
  }
  const PipelineTrace trace =
      raw.WithPopulation(Prepare(raw.population(), config.attributes));
  AuditOutcome outcome;
  outcome.report = ReportHeader("pipeline");
  outcome.report["config"] = ToJson(config);
  Json summary = SummarizeDataset(trace.population());
  summary["stages"] = trace.stages();
  outcome.report["dataset"] = std::move(summary);
  outcome.report["validation"] = ToJson(validation);
  const std::vector<std::size_t> all = AllAttributes(trace.schema());
  const std::vector<double> f0 = F0PerAttribute(config, all.size());

  Json metrics = Json::array();
  for (const MetricKind kind : config.metrics) {
    Json entry = MetricEntry(kind);
    entry["condition"] = std::string(ConditionName(config.condition));
    bool violated = false;
    switch (kind) {
      case MetricKind::kSeqGroup: {
        Json results = Json::array();
        for (const std::size_t j : all) {
          const SequentialResult r =
              SequentialGroupFairness(trace, j, config.condition, f0[j]);
          violated = violated || AnyStageViolated(r);
          Json item = ToJson(r);
          item["required_terminal_ratio"] = NumberJson(
              RequiredTerminalRatio(trace, j, config.condition, f0[j]));
          results.push_back(std::move(item));
        }
        entry["results"] = std::move(results);
        break;
      }
      case MetricKind::kSeqSubgroup: {
        if (config.f0.size() != 1) {
          BadConfig("seq-subgroup takes a single f0");
        }
        const SubgroupKey reference =
            config.reference ? ParseSubgroup(trace.schema(), *config.reference)
                             : MostPrivilegedSubgroup(trace);
        entry["reference"] = SubgroupName(trace.schema(), reference);
        entry["reference_selection"] =
            config.reference ? "configured" : "highest-terminal-rate";
        std::vector<SubgroupKey> targets;
        if (config.target) {
          targets.push_back(ParseSubgroup(trace.schema(), *config.target));
        } else {
          const SubgroupIndex index = EnumerateSubgroups(trace.population());
          for (const auto& sg : index.subgroups()) {
            if (sg.key != reference) targets.push_back(sg.key);
          }
        }
        Json results = Json::array();
        Json skipped = Json::array();
        for (const auto& target : targets) {
          try {
            const SequentialResult r = SequentialSubgroupFairness(
                trace, target, reference, config.condition, config.f0[0]);
            violated = violated || AnyStageViolated(r);
            results.push_back(ToJson(r));
          } catch (const Error& e) {
            // An explicitly requested target must be evaluable.
            if (config.target) throw;
            skipped.push_back(
                {{"subgroup", SubgroupName(trace.schema(), target)},
                 {"error", std::string(ErrorCodeName(e.code()))},
                 {"detail", e.what()}});
          }
        }
        entry["results"] = std::move(results);
        if (!skipped.empty()) entry["skipped"] = std::move(skipped);
        break;
      }
      case MetricKind::kSeqMulti: {
        const SequentialMultiResult r =
            SequentialMulti(trace, all, config.condition, config.op, f0);
        for (const auto& c : r.combined) violated = violated || c.violated;
        Merge(entry, ToJson(r));
        break;
      }
      default:
        break;
    }
    entry["violated"] = violated;
    if (violated) ++outcome.violations;
    metrics.push_back(std::move(entry));
  }
  Finish(outcome, std::move(metrics));
  return outcome;
}

Json RunSubgroups(const Dataset& raw,
                  const std::vector<std::string>& attributes) {
  const Dataset dataset = Prepare(raw, attributes);
  Json report = ReportHeader("subgroups");
  report["dataset"] = SummarizeDataset(dataset);
  const SubgroupIndex index = EnumerateSubgroups(dataset);
  report["scarcity"] = ToJson(BuildScarcityReport(index, dataset));
  return report;
}

}  // namespace mdfair
