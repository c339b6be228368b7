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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mdfair/audit.h"
#include "mdfair/calibration.h"
#include "mdfair/error.h"
#include "mdfair/report.h"
#include "mdfair/scenarios.h"
#include "mdfair/schema_config.h"

namespace {

constexpr int kExitError = 2;

struct CommonFlags {
  std::string schema;
  std::string config;
  std::optional<std::string> metrics;
  std::optional<std::string> condition;
  std::optional<double> epsilon;
  std::optional<std::string> op;
  std::optional<double> alpha;
  std::optional<std::size_t> min_support;
  std::vector<std::string> attributes;
  std::string format = "json";
  std::string out;
};

void AddCommonFlags(CLI::App* cmd, CommonFlags& f, bool metric_flags) {
  cmd->add_option("--schema", f.schema, "Schema JSON file")->required();
  cmd->add_option("--attributes", f.attributes,
                  "Attributes to audit, in order (default: all)")
      ->delimiter(',');
  cmd->add_option("--format", f.format, "json | text | csv")
      ->check(CLI::IsMember({"json", "text", "csv"}));
  cmd->add_option("--out", f.out, "Output file (default: standard output)");
  if (!metric_flags) return;
  cmd->add_option("--config", f.config, "Audit config JSON file");
  cmd->add_option("--metrics", f.metrics, "Comma-separated metric names");
  cmd->add_option("--condition", f.condition,
                  "selection-rate | true-positive-rate | "
                  "false-positive-rate | accuracy");
  cmd->add_option("--epsilon", f.epsilon, "Tolerance");
  cmd->add_option("--operator", f.op, "max | sum | mean");
  cmd->add_option("--alpha", f.alpha, "Additive smoothing");
  cmd->add_option("--min-support", f.min_support,
                  "Minimum subgroup size for DF and WCF");
}

mdfair::AuditConfig BuildConfig(const CommonFlags& f) {
  mdfair::AuditConfig config;
  if (!f.config.empty()) {
    config = mdfair::ParseAuditConfig(mdfair::ReadTextFile(f.config));
  }
  if (f.metrics) config.metrics = mdfair::ParseMetricList(*f.metrics);
  if (f.condition) config.condition = mdfair::ParseCondition(*f.condition);
  if (f.epsilon) config.epsilon = *f.epsilon;
  if (f.op) config.op = mdfair::ParseOperator(*f.op);
  if (f.alpha) config.alpha = *f.alpha;
  if (f.min_support) config.min_support = *f.min_support;
  if (!f.attributes.empty()) config.attributes = f.attributes;
  return config;
}

void Emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mdfair::Error(mdfair::ErrorCode::kIo, "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-dimensional fairness auditing"};
  app.require_subcommand(1);

  CommonFlags audit_flags;
  std::string audit_data;
  CLI::App* audit = app.add_subcommand(
      "audit", "Group, cumulative and subgroup metrics over a dataset");
  audit->add_option("data", audit_data, "CSV file")->required();
  AddCommonFlags(audit, audit_flags, true);
  std::string df_outcome;
  audit->add_option("--df-outcome", df_outcome, "positive | negative")
      ->check(CLI::IsMember({"positive", "negative"}));

  CommonFlags pipe_flags;
  std::string pipe_data;
  std::vector<double> f0;
  std::string target;
  std::string reference;
  CLI::App* pipeline = app.add_subcommand(
      "pipeline", "Sequential metrics over a multi-stage decision trace");
  pipeline->add_option("trace", pipe_data, "Trace CSV file")->required();
  AddCommonFlags(pipeline, pipe_flags, true);
  pipeline->add_option("--f0", f0,
                       "Initial F(0): one value or one per attribute")
      ->delimiter(',');
  pipeline->add_option("--target", target, "Target subgroup (seq-subgroup)");
  pipeline->add_option("--reference", reference,
                       "Reference subgroup (seq-subgroup)");

  CommonFlags sub_flags;
  std::string sub_data;
  std::string calibrate;
  CLI::App* subgroups = app.add_subcommand(
      "subgroups", "Subgroup sizes and class imbalance");
  subgroups->add_option("data", sub_data, "CSV file")->required();
  AddCommonFlags(subgroups, sub_flags, false);
  subgroups->add_option("--calibrate", calibrate,
                        "Search binarization rules against target counts");

  std::string scenario;
  std::string synth_out;
  std::string synth_schema;
  std::uint64_t seed = 0;
  std::size_t n = 1000;
  std::size_t k = 3;
  std::size_t stages = 3;
  CLI::App* synth = app.add_subcommand("synth", "Generate synthetic data");
  synth->add_option("scenario", scenario,
                    "gerrymandering | hiring | random | random-pipeline")
      ->required()
      ->check(CLI::IsMember(
          {"gerrymandering", "hiring", "random", "random-pipeline"}));
  synth->add_option("--out", synth_out, "CSV file (default: standard output)");
  synth->add_option("--schema", synth_schema, "Schema JSON file to write");
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("-n,--rows", n, "Rows (random scenarios)");
  synth->add_option("-k,--attributes", k, "Attributes (random scenarios)");
  synth->add_option("--stages", stages, "Stages (random-pipeline)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*audit) {
      const mdfair::SchemaFile schema = mdfair::LoadSchema(audit_flags.schema);
      mdfair::AuditConfig config = BuildConfig(audit_flags);
      if (!df_outcome.empty()) {
        config.df_outcome = df_outcome == "positive" ? mdfair::Label::kPositive
                                                     : mdfair::Label::kNegative;
      }
      const mdfair::Dataset data =
          mdfair::LoadCsv(audit_data, schema.schema, schema.csv);
      const mdfair::AuditOutcome outcome = mdfair::RunAudit(data, config);
      Emit(mdfair::Render(outcome.report,
                          mdfair::ParseReportFormat(audit_flags.format)),
           audit_flags.out);
      return outcome.exit_code();
    }
    if (*pipeline) {
      const mdfair::PipelineSchemaFile schema =
          mdfair::LoadPipelineSchema(pipe_flags.schema);
      mdfair::AuditConfig config = BuildConfig(pipe_flags);
      if (pipe_flags.metrics == std::nullopt && pipe_flags.config.empty()) {
        config.metrics = {mdfair::MetricKind::kSeqGroup};
      }
      if (!f0.empty()) config.f0 = f0;
      if (!target.empty()) config.target = target;
      if (!reference.empty()) config.reference = reference;
      const mdfair::PipelineTrace trace =
          mdfair::LoadPipelineCsv(pipe_data, schema.schema, schema.csv);
      const mdfair::AuditOutcome outcome =
          mdfair::RunPipelineAudit(trace, config);
      Emit(mdfair::Render(outcome.report,
                          mdfair::ParseReportFormat(pipe_flags.format)),
           pipe_flags.out);
      return outcome.exit_code();
    }
    if (*subgroups) {
      const mdfair::SchemaFile schema = mdfair::LoadSchema(sub_flags.schema);
      mdfair::Dataset data =
          mdfair::LoadCsv(sub_data, schema.schema, schema.csv);
      std::optional<mdfair::Json> calibration;
      if (!calibrate.empty()) {
        const mdfair::CalibrationSpec spec =
            mdfair::LoadCalibration(calibrate, schema.schema);
        const mdfair::CalibrationResult result = mdfair::CalibrateBinarization(
            data, spec.candidates, spec.targets);
        std::map<std::string, mdfair::BinarizationRule> rules =
            data.schema().Rules();
        for (const auto& [name, rule] : result.rules) rules[name] = rule;
        data = mdfair::Binarize(data, rules);
        calibration = mdfair::ToJson(result);
      }
      mdfair::Json report = mdfair::RunSubgroups(data, sub_flags.attributes);
      if (calibration) report["calibration"] = *calibration;
      Emit(mdfair::Render(report, mdfair::ParseReportFormat(sub_flags.format)),
           sub_flags.out);
      return 0;
    }
    if (*synth) {
      std::ostringstream csv;
      std::string schema_json;
      if (scenario == "gerrymandering" || scenario == "random") {
        const mdfair::Dataset data =
            scenario == "gerrymandering"
                ? mdfair::GenGerrymandering()
                : mdfair::GenRandom({.n = n, .k = k, .seed = seed});
        mdfair::WriteCsv(data, csv);
        schema_json = mdfair::SerializeSchema({data.schema(), {}});
      } else {
        mdfair::RandomPipelineSpec spec;
        spec.n = n;
        spec.k = k;
        spec.stages = stages;
        spec.seed = seed;
        const mdfair::PipelineTrace trace =
            scenario == "hiring" ? mdfair::GenHiringPipeline()
                                 : mdfair::GenRandomPipeline(spec);
        mdfair::WritePipelineCsv(trace, csv);
        schema_json =
            mdfair::SerializePipelineSchema({mdfair::SchemaOf(trace), {}});
      }
      Emit(csv.str(), synth_out);
      if (!synth_schema.empty()) Emit(schema_json, synth_schema);
      return 0;
    }
  } catch (const mdfair::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
