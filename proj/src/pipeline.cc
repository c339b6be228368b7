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

#include "mdfair/pipeline.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "mdfair/csv.h"
#include "mdfair/error.h"

namespace mdfair {

PipelineTrace::PipelineTrace(Dataset population,
                             std::vector<std::string> stages,
                             std::vector<StageOutcome> outcomes,
                             std::vector<Label> truth)
    : population_(std::move(population)),
      stages_(std::move(stages)),
      outcomes_(std::move(outcomes)),
      truth_(std::move(truth)) {
  if (population_.num_attributes() == 0) {
    throw Error(ErrorCode::kInvalidPipeline,
                "a pipeline needs at least one protected attribute");
  }
  if (stages_.empty()) {
    throw Error(ErrorCode::kInvalidPipeline, "a pipeline needs stages");
  }
  if (outcomes_.size() != population_.size() * stages_.size()) {
    throw Error(ErrorCode::kInvalidPipeline, "outcome table size mismatch");
  }
  if (!truth_.empty() && truth_.size() != outcomes_.size()) {
    throw Error(ErrorCode::kInvalidPipeline, "truth table size mismatch");
  }
}

PipelineTrace PipelineTrace::Truncated(std::size_t stages) const {
  if (stages == 0 || stages > num_stages()) {
    throw Error(ErrorCode::kInvalidArgument, "bad stage count");
  }
  std::vector<StageOutcome> outcomes;
  std::vector<Label> truth;
  for (std::size_t i = 0; i < size(); ++i) {
    for (std::size_t t = 0; t < stages; ++t) {
      outcomes.push_back(outcome(i, t));
      if (has_truth()) truth.push_back(this->truth(i, t));
    }
  }
  return PipelineTrace(population_,
                       {stages_.begin(), stages_.begin() + stages},
                       std::move(outcomes), std::move(truth));
}

PipelineTrace PipelineTrace::WithPopulation(Dataset population) const {
  if (population.size() != size()) {
    throw Error(ErrorCode::kInvalidArgument, "population size mismatch");
  }
  return PipelineTrace(std::move(population), stages_, outcomes_, truth_);
}

PipelineValidation ValidatePipeline(const PipelineTrace& trace) {
  PipelineValidation report;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    bool passed_all = true;  // positive at every earlier stage
    for (std::size_t t = 0; t < trace.num_stages(); ++t) {
      const StageOutcome o = trace.outcome(i, t);
      if (o == StageOutcome::kPositive && !passed_all) {
        report.violations.push_back({i, t + 1, "non-monotone"});
      } else if (o == StageOutcome::kNegative && !passed_all) {
        report.violations.push_back({i, t + 1, "outcome-after-exit"});
      } else if (o == StageOutcome::kNotReached && passed_all) {
        report.violations.push_back({i, t + 1, "missing-outcome"});
      }
      passed_all = passed_all && o == StageOutcome::kPositive;
    }
  }
  return report;
}

PipelineTrace ReadPipelineCsv(std::istream& in, const PipelineSchema& schema,
                              const CsvOptions& options) {
  if (schema.stages.empty()) {
    throw Error(ErrorCode::kInvalidSchema, "pipeline schema has no stages");
  }
  CsvReader reader(in, options.delimiter);
  std::vector<std::string> header;
  if (!reader.Next(header)) {
    throw Error(ErrorCode::kUnparsableRow, "missing header row");
  }
  const auto column_of = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(ErrorCode::kMissingColumn, name);
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> attr_columns;
  for (const auto& attr : schema.attributes) {
    attr_columns.push_back(column_of(attr.name));
  }
  std::vector<std::size_t> stage_columns;
  std::vector<std::optional<std::size_t>> truth_columns;
  bool any_truth = false;
  for (const auto& stage : schema.stages) {
    stage_columns.push_back(column_of(stage.column));
    truth_columns.push_back(stage.truth_column
                                ? std::optional(column_of(*stage.truth_column))
                                : std::nullopt);
    any_truth |= stage.truth_column.has_value();
  }

  // Attribute columns go through the dataset reader so that domains,
  // numeric attributes and missing values behave exactly as for flat data.
  std::ostringstream projection;
  for (std::size_t j = 0; j < attr_columns.size(); ++j) {
    if (j) projection << options.delimiter;
    projection << EscapeCsvField(header[attr_columns[j]], options.delimiter);
  }
  projection << '\n';
  const auto is_missing = [&](const std::string& v) {
    return std::find(options.missing_tokens.begin(),
                     options.missing_tokens.end(),
                     v) != options.missing_tokens.end();
  };
  const auto parse_cell = [&](const std::string& v, std::size_t line,
                              const std::string& column) {
    if (v == "+") return StageOutcome::kPositive;
    if (v == "-") return StageOutcome::kNegative;
    if (v.empty()) return StageOutcome::kNotReached;
    throw Error(ErrorCode::kDomainViolation,
                "line " + std::to_string(line) + ", column '" + column +
                    "': value '" + v + "'");
  };

  std::vector<StageOutcome> outcomes;
  std::vector<Label> truth;
  std::size_t dropped = 0;
  std::vector<std::string> fields;
  while (reader.Next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kUnparsableRow,
                  "line " + std::to_string(line) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    bool missing = false;
    for (std::size_t j = 0; j < attr_columns.size(); ++j) {
      if (is_missing(fields[attr_columns[j]])) {
        if (options.missing_policy == MissingPolicy::kError) {
          throw Error(ErrorCode::kMissingValue,
                      "line " + std::to_string(line) + ", column '" +
                          schema.attributes[j].name + "'");
        }
        missing = true;
      }
    }
    if (missing) {
      ++dropped;
      continue;
    }
    for (std::size_t j = 0; j < attr_columns.size(); ++j) {
      if (j) projection << options.delimiter;
      projection << EscapeCsvField(fields[attr_columns[j]], options.delimiter);
    }
    projection << '\n';
    for (std::size_t t = 0; t < stage_columns.size(); ++t) {
      outcomes.push_back(parse_cell(fields[stage_columns[t]], line,
                                    schema.stages[t].column));
      if (!any_truth) continue;
      if (!truth_columns[t]) {
        truth.push_back(Label::kAbsent);
        continue;
      }
      const StageOutcome v = parse_cell(fields[*truth_columns[t]], line,
                                        *schema.stages[t].truth_column);
      truth.push_back(v == StageOutcome::kPositive   ? Label::kPositive
                      : v == StageOutcome::kNegative ? Label::kNegative
                                                     : Label::kAbsent);
    }
  }

  AttributeSchema attributes;
  attributes.attributes = schema.attributes;
  std::istringstream projected(projection.str());
  CsvOptions inner = options;
  inner.missing_tokens.clear();
  Dataset population = ReadCsv(projected, attributes, inner);
  population = Dataset(population.schema(),
                       {population.codes().begin(), population.codes().end()},
                       {}, {}, dropped);
  std::vector<std::string> names;
  for (const auto& stage : schema.stages) names.push_back(stage.name);
  return PipelineTrace(std::move(population), std::move(names),
                       std::move(outcomes), std::move(truth));
}

PipelineTrace LoadPipelineCsv(const std::filesystem::path& path,
                              const PipelineSchema& schema,
                              const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadPipelineCsv(in, schema, options);
}

PipelineSchema SchemaOf(const PipelineTrace& trace) {
  PipelineSchema schema;
  schema.attributes = trace.schema().attributes;
  for (const auto& name : trace.stages()) {
    PipelineStage stage{name, name, std::nullopt};
    if (trace.has_truth()) stage.truth_column = name + "_truth";
    schema.stages.push_back(std::move(stage));
  }
  return schema;
}

void WritePipelineCsv(const PipelineTrace& trace, std::ostream& out,
                      char delimiter) {
  const PipelineSchema schema = SchemaOf(trace);
  std::vector<std::string> header;
  for (const auto& attr : schema.attributes) header.push_back(attr.name);
  for (const auto& stage : schema.stages) header.push_back(stage.column);
  for (const auto& stage : schema.stages) {
    if (stage.truth_column) header.push_back(*stage.truth_column);
  }
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      out << EscapeCsvField(row[i], delimiter);
    }
    out << '\n';
  };
  write_row(header);
  const auto text = [](StageOutcome o) -> std::string {
    switch (o) {
      case StageOutcome::kPositive: return "+";
      case StageOutcome::kNegative: return "-";
      case StageOutcome::kNotReached: return "";
    }
    return "";
  };
  std::vector<std::string> row;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    row.clear();
    for (std::size_t j = 0; j < schema.attributes.size(); ++j) {
      row.push_back(schema.attributes[j].domain[trace.population().code(i, j)]);
    }
    for (std::size_t t = 0; t < trace.num_stages(); ++t) {
      row.push_back(text(trace.outcome(i, t)));
    }
    if (trace.has_truth()) {
      for (std::size_t t = 0; t < trace.num_stages(); ++t) {
        const Label l = trace.truth(i, t);
        row.push_back(l == Label::kPositive   ? "+"
                      : l == Label::kNegative ? "-"
                                              : "");
      }
    }
    write_row(row);
  }
}

}  // namespace mdfair
