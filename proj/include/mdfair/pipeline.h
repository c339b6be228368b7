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

#ifndef MDFAIR_PIPELINE_H_
#define MDFAIR_PIPELINE_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mdfair/dataset.h"

namespace mdfair {

enum class StageOutcome : std::uint8_t {
  kNegative = 0,
  kPositive = 1,
  kNotReached = 2,
};

// Individuals x stages table of outcomes for a multi-stage decision process.
// The protected attributes live in a Dataset without outcome columns.
// Construction checks shapes only; see ValidatePipeline for the funnel
// constraints.
class PipelineTrace {
 public:
  PipelineTrace(Dataset population, std::vector<std::string> stages,
                std::vector<StageOutcome> outcomes,
                std::vector<Label> truth = {});

  const Dataset& population() const { return population_; }
  const AttributeSchema& schema() const { return population_.schema(); }
  std::size_t size() const { return population_.size(); }
  std::size_t num_stages() const { return stages_.size(); }
  const std::vector<std::string>& stages() const { return stages_; }

  // `stage` is 0-based here; reports number stages from 1.
  StageOutcome outcome(std::size_t individual, std::size_t stage) const {
    return outcomes_[individual * num_stages() + stage];
  }
  bool has_truth() const { return !truth_.empty(); }
  Label truth(std::size_t individual, std::size_t stage) const {
    return has_truth() ? truth_[individual * num_stages() + stage]
                       : Label::kAbsent;
  }

  // The first `stages` stages.
  PipelineTrace Truncated(std::size_t stages) const;
  // Same outcomes over a re-coded population (e.g. after binarization).
  PipelineTrace WithPopulation(Dataset population) const;

 private:
  Dataset population_;
  std::vector<std::string> stages_;
  std::vector<StageOutcome> outcomes_;
  std::vector<Label> truth_;
};

struct PipelineViolation {
  std::size_t individual = 0;
  std::size_t stage = 0;  // 1-based
  // "non-monotone": positive after a stage that was not positive.
  // "outcome-after-exit": negative after a stage that was not positive.
  // "missing-outcome": not reached although every earlier stage was passed.
  std::string kind;
};

struct PipelineValidation {
  std::vector<PipelineViolation> violations;
  bool ok() const { return violations.empty(); }
};

PipelineValidation ValidatePipeline(const PipelineTrace& trace);

struct PipelineStage {
  std::string name;
  std::string column;
  std::optional<std::string> truth_column;
};

struct PipelineSchema {
  std::vector<ProtectedAttribute> attributes;
  std::vector<PipelineStage> stages;
};

// Stage cells hold "+", "-", or blank for not reached; truth cells "+", "-",
// or blank. Missing-value tokens apply to attribute columns only.
PipelineTrace ReadPipelineCsv(std::istream& in, const PipelineSchema& schema,
                              const CsvOptions& options = {});
PipelineTrace LoadPipelineCsv(const std::filesystem::path& path,
                              const PipelineSchema& schema,
                              const CsvOptions& options = {});

// Columns: attributes, stage names, then "<stage>_truth" when present.
void WritePipelineCsv(const PipelineTrace& trace, std::ostream& out,
                      char delimiter = ',');
PipelineSchema SchemaOf(const PipelineTrace& trace);

}  // namespace mdfair

#endif  // MDFAIR_PIPELINE_H_
