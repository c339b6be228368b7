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

#include "mdfair/scenarios.h"

#include <random>
#include <string>
#include <vector>

#include "mdfair/error.h"

namespace mdfair {
namespace {

ProtectedAttribute BinaryAttribute(std::string name, std::string protected_label,
                                   std::string other_label, bool protected_first) {
  ProtectedAttribute attr;
  attr.name = std::move(name);
  attr.kind = AttributeKind::kCategorical;
  if (protected_first) {
    attr.domain = {protected_label, other_label};
  } else {
    attr.domain = {other_label, protected_label};
  }
  attr.protected_value = std::move(protected_label);
  return attr;
}

// Portable conversion to [0, 1); std::uniform_real_distribution is not
// specified bit-for-bit across standard libraries.
double UnitDouble(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::uint64_t SplitMix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double InRange(const RateRange& range, double u) {
  return range.low + (range.high - range.low) * u;
}

void CheckRange(const RateRange& range, const char* what) {
  if (!(range.low >= 0.0 && range.low <= range.high && range.high <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(what) + " must satisfy 0 <= low <= high <= 1");
  }
}

// Deterministic rate for (seed, subgroup bit pattern, salt).
double SubgroupRate(std::uint64_t seed, std::uint64_t subgroup,
                    std::uint64_t salt, const RateRange& range) {
  const std::uint64_t h = SplitMix(SplitMix(seed ^ SplitMix(subgroup)) + salt);
  return InRange(range, UnitDouble(h));
}

struct RandomPopulation {
  AttributeSchema schema;
  std::vector<std::uint32_t> codes;
  std::vector<std::uint64_t> subgroup;  // bit j set when in Pj
};

RandomPopulation DrawPopulation(std::size_t n, std::size_t k,
                                const RateRange& marginal,
                                std::mt19937_64& rng) {
  if (k == 0 || k > 64) {
    throw Error(ErrorCode::kInvalidArgument, "k must be in [1, 64]");
  }
  CheckRange(marginal, "marginal");
  RandomPopulation pop;
  std::vector<double> p(k);
  for (std::size_t j = 0; j < k; ++j) {
    const std::string id = std::to_string(j + 1);
    pop.schema.attributes.push_back(
        BinaryAttribute("s" + id, "P" + id, "N" + id, true));
    p[j] = InRange(marginal, UnitDouble(rng()));
  }
  pop.codes.reserve(n * k);
  pop.subgroup.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const bool prot = UnitDouble(rng()) < p[j];
      pop.codes.push_back(prot ? 0 : 1);
      if (prot) bits |= std::uint64_t{1} << j;
    }
    pop.subgroup.push_back(bits);
  }
  return pop;
}

}  // namespace

Dataset GenGerrymandering(const GerrymanderingOptions& options) {
  AttributeSchema schema;
  schema.attributes.push_back(BinaryAttribute("race", "Black", "White", false));
  schema.attributes.push_back(
      BinaryAttribute("gender", "Female", "Male", false));
  schema.prediction = OutcomeColumn{"predicted", "yes", "no", false};
  if (options.with_labels) {
    schema.label = OutcomeColumn{"label", "yes", "no", false};
  }
  struct Cell {
    std::uint32_t race, gender;
    int count, positives;
  };
  // White = 0, Black = 1; Male = 0, Female = 1.
  const Cell cells[] = {{0, 0, 20, 0}, {0, 1, 20, 20}, {1, 0, 40, 30},
                        {1, 1, 20, 0}};
  std::vector<std::uint32_t> codes;
  std::vector<Label> predictions;
  for (const Cell& c : cells) {
    for (int i = 0; i < c.count; ++i) {
      codes.push_back(c.race);
      codes.push_back(c.gender);
      predictions.push_back(i < c.positives ? Label::kPositive
                                            : Label::kNegative);
    }
  }
  std::vector<Label> labels;
  if (options.with_labels) labels = predictions;
  return Dataset(std::move(schema), std::move(codes), std::move(labels),
                 std::move(predictions));
}

PipelineTrace GenHiringPipeline(const HiringOptions& options) {
  AttributeSchema schema;
  schema.attributes.push_back(
      BinaryAttribute("gender", "Female", "Male", false));
  schema.attributes.push_back(BinaryAttribute("race", "Black", "White", false));
  struct Cell {
    std::uint32_t gender, race;
    int size, cv, assessment, interview;
  };
  const Cell cells[] = {
      {0, 0, 50, 45, 36, options.interview_white_male},
      {0, 1, 50, 35, 28, options.interview_black_male},
      {1, 0, 50, 30, 24, options.interview_white_female},
      {1, 1, 50, 20, 16, options.interview_black_female},
  };
  std::vector<std::uint32_t> codes;
  std::vector<StageOutcome> outcomes;
  for (const Cell& c : cells) {
    if (c.interview < 0 || c.interview > c.assessment) {
      throw Error(ErrorCode::kInvalidArgument,
                  "interview acceptances must be in [0, " +
                      std::to_string(c.assessment) + "]");
    }
    for (int i = 0; i < c.size; ++i) {
      codes.push_back(c.gender);
      codes.push_back(c.race);
      int passed = 0;
      for (const int threshold : {c.cv, c.assessment, c.interview}) {
        if (passed < 0) {
          outcomes.push_back(StageOutcome::kNotReached);
        } else if (i < threshold) {
          outcomes.push_back(StageOutcome::kPositive);
          ++passed;
        } else {
          outcomes.push_back(StageOutcome::kNegative);
          passed = -1;
        }
      }
    }
  }
  return PipelineTrace(Dataset(std::move(schema), std::move(codes), {}, {}),
                       {"cv_review", "assessment", "interview"},
                       std::move(outcomes));
}

Dataset GenRandom(const RandomSpec& spec) {
  CheckRange(spec.label_rate, "label_rate");
  CheckRange(spec.flip_rate, "flip_rate");
  std::mt19937_64 rng(spec.seed);
  RandomPopulation pop = DrawPopulation(spec.n, spec.k, spec.marginal, rng);
  pop.schema.label = OutcomeColumn{"label", "1", "0", false};
  pop.schema.prediction = OutcomeColumn{"prediction", "1", "0", false};
  std::vector<Label> labels;
  std::vector<Label> predictions;
  labels.reserve(spec.n);
  predictions.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const std::uint64_t sg = pop.subgroup[i];
    const bool y = UnitDouble(rng()) <
                   SubgroupRate(spec.seed, sg, 1, spec.label_rate);
    const bool flip = UnitDouble(rng()) <
                      SubgroupRate(spec.seed, sg, 2, spec.flip_rate);
    labels.push_back(y ? Label::kPositive : Label::kNegative);
    predictions.push_back(y != flip ? Label::kPositive : Label::kNegative);
  }
  return Dataset(std::move(pop.schema), std::move(pop.codes),
                 std::move(labels), std::move(predictions));
}

PipelineTrace GenRandomPipeline(const RandomPipelineSpec& spec) {
  if (spec.stages == 0) {
    throw Error(ErrorCode::kInvalidArgument, "stages must be positive");
  }
  CheckRange(spec.pass_rate, "pass_rate");
  std::mt19937_64 rng(spec.seed);
  RandomPopulation pop = DrawPopulation(spec.n, spec.k, spec.marginal, rng);
  std::vector<StageOutcome> outcomes;
  outcomes.reserve(spec.n * spec.stages);
  for (std::size_t i = 0; i < spec.n; ++i) {
    bool alive = true;
    for (std::size_t t = 0; t < spec.stages; ++t) {
      if (!alive) {
        outcomes.push_back(StageOutcome::kNotReached);
        continue;
      }
      alive = UnitDouble(rng()) <
              SubgroupRate(spec.seed, pop.subgroup[i], 16 + t, spec.pass_rate);
      outcomes.push_back(alive ? StageOutcome::kPositive
                               : StageOutcome::kNegative);
    }
  }
  std::vector<std::string> names;
  for (std::size_t t = 0; t < spec.stages; ++t) {
    names.push_back("stage" + std::to_string(t + 1));
  }
  return PipelineTrace(Dataset(std::move(pop.schema), std::move(pop.codes),
                               {}, {}),
                       std::move(names), std::move(outcomes));
}

}  // namespace mdfair
