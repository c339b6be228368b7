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

#ifndef MDFAIR_SCENARIOS_H_
#define MDFAIR_SCENARIOS_H_

#include <cstddef>
#include <cstdint>

#include "mdfair/dataset.h"
#include "mdfair/pipeline.h"

namespace mdfair {

struct GerrymanderingOptions {
  // Also emit a label column equal to the predictions.
  bool with_labels = false;
};

// 100 records over race {White, Black} x gender {Male, Female} with
// predicted-positive counts White-Male 0/20, White-Female 20/20, Black-Male
// 30/40 and Black-Female 0/20. Every single-attribute group has a selection
// rate of one half.
Dataset GenGerrymandering(const GerrymanderingOptions& options = {});

// Interview acceptances per subgroup among the 36/28/24/16 who reach it.
struct HiringOptions {
  int interview_white_male = 10;
  int interview_black_male = 6;
  int interview_white_female = 14;
  int interview_black_female = 8;
};

// Three-stage funnel (cv_review, assessment, interview) over 100 men and 100
// women, 50 of each race per gender. Stage 1 forwards 80% of men and 50% of
// women; stage 2 forwards 80% of everyone who reached it.
PipelineTrace GenHiringPipeline(const HiringOptions& options = {});

struct RateRange {
  double low = 0.0;
  double high = 1.0;
};

struct RandomSpec {
  std::size_t n = 0;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  // Per-subgroup probability of a positive label.
  RateRange label_rate{0.1, 0.9};
  // Per-subgroup probability that the prediction disagrees with the label.
  RateRange flip_rate{0.0, 0.5};
  // Per-attribute probability of belonging to the protected group.
  RateRange marginal{0.2, 0.8};
};

// k binary attributes s1..sk with domains [Pj, Nj] (protected Pj), labels and
// predictions. Subgroup rates are derived from the seed and the subgroup, so
// the lattice is never materialized.
Dataset GenRandom(const RandomSpec& spec);

struct RandomPipelineSpec {
  std::size_t n = 0;
  std::size_t k = 1;
  std::size_t stages = 3;
  std::uint64_t seed = 0;
  // Per-subgroup, per-stage probability of passing a reached stage.
  RateRange pass_rate{0.3, 0.9};
  RateRange marginal{0.2, 0.8};
};

// Valid funnel over the same attributes as GenRandom, stages stage1..stageT.
PipelineTrace GenRandomPipeline(const RandomPipelineSpec& spec);

}  // namespace mdfair

#endif  // MDFAIR_SCENARIOS_H_
