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

#ifndef MDFAIR_CALIBRATION_H_
#define MDFAIR_CALIBRATION_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdfair/dataset.h"

namespace mdfair {

// Sweeps binarization rules to reproduce externally reported subgroup counts
// when the exact rule used to produce them is unknown.

struct AttributeCandidates {
  std::string attribute;
  std::vector<BinarizationRule> rules;
};

// Thresholds from..to inclusive in `step` increments.
std::vector<BinarizationRule> ThresholdCandidates(double from, double to,
                                                  double step,
                                                  const std::string& below,
                                                  const std::string& above,
                                                  bool protected_below);

// Every non-empty proper subset of `domain` as the protected set, in bitmask
// order. Domains larger than 20 values are rejected.
std::vector<BinarizationRule> PartitionCandidates(
    const std::vector<std::string>& domain, const std::string& protected_label,
    const std::string& other_label);

struct CalibrationTarget {
  std::map<std::string, std::string> subgroup;  // attribute -> group label
  std::size_t count = 0;
  std::optional<std::size_t> positives;
};

struct TargetMatch {
  CalibrationTarget target;
  std::size_t count = 0;
  std::size_t positives = 0;
};

struct CalibrationResult {
  std::map<std::string, BinarizationRule> rules;
  std::vector<TargetMatch> matches;
  // Sum of relative errors over all targeted counts; 0 means exact.
  double objective = 0.0;
  std::size_t candidates_evaluated = 0;

  bool exact() const { return objective == 0.0; }
};

// Evaluates the full cartesian product of candidate rules. Ties keep the
// first combination in enumeration order. Attributes without candidates are
// used as they are and must already be categorical.
CalibrationResult CalibrateBinarization(
    const Dataset& raw, const std::vector<AttributeCandidates>& candidates,
    const std::vector<CalibrationTarget>& targets);

}  // namespace mdfair

#endif  // MDFAIR_CALIBRATION_H_
