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

#include "mdfair/calibration.h"

#include <cmath>
#include <cstdint>
#include <limits>

#include "mdfair/error.h"

namespace mdfair {
namespace {

struct Cell {
  std::vector<std::uint32_t> codes;
  std::size_t count = 0;
  std::size_t positives = 0;
};

struct Mapping {
  std::vector<std::uint32_t> group;
  std::string labels[2];
};

Mapping MapRule(const ProtectedAttribute& attr, const BinarizationRule& rule) {
  DomainMapping d = MapDomain(attr, rule);
  return Mapping{std::move(d.group), {d.protected_label, d.other_label}};
}

}  // namespace

std::vector<BinarizationRule> ThresholdCandidates(double from, double to,
                                                  double step,
                                                  const std::string& below,
                                                  const std::string& above,
                                                  bool protected_below) {
  if (!(step > 0.0) || to < from) {
    throw Error(ErrorCode::kInvalidArgument, "bad threshold sweep range");
  }
  std::vector<BinarizationRule> rules;
  const auto count = static_cast<std::size_t>(std::floor((to - from) / step));
  for (std::size_t i = 0; i <= count; ++i) {
    rules.push_back(ThresholdRule{from + static_cast<double>(i) * step, below,
                                  above, protected_below});
  }
  return rules;
}

std::vector<BinarizationRule> PartitionCandidates(
    const std::vector<std::string>& domain, const std::string& protected_label,
    const std::string& other_label) {
  if (domain.size() < 2 || domain.size() > 20) {
    throw Error(ErrorCode::kInvalidArgument,
                "partition sweep needs 2..20 domain values");
  }
  std::vector<BinarizationRule> rules;
  const std::uint32_t full = (1u << domain.size()) - 1;
  for (std::uint32_t mask = 1; mask < full; ++mask) {
    ValueSetRule rule;
    rule.protected_label = protected_label;
    rule.other_label = other_label;
    for (std::size_t c = 0; c < domain.size(); ++c) {
      (mask >> c & 1u ? rule.protected_values : rule.other_values)
          .push_back(domain[c]);
    }
    rules.push_back(std::move(rule));
  }
  return rules;
}

CalibrationResult CalibrateBinarization(
    const Dataset& raw, const std::vector<AttributeCandidates>& candidates,
    const std::vector<CalibrationTarget>& targets) {
  const AttributeSchema& schema = raw.schema();
  const std::size_t k = schema.attributes.size();
  if (targets.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no calibration targets");
  }
  bool need_positives = false;
  for (const auto& t : targets) need_positives |= t.positives.has_value();
  if (need_positives && !raw.has_labels()) {
    throw Error(ErrorCode::kMissingLabels,
                "positive-count targets need a label column");
  }

  // Per attribute: the list of candidate mappings. Attributes without
  // candidates get a single identity mapping over their categorical domain.
  std::vector<std::vector<Mapping>> mappings(k);
  std::vector<const AttributeCandidates*> swept(k, nullptr);
  for (const auto& c : candidates) {
    const std::size_t j = schema.IndexOf(c.attribute);
    if (c.rules.empty()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "no candidate rules for '" + c.attribute + "'");
    }
    swept[j] = &c;
    for (const auto& rule : c.rules) {
      mappings[j].push_back(MapRule(schema.attributes[j], rule));
    }
  }
  std::vector<std::vector<std::string>> identity_labels(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (swept[j]) continue;
    if (schema.attributes[j].kind != AttributeKind::kCategorical) {
      throw Error(ErrorCode::kNotBinarized,
                  "attribute '" + schema.attributes[j].name +
                      "' is numeric and has no candidate rules");
    }
    identity_labels[j] = schema.attributes[j].domain;
  }

  // Aggregate records into raw cells.
  std::map<std::vector<std::uint32_t>, std::size_t> cell_of;
  std::vector<Cell> cells;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const RecordView r = raw.record(i);
    std::vector<std::uint32_t> codes(r.groups.begin(), r.groups.end());
    const auto [it, inserted] = cell_of.emplace(codes, cells.size());
    if (inserted) cells.push_back(Cell{std::move(codes), 0, 0});
    Cell& cell = cells[it->second];
    ++cell.count;
    if (r.label == Label::kPositive) ++cell.positives;
  }

  for (const auto& t : targets) {
    for (const auto& [attr, label] : t.subgroup) schema.IndexOf(attr);
    if (t.subgroup.size() != k) {
      throw Error(ErrorCode::kInvalidArgument,
                  "calibration targets must name every attribute");
    }
  }

  // Odometer over candidate indices.
  std::vector<std::size_t> choice(k, 0);
  CalibrationResult best;
  best.objective = std::numeric_limits<double>::infinity();
  std::size_t evaluated = 0;
  std::vector<std::size_t> counts(targets.size());
  std::vector<std::size_t> positives(targets.size());
  // matches[t][j][raw code] for the current choice.
  std::vector<std::vector<std::vector<char>>> matches(
      targets.size(), std::vector<std::vector<char>>(k));
  while (true) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
      for (std::size_t j = 0; j < k; ++j) {
        const std::string& wanted =
            targets[t].subgroup.at(schema.attributes[j].name);
        const std::size_t domain = schema.attributes[j].domain.size();
        auto& m = matches[t][j];
        m.assign(domain, 0);
        for (std::size_t c = 0; c < domain; ++c) {
          if (swept[j]) {
            const Mapping& map = mappings[j][choice[j]];
            m[c] = map.labels[map.group[c]] == wanted;
          } else {
            m[c] = identity_labels[j][c] == wanted;
          }
        }
      }
    }
    std::fill(counts.begin(), counts.end(), 0);
    std::fill(positives.begin(), positives.end(), 0);
    for (const Cell& cell : cells) {
      for (std::size_t t = 0; t < targets.size(); ++t) {
        bool hit = true;
        for (std::size_t j = 0; j < k && hit; ++j) {
          hit = matches[t][j][cell.codes[j]];
        }
        if (hit) {
          counts[t] += cell.count;
          positives[t] += cell.positives;
        }
      }
    }
    double objective = 0.0;
    for (std::size_t t = 0; t < targets.size(); ++t) {
      const auto rel = [](std::size_t got, std::size_t want) {
        const double w = std::max<double>(static_cast<double>(want), 1.0);
        return std::abs(static_cast<double>(got) - static_cast<double>(want)) /
               w;
      };
      objective += rel(counts[t], targets[t].count);
      if (targets[t].positives) {
        objective += rel(positives[t], *targets[t].positives);
      }
    }
    ++evaluated;
    if (objective < best.objective) {
      best.objective = objective;
      best.rules.clear();
      for (std::size_t j = 0; j < k; ++j) {
        if (swept[j]) {
          best.rules.emplace(schema.attributes[j].name,
                             swept[j]->rules[choice[j]]);
        }
      }
      best.matches.clear();
      for (std::size_t t = 0; t < targets.size(); ++t) {
        best.matches.push_back(TargetMatch{targets[t], counts[t], positives[t]});
      }
    }

    std::size_t j = 0;
    for (; j < k; ++j) {
      if (!swept[j]) continue;
      if (++choice[j] < mappings[j].size()) break;
      choice[j] = 0;
    }
    if (j == k) break;
  }
  best.candidates_evaluated = evaluated;
  return best;
}

}  // namespace mdfair
