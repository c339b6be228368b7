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

#include "mdfair/subgroups.h"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "mdfair/error.h"

namespace mdfair {
namespace {

bool MatchName(const AttributeSchema& schema, std::string_view rest,
               std::size_t attr, SubgroupKey& key) {
  if (attr == schema.attributes.size()) return rest.empty();
  const auto& domain = schema.attributes[attr].domain;
  for (std::size_t c = 0; c < domain.size(); ++c) {
    const std::string& label = domain[c];
    if (rest.substr(0, label.size()) != label) continue;
    std::string_view tail = rest.substr(label.size());
    if (attr + 1 < schema.attributes.size()) {
      if (tail.empty() || tail.front() != ' ') continue;
      tail.remove_prefix(1);
    }
    key.groups[attr] = static_cast<std::uint32_t>(c);
    if (MatchName(schema, tail, attr + 1, key)) return true;
  }
  return false;
}

}  // namespace

std::string SubgroupName(const AttributeSchema& schema, const SubgroupKey& key) {
  std::string name;
  for (std::size_t j = 0; j < key.groups.size(); ++j) {
    if (j) name.push_back(' ');
    name += schema.attributes[j].domain[key.groups[j]];
  }
  return name;
}

SubgroupKey KeyFromAssignment(
    const AttributeSchema& schema,
    const std::map<std::string, std::string>& groups) {
  SubgroupKey key;
  for (const auto& attr : schema.attributes) {
    const auto it = groups.find(attr.name);
    if (it == groups.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "subgroup does not name attribute '" + attr.name + "'");
    }
    const auto code = attr.CodeOf(it->second);
    if (!code) {
      throw Error(ErrorCode::kInvalidArgument,
                  "'" + it->second + "' is not a group of '" + attr.name + "'");
    }
    key.groups.push_back(*code);
  }
  if (groups.size() != schema.attributes.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "subgroup names attributes outside the schema");
  }
  return key;
}

SubgroupKey ParseSubgroup(const AttributeSchema& schema,
                          const std::string& text) {
  if (text.find('=') != std::string::npos) {
    std::map<std::string, std::string> groups;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const std::size_t end = std::min(text.find(',', pos), text.size());
      const std::string part = text.substr(pos, end - pos);
      const std::size_t eq = part.find('=');
      if (eq == std::string::npos) {
        throw Error(ErrorCode::kInvalidArgument,
                    "malformed subgroup '" + text + "'");
      }
      groups[part.substr(0, eq)] = part.substr(eq + 1);
      pos = end + 1;
    }
    return KeyFromAssignment(schema, groups);
  }
  SubgroupKey key;
  key.groups.resize(schema.attributes.size());
  if (!MatchName(schema, text, 0, key)) {
    throw Error(ErrorCode::kInvalidArgument, "unknown subgroup '" + text + "'");
  }
  return key;
}

const Subgroup* SubgroupIndex::Find(const SubgroupKey& key) const {
  const auto it = std::lower_bound(
      subgroups_.begin(), subgroups_.end(), key,
      [](const Subgroup& s, const SubgroupKey& k) { return s.key < k; });
  if (it == subgroups_.end() || it->key != key) return nullptr;
  return &*it;
}

SubgroupIndex EnumerateSubgroups(const Dataset& dataset) {
  const auto& attributes = dataset.schema().attributes;
  const std::size_t k = attributes.size();
  const std::size_t n = dataset.size();

  double lattice = 1.0;
  bool fits = true;
  std::vector<std::uint64_t> stride(k, 1);
  std::uint64_t radix = 1;
  for (std::size_t j = k; j-- > 0;) {
    if (attributes[j].kind != AttributeKind::kCategorical) {
      throw Error(ErrorCode::kNotBinarized,
                  "numeric attribute '" + attributes[j].name +
                      "' needs a binarization rule");
    }
    const std::uint64_t size = attributes[j].domain.size();
    lattice *= static_cast<double>(size);
    stride[j] = radix;
    if (fits && radix > std::numeric_limits<std::uint64_t>::max() / size) {
      fits = false;
    }
    if (fits) radix *= size;
  }

  std::vector<Subgroup> subgroups;
  if (fits) {
    // Mixed-radix code with the first attribute most significant, so code
    // order equals key order.
    std::unordered_map<std::uint64_t, std::uint32_t> slot_of;
    std::vector<std::uint64_t> slot_code;
    std::vector<std::vector<std::uint32_t>> members;
    const auto codes = dataset.codes();
    for (std::size_t i = 0; i < n; ++i) {
      std::uint64_t code = 0;
      for (std::size_t j = 0; j < k; ++j) code += codes[i * k + j] * stride[j];
      const auto [it, inserted] =
          slot_of.emplace(code, static_cast<std::uint32_t>(members.size()));
      if (inserted) {
        members.emplace_back();
        slot_code.push_back(code);
      }
      members[it->second].push_back(static_cast<std::uint32_t>(i));
    }
    std::vector<std::uint32_t> order(members.size());
    for (std::size_t s = 0; s < order.size(); ++s) {
      order[s] = static_cast<std::uint32_t>(s);
    }
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      return slot_code[a] < slot_code[b];
    });
    subgroups.reserve(order.size());
    for (std::uint32_t s : order) {
      const std::uint32_t first = members[s].front();
      Subgroup sg;
      sg.key.groups.assign(codes.begin() + first * k,
                           codes.begin() + (first + 1) * k);
      sg.records = std::move(members[s]);
      subgroups.push_back(std::move(sg));
    }
  } else {
    std::map<SubgroupKey, std::vector<std::uint32_t>> members;
    for (std::size_t i = 0; i < n; ++i) {
      const RecordView r = dataset.record(i);
      SubgroupKey key{{r.groups.begin(), r.groups.end()}};
      members[key].push_back(static_cast<std::uint32_t>(i));
    }
    for (auto& [key, records] : members) {
      subgroups.push_back(Subgroup{key, std::move(records)});
    }
  }
  return SubgroupIndex(std::move(subgroups), n, lattice);
}

std::string FormatCir(std::size_t positives, std::size_t negatives) {
  if (negatives == 0) return positives == 0 ? "0:0" : "1:0";
  if (positives == 0) return "0:1";
  const double ratio =
      static_cast<double>(negatives) / static_cast<double>(positives);
  char buf[64];
  if (ratio >= 10.0) {
    std::snprintf(buf, sizeof(buf), "1:%.0f", ratio);
  } else {
    std::snprintf(buf, sizeof(buf), "1:%.1f", ratio);
    std::string s(buf);
    if (s.size() > 2 && s.compare(s.size() - 2, 2, ".0") == 0) {
      s.resize(s.size() - 2);
    }
    return s;
  }
  return buf;
}

ScarcityReport BuildScarcityReport(const SubgroupIndex& index,
                                   const Dataset& dataset) {
  if (!dataset.has_labels()) {
    throw Error(ErrorCode::kMissingLabels, "dataset has no label column");
  }
  ScarcityReport report;
  report.total = index.total();
  report.lattice_size = index.lattice_size();
  for (const Subgroup& sg : index.subgroups()) {
    ScarcityRow row;
    row.key = sg.key;
    row.name = SubgroupName(dataset.schema(), sg.key);
    row.count = sg.records.size();
    row.share = static_cast<double>(row.count) /
                static_cast<double>(index.total());
    for (std::uint32_t r : sg.records) {
      switch (dataset.label(r)) {
        case Label::kPositive: ++row.positives; break;
        case Label::kNegative: ++row.negatives; break;
        case Label::kAbsent:
          throw Error(ErrorCode::kMissingLabels,
                      "record " + std::to_string(r) + " has no label");
      }
    }
    row.cir = FormatCir(row.positives, row.negatives);
    if (row.positives > 0) {
      row.negatives_per_positive = static_cast<double>(row.negatives) /
                                   static_cast<double>(row.positives);
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ScarcityRow& a, const ScarcityRow& b) {
                     return a.count > b.count;
                   });
  return report;
}

}  // namespace mdfair
