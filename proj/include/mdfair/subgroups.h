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

#ifndef MDFAIR_SUBGROUPS_H_
#define MDFAIR_SUBGROUPS_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mdfair/dataset.h"

namespace mdfair {

// One group choice per protected attribute, in schema order. Ordering is
// lexicographic over attributes, each compared by domain position.
struct SubgroupKey {
  std::vector<std::uint32_t> groups;

  auto operator<=>(const SubgroupKey&) const = default;
  bool operator==(const SubgroupKey&) const = default;
};

// "White Female" style name: group labels joined by a space.
std::string SubgroupName(const AttributeSchema& schema, const SubgroupKey& key);

// Resolves {attribute -> group label} into a key. Every attribute must be
// named. Throws InvalidArgument otherwise.
SubgroupKey KeyFromAssignment(const AttributeSchema& schema,
                              const std::map<std::string, std::string>& groups);

// Accepts either a space-separated name as produced by SubgroupName or
// "attr=value,attr=value".
SubgroupKey ParseSubgroup(const AttributeSchema& schema, const std::string& text);

struct Subgroup {
  SubgroupKey key;
  std::vector<std::uint32_t> records;
};

// Partition of a dataset by joint assignment. Only occupied subgroups are
// stored, sorted by key.
class SubgroupIndex {
 public:
  SubgroupIndex(std::vector<Subgroup> subgroups, std::size_t total,
                double lattice_size)
      : subgroups_(std::move(subgroups)),
        total_(total),
        lattice_size_(lattice_size) {}

  const std::vector<Subgroup>& subgroups() const { return subgroups_; }
  std::size_t total() const { return total_; }
  // Product of the attribute domain sizes (2^k for binary attributes).
  double lattice_size() const { return lattice_size_; }
  double empty_count() const {
    return lattice_size_ - static_cast<double>(subgroups_.size());
  }
  const Subgroup* Find(const SubgroupKey& key) const;

 private:
  std::vector<Subgroup> subgroups_;
  std::size_t total_;
  double lattice_size_;
};

// Single pass over the records. Numeric attributes must be binarized first
// (NotBinarized).
SubgroupIndex EnumerateSubgroups(const Dataset& dataset);

struct ScarcityRow {
  SubgroupKey key;
  std::string name;
  std::size_t count = 0;
  double share = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  // positives:negatives rendered as "1:x"; "1:0" with no negatives and
  // "0:1" with no positives.
  std::string cir;
  // negatives / positives; empty when there are no positives.
  std::optional<double> negatives_per_positive;
};

struct ScarcityReport {
  std::size_t total = 0;
  double lattice_size = 0.0;
  std::vector<ScarcityRow> rows;  // count descending, then key
};

std::string FormatCir(std::size_t positives, std::size_t negatives);

// Throws MissingLabels when the dataset has no label column or any record
// lacks a label.
ScarcityReport BuildScarcityReport(const SubgroupIndex& index,
                                   const Dataset& dataset);

}  // namespace mdfair

#endif  // MDFAIR_SUBGROUPS_H_
