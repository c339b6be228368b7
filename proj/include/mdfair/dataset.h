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

#ifndef MDFAIR_DATASET_H_
#define MDFAIR_DATASET_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mdfair {

// Binary outcome of a record. kAbsent is only valid for ground-truth labels.
enum class Label : std::uint8_t { kNegative = 0, kPositive = 1, kAbsent = 2 };

enum class AttributeKind { kCategorical, kNumeric };

// Maps an explicit set of values to the protected group and another set to
// the non-protected group. With other_takes_rest every value outside
// protected_values falls into the other group.
struct ValueSetRule {
  std::string protected_label;
  std::vector<std::string> protected_values;
  std::string other_label;
  std::vector<std::string> other_values;
  bool other_takes_rest = false;

  bool operator==(const ValueSetRule&) const = default;
};

// value < threshold goes to below_label, everything else to above_label.
struct ThresholdRule {
  double threshold = 0.0;
  std::string below_label;
  std::string above_label;
  bool protected_below = true;

  bool operator==(const ThresholdRule&) const = default;
};

using BinarizationRule = std::variant<ValueSetRule, ThresholdRule>;

struct ProtectedAttribute {
  std::string name;
  AttributeKind kind = AttributeKind::kCategorical;
  // Declared values for categorical attributes; for numeric attributes the
  // distinct observed values (numerically sorted) once a dataset is loaded.
  std::vector<std::string> domain;
  std::optional<std::string> protected_value;
  std::optional<BinarizationRule> binarization;

  bool operator==(const ProtectedAttribute&) const = default;

  std::optional<std::uint32_t> CodeOf(std::string_view value) const;
  // Code of the protected group. Throws NotBinarized unless the attribute is
  // categorical with exactly two values and a protected value.
  std::uint32_t ProtectedCode() const;
  bool IsBinary() const;
};

// A binary outcome column. Without a declared negative value every
// non-missing value other than `positive` counts as negative.
struct OutcomeColumn {
  std::string name;
  std::string positive;
  std::optional<std::string> negative;
  // Ground truth only: keep rows whose label is missing, with Label::kAbsent.
  bool allow_missing = false;

  bool operator==(const OutcomeColumn&) const = default;
};

struct AttributeSchema {
  std::vector<ProtectedAttribute> attributes;
  std::optional<OutcomeColumn> label;
  std::optional<OutcomeColumn> prediction;

  bool operator==(const AttributeSchema&) const = default;

  // Throws InvalidSchema on duplicate names, label/prediction columns that
  // clash with attributes, categorical domains with fewer than two distinct
  // values, or a protected value outside its domain.
  void Validate() const;
  // Throws InvalidArgument for an unknown attribute.
  std::size_t IndexOf(std::string_view name) const;
  // Binarization rules declared on the attributes, keyed by attribute name.
  std::map<std::string, BinarizationRule> Rules() const;
};

struct RecordView {
  std::span<const std::uint32_t> groups;  // one domain code per attribute
  Label label;
  Label prediction;
};

// Immutable table of records. Attribute values are stored as codes into the
// attribute domains, row-major.
class Dataset {
 public:
  Dataset() = default;
  Dataset(AttributeSchema schema, std::vector<std::uint32_t> codes,
          std::vector<Label> labels, std::vector<Label> predictions,
          std::size_t dropped_rows = 0);

  const AttributeSchema& schema() const { return schema_; }
  std::size_t size() const { return size_; }
  std::size_t num_attributes() const { return schema_.attributes.size(); }
  std::size_t dropped_rows() const { return dropped_rows_; }
  bool has_labels() const { return schema_.label.has_value(); }
  bool has_predictions() const { return schema_.prediction.has_value(); }

  std::uint32_t code(std::size_t record, std::size_t attribute) const {
    return codes_[record * num_attributes() + attribute];
  }
  Label label(std::size_t record) const {
    return has_labels() ? labels_[record] : Label::kAbsent;
  }
  Label prediction(std::size_t record) const {
    return has_predictions() ? predictions_[record] : Label::kAbsent;
  }
  RecordView record(std::size_t i) const;

  std::span<const std::uint32_t> codes() const { return codes_; }

  bool operator==(const Dataset&) const = default;

 private:
  AttributeSchema schema_;
  std::size_t size_ = 0;
  std::vector<std::uint32_t> codes_;
  std::vector<Label> labels_;
  std::vector<Label> predictions_;
  std::size_t dropped_rows_ = 0;
};

enum class MissingPolicy { kDrop, kError };

struct CsvOptions {
  char delimiter = ',';
  MissingPolicy missing_policy = MissingPolicy::kDrop;
  std::vector<std::string> missing_tokens = {"", "?"};
  // Also apply the policy to missing values in columns outside the schema
  // (complete-case filtering). An optional label column stays exempt.
  bool missing_in_any_column = false;

  bool operator==(const CsvOptions&) const = default;
};

Dataset ReadCsv(std::istream& in, const AttributeSchema& schema,
                const CsvOptions& options = {});
Dataset LoadCsv(const std::filesystem::path& path,
                const AttributeSchema& schema, const CsvOptions& options = {});

// Writes schema columns only: attributes, then label and prediction.
void WriteCsv(const Dataset& dataset, std::ostream& out, char delimiter = ',');

// Group of every domain value of `attr` under `rule`: 0 = protected,
// 1 = other. Throws IncompleteRule or NonNumericThreshold.
struct DomainMapping {
  std::vector<std::uint32_t> group;
  std::string protected_label;
  std::string other_label;
};
DomainMapping MapDomain(const ProtectedAttribute& attr,
                        const BinarizationRule& rule);

// Returns a copy in which every attribute named in `rules` is rewritten to a
// two-group categorical attribute with domain {protected, other}.
Dataset Binarize(const Dataset& dataset,
                 const std::map<std::string, BinarizationRule>& rules);

// Applies the rules declared in the dataset's own schema.
Dataset BinarizeDeclared(const Dataset& dataset);

// Keeps only the named attributes, in the given order. Outcome columns are
// kept. Throws InvalidArgument for unknown or repeated names.
Dataset SelectAttributes(const Dataset& dataset,
                         const std::vector<std::string>& names);

}  // namespace mdfair

#endif  // MDFAIR_DATASET_H_
