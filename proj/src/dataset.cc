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

#include "mdfair/dataset.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <unordered_map>
#include <utility>

#include "mdfair/csv.h"
#include "mdfair/error.h"

namespace mdfair {
namespace {

std::optional<double> ParseNumber(std::string_view s) {
  s = Trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

void ValidateRule(const ProtectedAttribute& attr) {
  if (!attr.binarization) return;
  const auto fail = [&](const std::string& why) {
    throw Error(ErrorCode::kInvalidSchema,
                "attribute '" + attr.name + "': " + why);
  };
  if (const auto* rule = std::get_if<ValueSetRule>(&*attr.binarization)) {
    if (rule->protected_label.empty() || rule->other_label.empty() ||
        rule->protected_label == rule->other_label) {
      fail("binarization needs two distinct non-empty group labels");
    }
    for (const auto& v : rule->protected_values) {
      if (std::find(rule->other_values.begin(), rule->other_values.end(), v) !=
          rule->other_values.end()) {
        fail("value '" + v + "' assigned to both groups");
      }
    }
  } else {
    const auto& t = std::get<ThresholdRule>(*attr.binarization);
    if (t.below_label.empty() || t.above_label.empty() ||
        t.below_label == t.above_label) {
      fail("threshold rule needs two distinct non-empty group labels");
    }
  }
}

}  // namespace

std::optional<std::uint32_t> ProtectedAttribute::CodeOf(
    std::string_view value) const {
  for (std::size_t i = 0; i < domain.size(); ++i) {
    if (domain[i] == value) return static_cast<std::uint32_t>(i);
  }
  return std::nullopt;
}

bool ProtectedAttribute::IsBinary() const {
  return kind == AttributeKind::kCategorical && domain.size() == 2 &&
         protected_value.has_value() && CodeOf(*protected_value).has_value();
}

std::uint32_t ProtectedAttribute::ProtectedCode() const {
  if (!IsBinary()) {
    throw Error(ErrorCode::kNotBinarized,
                "attribute '" + name +
                    "' must have exactly two groups and a protected value");
  }
  return *CodeOf(*protected_value);
}

void AttributeSchema::Validate() const {
  std::set<std::string> names;
  for (const auto& attr : attributes) {
    if (attr.name.empty()) {
      throw Error(ErrorCode::kInvalidSchema, "attribute with empty name");
    }
    if (!names.insert(attr.name).second) {
      throw Error(ErrorCode::kInvalidSchema,
                  "duplicate attribute '" + attr.name + "'");
    }
    if (attr.kind == AttributeKind::kCategorical) {
      const std::set<std::string> distinct(attr.domain.begin(),
                                           attr.domain.end());
      if (distinct.size() != attr.domain.size()) {
        throw Error(ErrorCode::kInvalidSchema,
                    "attribute '" + attr.name + "' has duplicate domain values");
      }
      if (attr.domain.size() < 2) {
        throw Error(ErrorCode::kInvalidSchema,
                    "attribute '" + attr.name +
                        "' needs at least two domain values");
      }
      if (attr.protected_value && !attr.CodeOf(*attr.protected_value)) {
        throw Error(ErrorCode::kInvalidSchema,
                    "protected value '" + *attr.protected_value +
                        "' not in domain of '" + attr.name + "'");
      }
    }
    ValidateRule(attr);
  }
  for (const auto* column : {&label, &prediction}) {
    if (!*column) continue;
    const OutcomeColumn& c = **column;
    if (c.name.empty() || c.positive.empty()) {
      throw Error(ErrorCode::kInvalidSchema,
                  "outcome column needs a name and a positive value");
    }
    if (names.count(c.name)) {
      throw Error(ErrorCode::kInvalidSchema,
                  "column '" + c.name + "' is both an attribute and an outcome");
    }
    if (c.negative && *c.negative == c.positive) {
      throw Error(ErrorCode::kInvalidSchema,
                  "column '" + c.name + "' has identical positive and negative");
    }
  }
  if (label && prediction && label->name == prediction->name) {
    throw Error(ErrorCode::kInvalidSchema,
                "label and prediction columns must differ");
  }
  if (prediction && prediction->allow_missing) {
    throw Error(ErrorCode::kInvalidSchema, "predictions cannot be optional");
  }
}

std::size_t AttributeSchema::IndexOf(std::string_view name) const {
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    if (attributes[i].name == name) return i;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown attribute '" + std::string(name) + "'");
}

std::map<std::string, BinarizationRule> AttributeSchema::Rules() const {
  std::map<std::string, BinarizationRule> rules;
  for (const auto& attr : attributes) {
    if (attr.binarization) rules.emplace(attr.name, *attr.binarization);
  }
  return rules;
}

Dataset::Dataset(AttributeSchema schema, std::vector<std::uint32_t> codes,
                 std::vector<Label> labels, std::vector<Label> predictions,
                 std::size_t dropped_rows)
    : schema_(std::move(schema)),
      codes_(std::move(codes)),
      labels_(std::move(labels)),
      predictions_(std::move(predictions)),
      dropped_rows_(dropped_rows) {
  schema_.Validate();
  const std::size_t k = schema_.attributes.size();
  if (k == 0) {
    size_ = has_labels() ? labels_.size() : predictions_.size();
    if (!codes_.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "codes without attributes");
    }
  } else {
    if (codes_.size() % k != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "code table is not a multiple of the attribute count");
    }
    size_ = codes_.size() / k;
  }
  if ((has_labels() && labels_.size() != size_) ||
      (!has_labels() && !labels_.empty())) {
    throw Error(ErrorCode::kInvalidArgument, "label column size mismatch");
  }
  if ((has_predictions() && predictions_.size() != size_) ||
      (!has_predictions() && !predictions_.empty())) {
    throw Error(ErrorCode::kInvalidArgument,
                "prediction column size mismatch");
  }
  for (std::size_t i = 0; i < codes_.size(); ++i) {
    const auto& attr = schema_.attributes[i % k];
    if (codes_[i] >= attr.domain.size()) {
      throw Error(ErrorCode::kDomainViolation,
                  "record " + std::to_string(i / k) + ", column '" +
                      attr.name + "': code out of domain");
    }
  }
  for (Label p : predictions_) {
    if (p == Label::kAbsent) {
      throw Error(ErrorCode::kInvalidArgument, "absent prediction");
    }
  }
}

RecordView Dataset::record(std::size_t i) const {
  const std::size_t k = num_attributes();
  return RecordView{
      std::span<const std::uint32_t>(codes_).subspan(i * k, k), label(i),
      prediction(i)};
}

Dataset ReadCsv(std::istream& in, const AttributeSchema& schema,
                const CsvOptions& options) {
  schema.Validate();
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

  AttributeSchema out_schema = schema;
  const std::size_t k = schema.attributes.size();
  std::vector<std::size_t> attr_columns;
  std::vector<std::unordered_map<std::string, std::uint32_t>> lookup(k);
  for (std::size_t j = 0; j < k; ++j) {
    const auto& attr = schema.attributes[j];
    attr_columns.push_back(column_of(attr.name));
    if (attr.kind == AttributeKind::kCategorical) {
      for (std::size_t c = 0; c < attr.domain.size(); ++c) {
        lookup[j].emplace(attr.domain[c], static_cast<std::uint32_t>(c));
      }
    } else {
      // Observed values are collected in first-seen order and re-sorted below.
      out_schema.attributes[j].domain.clear();
    }
  }
  const std::optional<std::size_t> label_column =
      schema.label ? std::optional(column_of(schema.label->name))
                   : std::nullopt;
  const std::optional<std::size_t> prediction_column =
      schema.prediction ? std::optional(column_of(schema.prediction->name))
                        : std::nullopt;

  const auto is_missing = [&](const std::string& v) {
    return std::find(options.missing_tokens.begin(),
                     options.missing_tokens.end(),
                     v) != options.missing_tokens.end();
  };
  const auto parse_outcome = [&](const OutcomeColumn& c, const std::string& v,
                                 std::size_t line) {
    if (v == c.positive) return Label::kPositive;
    if (!c.negative || v == *c.negative) return Label::kNegative;
    throw Error(ErrorCode::kDomainViolation,
                "line " + std::to_string(line) + ", column '" + c.name +
                    "': value '" + v + "'");
  };

  std::vector<std::uint32_t> codes;
  std::vector<Label> labels;
  std::vector<Label> predictions;
  std::vector<std::uint32_t> row_codes(k);
  std::size_t dropped = 0;
  const std::size_t exempt_column =
      label_column && schema.label->allow_missing ? *label_column : SIZE_MAX;
  std::vector<std::string> fields;
  while (reader.Next(fields)) {
    const std::size_t line = reader.line_number();
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kUnparsableRow,
                  "line " + std::to_string(line) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    std::optional<std::string> missing_column;
    for (std::size_t j = 0; j < k && !missing_column; ++j) {
      if (is_missing(fields[attr_columns[j]])) {
        missing_column = schema.attributes[j].name;
      }
    }
    if (!missing_column && prediction_column &&
        is_missing(fields[*prediction_column])) {
      missing_column = schema.prediction->name;
    }
    if (!missing_column && label_column && !schema.label->allow_missing &&
        is_missing(fields[*label_column])) {
      missing_column = schema.label->name;
    }
    for (std::size_t c = 0; c < fields.size() && !missing_column &&
                            options.missing_in_any_column;
         ++c) {
      if (c != exempt_column && is_missing(fields[c])) {
        missing_column = header[c];
      }
    }
    if (missing_column) {
      if (options.missing_policy == MissingPolicy::kError) {
        throw Error(ErrorCode::kMissingValue,
                    "line " + std::to_string(line) + ", column '" +
                        *missing_column + "'");
      }
      ++dropped;
      continue;
    }

    for (std::size_t j = 0; j < k; ++j) {
      const std::string& value = fields[attr_columns[j]];
      auto it = lookup[j].find(value);
      if (it == lookup[j].end()) {
        if (schema.attributes[j].kind == AttributeKind::kCategorical) {
          throw Error(ErrorCode::kDomainViolation,
                      "line " + std::to_string(line) + ", column '" +
                          schema.attributes[j].name + "': value '" + value +
                          "'");
        }
        auto& domain = out_schema.attributes[j].domain;
        it = lookup[j]
                 .emplace(value, static_cast<std::uint32_t>(domain.size()))
                 .first;
        domain.push_back(value);
      }
      row_codes[j] = it->second;
    }
    if (label_column) {
      const std::string& v = fields[*label_column];
      labels.push_back(is_missing(v) ? Label::kAbsent
                                     : parse_outcome(*schema.label, v, line));
    }
    if (prediction_column) {
      predictions.push_back(
          parse_outcome(*schema.prediction, fields[*prediction_column], line));
    }
    codes.insert(codes.end(), row_codes.begin(), row_codes.end());
  }

  // Numeric domains: sort numerically (non-numeric strings last, by text) and
  // remap codes so that reports do not depend on row order.
  for (std::size_t j = 0; j < k; ++j) {
    auto& attr = out_schema.attributes[j];
    if (attr.kind != AttributeKind::kNumeric) continue;
    std::vector<std::uint32_t> order(attr.domain.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = static_cast<std::uint32_t>(i);
    }
    std::vector<std::optional<double>> numbers;
    for (const auto& v : attr.domain) numbers.push_back(ParseNumber(v));
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (numbers[a].has_value() != numbers[b].has_value()) {
        return numbers[a].has_value();
      }
      if (numbers[a] && *numbers[a] != *numbers[b]) {
        return *numbers[a] < *numbers[b];
      }
      return attr.domain[a] < attr.domain[b];
    });
    std::vector<std::uint32_t> remap(order.size());
    std::vector<std::string> sorted;
    for (std::size_t i = 0; i < order.size(); ++i) {
      remap[order[i]] = static_cast<std::uint32_t>(i);
      sorted.push_back(attr.domain[order[i]]);
    }
    attr.domain = std::move(sorted);
    for (std::size_t r = j; r < codes.size(); r += k) codes[r] = remap[codes[r]];
  }

  return Dataset(std::move(out_schema), std::move(codes), std::move(labels),
                 std::move(predictions), dropped);
}

Dataset LoadCsv(const std::filesystem::path& path,
                const AttributeSchema& schema, const CsvOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return ReadCsv(in, schema, options);
}

void WriteCsv(const Dataset& dataset, std::ostream& out, char delimiter) {
  const AttributeSchema& schema = dataset.schema();
  std::vector<std::string> header;
  for (const auto& attr : schema.attributes) header.push_back(attr.name);
  if (schema.label) header.push_back(schema.label->name);
  if (schema.prediction) header.push_back(schema.prediction->name);
  const auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delimiter;
      out << EscapeCsvField(row[i], delimiter);
    }
    out << '\n';
  };
  const auto outcome_text = [](const OutcomeColumn& c, Label l) {
    if (l == Label::kAbsent) return std::string();
    if (l == Label::kPositive) return c.positive;
    if (!c.negative) {
      throw Error(ErrorCode::kInvalidArgument,
                  "column '" + c.name + "' has no negative value to write");
    }
    return *c.negative;
  };
  write_row(header);
  std::vector<std::string> row;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    row.clear();
    for (std::size_t j = 0; j < dataset.num_attributes(); ++j) {
      row.push_back(schema.attributes[j].domain[dataset.code(i, j)]);
    }
    if (schema.label) row.push_back(outcome_text(*schema.label, dataset.label(i)));
    if (schema.prediction) {
      row.push_back(outcome_text(*schema.prediction, dataset.prediction(i)));
    }
    write_row(row);
  }
}

DomainMapping MapDomain(const ProtectedAttribute& attr,
                        const BinarizationRule& rule) {
  ProtectedAttribute probe = attr;
  probe.binarization = rule;
  ValidateRule(probe);

  DomainMapping mapping;
  mapping.group.resize(attr.domain.size());
  if (const auto* set = std::get_if<ValueSetRule>(&rule)) {
    mapping.protected_label = set->protected_label;
    mapping.other_label = set->other_label;
    const auto contains = [](const std::vector<std::string>& values,
                             const std::string& v) {
      return std::find(values.begin(), values.end(), v) != values.end();
    };
    for (std::size_t c = 0; c < attr.domain.size(); ++c) {
      const std::string& v = attr.domain[c];
      if (contains(set->protected_values, v)) {
        mapping.group[c] = 0;
      } else if (contains(set->other_values, v) || set->other_takes_rest) {
        mapping.group[c] = 1;
      } else {
        throw Error(ErrorCode::kIncompleteRule,
                    "attribute '" + attr.name + "', value '" + v + "'");
      }
    }
  } else {
    const auto& t = std::get<ThresholdRule>(rule);
    mapping.protected_label = t.protected_below ? t.below_label : t.above_label;
    mapping.other_label = t.protected_below ? t.above_label : t.below_label;
    for (std::size_t c = 0; c < attr.domain.size(); ++c) {
      const auto number = ParseNumber(attr.domain[c]);
      if (!number) {
        throw Error(ErrorCode::kNonNumericThreshold,
                    "attribute '" + attr.name + "', value '" + attr.domain[c] +
                        "'");
      }
      const bool below = *number < t.threshold;
      mapping.group[c] = below == t.protected_below ? 0 : 1;
    }
  }
  return mapping;
}

Dataset Binarize(const Dataset& dataset,
                 const std::map<std::string, BinarizationRule>& rules) {
  AttributeSchema schema = dataset.schema();
  const std::size_t k = schema.attributes.size();
  std::vector<std::optional<std::vector<std::uint32_t>>> remaps(k);
  for (const auto& [name, rule] : rules) {
    const std::size_t j = schema.IndexOf(name);
    ProtectedAttribute& attr = schema.attributes[j];
    DomainMapping mapping = MapDomain(attr, rule);
    attr.kind = AttributeKind::kCategorical;
    attr.domain = {mapping.protected_label, mapping.other_label};
    attr.protected_value = mapping.protected_label;
    attr.binarization.reset();
    remaps[j] = std::move(mapping.group);
  }

  std::vector<std::uint32_t> codes(dataset.codes().begin(),
                                   dataset.codes().end());
  for (std::size_t j = 0; j < k; ++j) {
    if (!remaps[j]) continue;
    for (std::size_t r = j; r < codes.size(); r += k) {
      codes[r] = (*remaps[j])[codes[r]];
    }
  }
  std::vector<Label> labels;
  std::vector<Label> predictions;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.has_labels()) labels.push_back(dataset.label(i));
    if (dataset.has_predictions()) predictions.push_back(dataset.prediction(i));
  }
  return Dataset(std::move(schema), std::move(codes), std::move(labels),
                 std::move(predictions), dataset.dropped_rows());
}

Dataset BinarizeDeclared(const Dataset& dataset) {
  return Binarize(dataset, dataset.schema().Rules());
}

Dataset SelectAttributes(const Dataset& dataset,
                         const std::vector<std::string>& names) {
  std::vector<std::size_t> columns;
  AttributeSchema schema = dataset.schema();
  schema.attributes.clear();
  for (const auto& name : names) {
    const std::size_t j = dataset.schema().IndexOf(name);
    if (std::find(columns.begin(), columns.end(), j) != columns.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "attribute '" + name + "' selected twice");
    }
    columns.push_back(j);
    schema.attributes.push_back(dataset.schema().attributes[j]);
  }
  std::vector<std::uint32_t> codes;
  codes.reserve(dataset.size() * columns.size());
  std::vector<Label> labels;
  std::vector<Label> predictions;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    for (const std::size_t j : columns) codes.push_back(dataset.code(i, j));
    if (dataset.has_labels()) labels.push_back(dataset.label(i));
    if (dataset.has_predictions()) predictions.push_back(dataset.prediction(i));
  }
  return Dataset(std::move(schema), std::move(codes), std::move(labels),
                 std::move(predictions), dataset.dropped_rows());
}

}  // namespace mdfair
