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

#include "mdfair/schema_config.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mdfair/error.h"

namespace mdfair {
namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void Fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kInvalidSchema, where + ": " + what);
}

Json ParseJson(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::kInvalidSchema, e.what());
  }
}

const Json& Require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    Fail(where, std::string("missing \"") + key + "\"");
  }
  return obj.at(key);
}

std::string String(const Json& v, const std::string& where) {
  if (!v.is_string()) Fail(where, "expected a string");
  return v.get<std::string>();
}

double Number(const Json& v, const std::string& where) {
  if (!v.is_number()) Fail(where, "expected a number");
  return v.get<double>();
}

bool Bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) Fail(where, "expected true or false");
  return v.get<bool>();
}

std::vector<std::string> Strings(const Json& v, const std::string& where) {
  if (!v.is_array()) Fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const Json& item : v) out.push_back(String(item, where));
  return out;
}

void CheckKeys(const Json& obj, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!obj.is_object()) Fail(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) Fail(where, "unknown key \"" + key + "\"");
  }
}

CsvOptions ParseCsv(const Json& root) {
  CsvOptions csv;
  if (!root.contains("csv")) return csv;
  const Json& obj = root.at("csv");
  CheckKeys(obj, {"delimiter", "missing", "missing_tokens", "missing_scope"},
            "csv");
  if (obj.contains("delimiter")) {
    const std::string d = String(obj.at("delimiter"), "csv.delimiter");
    if (d.size() != 1) Fail("csv.delimiter", "expected one character");
    csv.delimiter = d[0];
  }
  if (obj.contains("missing")) {
    const std::string m = String(obj.at("missing"), "csv.missing");
    if (m == "drop") {
      csv.missing_policy = MissingPolicy::kDrop;
    } else if (m == "error") {
      csv.missing_policy = MissingPolicy::kError;
    } else {
      Fail("csv.missing", "expected \"drop\" or \"error\"");
    }
  }
  if (obj.contains("missing_tokens")) {
    csv.missing_tokens = Strings(obj.at("missing_tokens"), "csv.missing_tokens");
  }
  if (obj.contains("missing_scope")) {
    const std::string scope = String(obj.at("missing_scope"), "csv.missing_scope");
    if (scope != "schema" && scope != "row") {
      Fail("csv.missing_scope", "expected \"schema\" or \"row\"");
    }
    csv.missing_in_any_column = scope == "row";
  }
  return csv;
}

Json SerializeCsv(const CsvOptions& csv) {
  Json obj = Json::object();
  obj["delimiter"] = std::string(1, csv.delimiter);
  obj["missing"] = csv.missing_policy == MissingPolicy::kDrop ? "drop" : "error";
  obj["missing_tokens"] = csv.missing_tokens;
  obj["missing_scope"] = csv.missing_in_any_column ? "row" : "schema";
  return obj;
}

BinarizationRule ParseRule(const Json& obj, const std::string& where) {
  const std::string type = String(Require(obj, "type", where), where + ".type");
  if (type == "threshold") {
    CheckKeys(obj, {"type", "threshold", "below", "above", "protected"}, where);
    ThresholdRule rule;
    rule.threshold = Number(Require(obj, "threshold", where), where + ".threshold");
    rule.below_label = String(Require(obj, "below", where), where + ".below");
    rule.above_label = String(Require(obj, "above", where), where + ".above");
    const std::string side =
        String(Require(obj, "protected", where), where + ".protected");
    if (side != "below" && side != "above") {
      Fail(where + ".protected", "expected \"below\" or \"above\"");
    }
    rule.protected_below = side == "below";
    return rule;
  }
  if (type == "values") {
    CheckKeys(obj, {"type", "protected", "other"}, where);
    ValueSetRule rule;
    const Json& prot = Require(obj, "protected", where);
    CheckKeys(prot, {"label", "values"}, where + ".protected");
    rule.protected_label =
        String(Require(prot, "label", where + ".protected"), where + ".protected.label");
    rule.protected_values = Strings(Require(prot, "values", where + ".protected"),
                                    where + ".protected.values");
    const Json& other = Require(obj, "other", where);
    CheckKeys(other, {"label", "values", "rest"}, where + ".other");
    rule.other_label =
        String(Require(other, "label", where + ".other"), where + ".other.label");
    if (other.contains("values")) {
      rule.other_values = Strings(other.at("values"), where + ".other.values");
    }
    if (other.contains("rest")) {
      rule.other_takes_rest = Bool(other.at("rest"), where + ".other.rest");
    }
    return rule;
  }
  Fail(where + ".type", "expected \"values\" or \"threshold\"");
}

Json SerializeRule(const BinarizationRule& rule) {
  Json obj = Json::object();
  if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
    obj["type"] = "threshold";
    obj["threshold"] = t->threshold;
    obj["below"] = t->below_label;
    obj["above"] = t->above_label;
    obj["protected"] = t->protected_below ? "below" : "above";
    return obj;
  }
  const auto& v = std::get<ValueSetRule>(rule);
  obj["type"] = "values";
  obj["protected"] = {{"label", v.protected_label},
                      {"values", v.protected_values}};
  Json other = {{"label", v.other_label}, {"values", v.other_values}};
  if (v.other_takes_rest) other["rest"] = true;
  obj["other"] = other;
  return obj;
}

std::vector<ProtectedAttribute> ParseAttributes(const Json& root) {
  const Json& list = Require(root, "attributes", "schema");
  if (!list.is_array()) Fail("attributes", "expected an array");
  std::vector<ProtectedAttribute> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "attributes[" + std::to_string(i) + "]";
    const Json& obj = list[i];
    CheckKeys(obj, {"name", "values", "numeric", "protected", "binarize"},
              where);
    ProtectedAttribute attr;
    attr.name = String(Require(obj, "name", where), where + ".name");
    const bool numeric =
        obj.contains("numeric") && Bool(obj.at("numeric"), where + ".numeric");
    attr.kind = numeric ? AttributeKind::kNumeric : AttributeKind::kCategorical;
    if (obj.contains("values")) {
      if (numeric) Fail(where, "numeric attributes take no \"values\"");
      attr.domain = Strings(obj.at("values"), where + ".values");
    } else if (!numeric) {
      Fail(where, "missing \"values\"");
    }
    if (obj.contains("protected")) {
      attr.protected_value = String(obj.at("protected"), where + ".protected");
    }
    if (obj.contains("binarize")) {
      attr.binarization = ParseRule(obj.at("binarize"), where + ".binarize");
    }
    out.push_back(std::move(attr));
  }
  return out;
}

Json SerializeAttributes(const std::vector<ProtectedAttribute>& attributes) {
  Json list = Json::array();
  for (const auto& attr : attributes) {
    Json obj = Json::object();
    obj["name"] = attr.name;
    if (attr.kind == AttributeKind::kNumeric) {
      obj["numeric"] = true;
    } else {
      obj["values"] = attr.domain;
    }
    if (attr.protected_value) obj["protected"] = *attr.protected_value;
    if (attr.binarization) obj["binarize"] = SerializeRule(*attr.binarization);
    list.push_back(std::move(obj));
  }
  return list;
}

OutcomeColumn ParseOutcome(const Json& obj, const std::string& where,
                           bool allow_missing_key) {
  if (allow_missing_key) {
    CheckKeys(obj, {"column", "positive", "negative", "allow_missing"}, where);
  } else {
    CheckKeys(obj, {"column", "positive", "negative"}, where);
  }
  OutcomeColumn col;
  col.name = String(Require(obj, "column", where), where + ".column");
  col.positive = String(Require(obj, "positive", where), where + ".positive");
  if (obj.contains("negative")) {
    col.negative = String(obj.at("negative"), where + ".negative");
  }
  if (obj.contains("allow_missing")) {
    col.allow_missing = Bool(obj.at("allow_missing"), where + ".allow_missing");
  }
  return col;
}

Json SerializeOutcome(const OutcomeColumn& col, bool is_label) {
  Json obj = Json::object();
  obj["column"] = col.name;
  obj["positive"] = col.positive;
  if (col.negative) obj["negative"] = *col.negative;
  if (is_label && col.allow_missing) obj["allow_missing"] = true;
  return obj;
}

}  // namespace

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

SchemaFile ParseSchema(const std::string& json_text) {
  const Json root = ParseJson(json_text);
  CheckKeys(root, {"csv", "attributes", "label", "prediction"}, "schema");
  SchemaFile file;
  file.csv = ParseCsv(root);
  file.schema.attributes = ParseAttributes(root);
  if (root.contains("label")) {
    file.schema.label = ParseOutcome(root.at("label"), "label", true);
  }
  if (root.contains("prediction")) {
    file.schema.prediction =
        ParseOutcome(root.at("prediction"), "prediction", false);
  }
  file.schema.Validate();
  return file;
}

SchemaFile LoadSchema(const std::filesystem::path& path) {
  return ParseSchema(ReadTextFile(path));
}

std::string SerializeSchema(const SchemaFile& file) {
  Json root = Json::object();
  root["csv"] = SerializeCsv(file.csv);
  root["attributes"] = SerializeAttributes(file.schema.attributes);
  if (file.schema.label) {
    root["label"] = SerializeOutcome(*file.schema.label, true);
  }
  if (file.schema.prediction) {
    root["prediction"] = SerializeOutcome(*file.schema.prediction, false);
  }
  return root.dump(2) + "\n";
}

PipelineSchemaFile ParsePipelineSchema(const std::string& json_text) {
  const Json root = ParseJson(json_text);
  CheckKeys(root, {"csv", "attributes", "stages"}, "schema");
  PipelineSchemaFile file;
  file.csv = ParseCsv(root);
  file.schema.attributes = ParseAttributes(root);
  const Json& stages = Require(root, "stages", "schema");
  if (!stages.is_array() || stages.empty()) {
    Fail("stages", "expected a non-empty array");
  }
  for (std::size_t t = 0; t < stages.size(); ++t) {
    const std::string where = "stages[" + std::to_string(t) + "]";
    CheckKeys(stages[t], {"name", "column", "truth"}, where);
    PipelineStage stage;
    stage.name = String(Require(stages[t], "name", where), where + ".name");
    stage.column = stages[t].contains("column")
                       ? String(stages[t].at("column"), where + ".column")
                       : stage.name;
    if (stages[t].contains("truth")) {
      stage.truth_column = String(stages[t].at("truth"), where + ".truth");
    }
    file.schema.stages.push_back(std::move(stage));
  }
  AttributeSchema attributes;
  attributes.attributes = file.schema.attributes;
  attributes.Validate();
  return file;
}

PipelineSchemaFile LoadPipelineSchema(const std::filesystem::path& path) {
  return ParsePipelineSchema(ReadTextFile(path));
}

std::string SerializePipelineSchema(const PipelineSchemaFile& file) {
  Json root = Json::object();
  root["csv"] = SerializeCsv(file.csv);
  root["attributes"] = SerializeAttributes(file.schema.attributes);
  Json stages = Json::array();
  for (const auto& stage : file.schema.stages) {
    Json obj = {{"name", stage.name}, {"column", stage.column}};
    if (stage.truth_column) obj["truth"] = *stage.truth_column;
    stages.push_back(std::move(obj));
  }
  root["stages"] = std::move(stages);
  return root.dump(2) + "\n";
}

CalibrationSpec ParseCalibration(const std::string& json_text,
                                 const AttributeSchema& schema) {
  const Json root = ParseJson(json_text);
  CheckKeys(root, {"attributes", "targets"}, "calibration");
  CalibrationSpec spec;
  const Json& attrs = Require(root, "attributes", "calibration");
  if (!attrs.is_array()) Fail("attributes", "expected an array");
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    const std::string where = "attributes[" + std::to_string(i) + "]";
    CheckKeys(attrs[i], {"name", "partition", "threshold"}, where);
    AttributeCandidates c;
    c.attribute = String(Require(attrs[i], "name", where), where + ".name");
    if (attrs[i].contains("partition")) {
      const Json& p = attrs[i].at("partition");
      CheckKeys(p, {"protected", "other"}, where + ".partition");
      const ProtectedAttribute& attr =
          schema.attributes[schema.IndexOf(c.attribute)];
      c.rules = PartitionCandidates(
          attr.domain,
          String(Require(p, "protected", where), where + ".partition.protected"),
          String(Require(p, "other", where), where + ".partition.other"));
    } else if (attrs[i].contains("threshold")) {
      const Json& t = attrs[i].at("threshold");
      const std::string w = where + ".threshold";
      CheckKeys(t, {"from", "to", "step", "below", "above", "protected"}, w);
      const std::string side = String(Require(t, "protected", w), w);
      if (side != "below" && side != "above") {
        Fail(w + ".protected", "expected \"below\" or \"above\"");
      }
      c.rules = ThresholdCandidates(
          Number(Require(t, "from", w), w + ".from"),
          Number(Require(t, "to", w), w + ".to"),
          Number(Require(t, "step", w), w + ".step"),
          String(Require(t, "below", w), w + ".below"),
          String(Require(t, "above", w), w + ".above"), side == "below");
    } else {
      Fail(where, "expected \"partition\" or \"threshold\"");
    }
    spec.candidates.push_back(std::move(c));
  }
  const Json& targets = Require(root, "targets", "calibration");
  if (!targets.is_array()) Fail("targets", "expected an array");
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const std::string where = "targets[" + std::to_string(i) + "]";
    CheckKeys(targets[i], {"subgroup", "count", "positives"}, where);
    CalibrationTarget target;
    const Json& sg = Require(targets[i], "subgroup", where);
    if (!sg.is_object()) Fail(where + ".subgroup", "expected an object");
    for (const auto& [k, v] : sg.items()) {
      target.subgroup[k] = String(v, where + ".subgroup." + k);
    }
    const Json& count = Require(targets[i], "count", where);
    if (!count.is_number_unsigned()) Fail(where + ".count", "expected a count");
    target.count = count.get<std::size_t>();
    if (targets[i].contains("positives")) {
      const Json& p = targets[i].at("positives");
      if (!p.is_number_unsigned()) Fail(where + ".positives", "expected a count");
      target.positives = p.get<std::size_t>();
    }
    spec.targets.push_back(std::move(target));
  }
  return spec;
}

CalibrationSpec LoadCalibration(const std::filesystem::path& path,
                                const AttributeSchema& schema) {
  return ParseCalibration(ReadTextFile(path), schema);
}

}  // namespace mdfair
