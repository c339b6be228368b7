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

#include "mdfair/report.h"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "mdfair/csv.h"
#include "mdfair/error.h"

namespace mdfair {
namespace {

std::string FormatDouble(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.12g", v);
  std::string s = buffer;
  if (s == "-0") s = "0";
  return s;
}

void Dump(const Json& v, int indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += inner + Json(key).dump() + ": ";
        Dump(value, indent + 2, out);
      }
      out += "\n" + pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        Dump(v[i], indent + 2, out);
      }
      out += "\n" + pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += FormatDouble(v.get<double>());
      return;
    default:
      out += v.dump();
      return;
  }
}

std::string Scalar(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return FormatDouble(v.get<double>());
  return v.dump();
}

void Text(const Json& v, int indent, std::ostringstream& out) {
  const std::string pad(indent, ' ');
  if (v.is_object()) {
    for (const auto& [key, value] : v.items()) {
      if (value.is_structured() && !value.empty()) {
        out << pad << key << ":\n";
        Text(value, indent + 2, out);
      } else {
        out << pad << key << ": "
            << (value.is_structured() ? std::string("(none)") : Scalar(value))
            << "\n";
      }
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i].is_structured()) {
        out << pad << "- [" << i << "]\n";
        Text(v[i], indent + 2, out);
      } else {
        out << pad << "- " << Scalar(v[i]) << "\n";
      }
    }
  } else {
    out << pad << Scalar(v) << "\n";
  }
}

void CsvRow(std::ostringstream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << EscapeCsvField(fields[i], ',');
  }
  out << '\n';
}

// Emits every object carrying "subject" and "value" below `v`.
void CollectResults(const Json& v, const std::string& metric,
                    const std::string& typology, const std::string& path,
                    std::ostringstream& out) {
  if (v.is_object()) {
    std::string m = metric;
    std::string t = typology;
    if (v.contains("metric") && v.at("metric").is_string()) {
      m = v.at("metric").get<std::string>();
    }
    if (v.contains("typology") && v.at("typology").is_string()) {
      t = v.at("typology").get<std::string>();
    }
    if (v.contains("subject") && v.contains("value")) {
      CsvRow(out, {m, t, path, Scalar(v.at("subject")), Scalar(v.at("value")),
                   v.contains("epsilon") ? Scalar(v.at("epsilon")) : "",
                   v.contains("violated") ? Scalar(v.at("violated")) : ""});
    }
    for (const auto& [key, value] : v.items()) {
      CollectResults(value, m, t, path.empty() ? key : path + "." + key, out);
    }
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      CollectResults(v[i], metric, typology,
                     path + "[" + std::to_string(i) + "]", out);
    }
  }
}

}  // namespace

Json NumberJson(double value) {
  if (std::isnan(value)) return nullptr;
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

std::string DumpJson(const Json& value) {
  std::string out;
  Dump(value, 0, out);
  out += "\n";
  return out;
}

Json ToJson(const GroupRate& rate) {
  Json obj = Json::object();
  obj["numerator"] = rate.numerator;
  obj["denominator"] = rate.denominator;
  obj["alpha"] = NumberJson(rate.alpha);
  const auto v = rate.maybe_value();
  obj["rate"] = v ? NumberJson(*v) : Json(nullptr);
  return obj;
}

Json ToJson(const MetricResult& result) {
  Json obj = Json::object();
  obj["subject"] = result.subject;
  obj["value"] = NumberJson(result.value);
  obj["epsilon"] = NumberJson(result.epsilon);
  obj["violated"] = result.violated;
  if (result.signed_difference) {
    obj["signed_difference"] = NumberJson(*result.signed_difference);
  }
  if (!result.supports.empty()) {
    Json supports = Json::array();
    for (const auto& s : result.supports) {
      supports.push_back({{"group", s.label},
                          {"numerator", s.numerator},
                          {"denominator", s.denominator}});
    }
    obj["supports"] = std::move(supports);
  }
  return obj;
}

Json ToJson(const CumulativeResult& result) {
  Json obj = Json::object();
  obj["operator"] = std::string(OperatorName(result.op));
  obj["combined"] = ToJson(result.combined);
  Json breakdown = Json::array();
  for (const auto& r : result.breakdown) breakdown.push_back(ToJson(r));
  obj["breakdown"] = std::move(breakdown);
  if (result.arg_max) {
    obj["arg_max"] = result.breakdown[*result.arg_max].subject;
  }
  return obj;
}

Json ToJson(const SubgroupMetricSet& set) {
  Json obj = Json::object();
  obj["combined"] = ToJson(set.combined);
  if (set.epsilon_star) obj["epsilon_star"] = NumberJson(*set.epsilon_star);
  const auto name_of = [&](const SubgroupKey& key) -> std::string {
    for (const auto& r : set.rates) {
      if (r.key == key) return r.name;
    }
    for (const auto& r : set.subgroups) {
      if (r.key == key) return r.name;
    }
    return "";
  };
  if (set.arg_min) obj["arg_min"] = name_of(*set.arg_min);
  if (set.arg_max) obj["arg_max"] = name_of(*set.arg_max);
  if (!set.subgroups.empty()) {
    Json list = Json::array();
    for (const auto& s : set.subgroups) {
      Json item = ToJson(s.result);
      if (!s.flags.empty()) item["flags"] = s.flags;
      list.push_back(std::move(item));
    }
    obj["subgroups"] = std::move(list);
  }
  if (!set.rates.empty()) {
    Json list = Json::array();
    for (const auto& r : set.rates) {
      Json item = {{"subgroup", r.name}};
      const Json rate = ToJson(r.rate);
      for (const auto& [key, value] : rate.items()) item[key] = value;
      list.push_back(std::move(item));
    }
    obj["rates"] = std::move(list);
  }
  if (!set.pairs.empty()) {
    Json list = Json::array();
    for (const auto& p : set.pairs) {
      Json item = ToJson(p.result);
      item["infinite"] = p.infinite;
      list.push_back(std::move(item));
    }
    obj["pairs"] = std::move(list);
  }
  if (!set.excluded.empty()) {
    Json list = Json::array();
    for (const auto& e : set.excluded) {
      list.push_back({{"subgroup", e.name}, {"reason", e.reason}});
    }
    obj["excluded"] = std::move(list);
  }
  return obj;
}

Json ToJson(const SequentialResult& result) {
  Json obj = Json::object();
  obj["subject"] = result.subject;
  obj["target"] = result.target;
  obj["reference"] = result.reference;
  obj["condition"] = std::string(ConditionName(result.condition));
  obj["f0"] = NumberJson(result.f0);
  Json sequence = Json::array();
  for (const double f : result.FSequence()) sequence.push_back(NumberJson(f));
  obj["f_sequence"] = std::move(sequence);
  Json stages = Json::array();
  for (std::size_t t = 0; t < result.stages.size(); ++t) {
    const StageEvaluation& s = result.stages[t];
    Json item = Json::object();
    item["stage"] = s.stage;
    item["name"] = s.name;
    item["reference_rate"] = ToJson(s.reference);
    item["target_rate"] = ToJson(s.target);
    item["ratio"] = NumberJson(s.ratio);
    item["penalty"] = NumberJson(s.penalty);
    item["result"] = ToJson(result.StageResult(t));
    stages.push_back(std::move(item));
  }
  obj["stages"] = std::move(stages);
  return obj;
}

Json ToJson(const SequentialMultiResult& result) {
  Json obj = Json::object();
  obj["operator"] = std::string(OperatorName(result.op));
  Json combined = Json::array();
  for (const auto& r : result.combined) combined.push_back(ToJson(r));
  obj["combined"] = std::move(combined);
  Json breakdown = Json::array();
  for (const auto& r : result.breakdown) breakdown.push_back(ToJson(r));
  obj["breakdown"] = std::move(breakdown);
  return obj;
}

Json ToJson(const ScarcityReport& report) {
  Json obj = Json::object();
  obj["total"] = report.total;
  obj["lattice_size"] = NumberJson(report.lattice_size);
  obj["occupied"] = report.rows.size();
  Json rows = Json::array();
  for (const auto& row : report.rows) {
    Json item = Json::object();
    item["subgroup"] = row.name;
    item["count"] = row.count;
    item["share"] = NumberJson(row.share);
    item["positives"] = row.positives;
    item["negatives"] = row.negatives;
    item["cir"] = row.cir;
    item["negatives_per_positive"] =
        row.negatives_per_positive ? NumberJson(*row.negatives_per_positive)
                                   : Json(nullptr);
    rows.push_back(std::move(item));
  }
  obj["rows"] = std::move(rows);
  return obj;
}

Json ToJson(const PipelineValidation& validation) {
  Json obj = Json::object();
  obj["valid"] = validation.ok();
  Json list = Json::array();
  for (const auto& v : validation.violations) {
    list.push_back({{"individual", v.individual},
                    {"stage", v.stage},
                    {"kind", v.kind}});
  }
  obj["violations"] = std::move(list);
  return obj;
}

Json ToJson(const CalibrationResult& result) {
  Json obj = Json::object();
  obj["exact"] = result.exact();
  obj["objective"] = NumberJson(result.objective);
  obj["candidates_evaluated"] = result.candidates_evaluated;
  Json rules = Json::object();
  for (const auto& [name, rule] : result.rules) {
    Json r = Json::object();
    if (const auto* t = std::get_if<ThresholdRule>(&rule)) {
      r["type"] = "threshold";
      r["threshold"] = NumberJson(t->threshold);
      r["below"] = t->below_label;
      r["above"] = t->above_label;
      r["protected"] = t->protected_below ? "below" : "above";
    } else {
      const auto& v = std::get<ValueSetRule>(rule);
      r["type"] = "values";
      r["protected"] = {{"label", v.protected_label},
                        {"values", v.protected_values}};
      r["other"] = {{"label", v.other_label}, {"values", v.other_values}};
    }
    rules[name] = std::move(r);
  }
  obj["rules"] = std::move(rules);
  Json matches = Json::array();
  for (const auto& m : result.matches) {
    Json item = Json::object();
    item["subgroup"] = m.target.subgroup;
    item["target_count"] = m.target.count;
    item["count"] = m.count;
    if (m.target.positives) item["target_positives"] = *m.target.positives;
    item["positives"] = m.positives;
    matches.push_back(std::move(item));
  }
  obj["matches"] = std::move(matches);
  return obj;
}

Json ToJson(const AttributeSchema& schema, const SubgroupKey& key) {
  return SubgroupName(schema, key);
}

std::string RenderText(const Json& report) {
  std::ostringstream out;
  Text(report, 0, out);
  return out.str();
}

std::string RenderCsv(const Json& report) {
  std::ostringstream out;
  if (report.contains("scarcity") && !report.contains("metrics")) {
    CsvRow(out, {"subgroup", "count", "share", "positives", "negatives",
                 "cir"});
    for (const Json& row : report.at("scarcity").at("rows")) {
      CsvRow(out, {Scalar(row.at("subgroup")), Scalar(row.at("count")),
                   Scalar(row.at("share")), Scalar(row.at("positives")),
                   Scalar(row.at("negatives")), Scalar(row.at("cir"))});
    }
    return out.str();
  }
  CsvRow(out, {"metric", "typology", "path", "subject", "value", "epsilon",
               "violated"});
  if (report.contains("metrics")) {
    CollectResults(report.at("metrics"), "", "", "metrics", out);
  }
  return out.str();
}

ReportFormat ParseReportFormat(std::string_view text) {
  if (text == "json") return ReportFormat::kJson;
  if (text == "text") return ReportFormat::kText;
  if (text == "csv") return ReportFormat::kCsv;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown format '" + std::string(text) + "'");
}

std::string Render(const Json& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::kJson: return DumpJson(report);
    case ReportFormat::kText: return RenderText(report);
    case ReportFormat::kCsv: return RenderCsv(report);
  }
  return DumpJson(report);
}

}  // namespace mdfair
