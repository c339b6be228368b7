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

#include <cmath>
#include <limits>
#include <string>

#include "gtest/gtest.h"
#include "mdfair/audit.h"
#include "mdfair/report.h"
#include "mdfair/scenarios.h"
#include "mdfair/subgroups.h"
#include "test_util.h"

namespace mdfair {
namespace {

TEST(NumberJsonTest, Sentinels) {
  EXPECT_EQ(NumberJson(std::numeric_limits<double>::infinity()), Json("inf"));
  EXPECT_EQ(NumberJson(-std::numeric_limits<double>::infinity()), Json("-inf"));
  EXPECT_TRUE(NumberJson(std::nan("")).is_null());
  EXPECT_EQ(NumberJson(0.5), Json(0.5));
}

TEST(DumpJsonTest, TwelveSignificantDigitsAndNoNegativeZero) {
  Json j;
  j["third"] = 1.0 / 3.0;
  j["neg_zero"] = -0.0;
  j["big"] = 1e20;
  j["int"] = 7;
  j["tiny"] = -5.551115123125783e-17;
  EXPECT_EQ(DumpJson(j),
            "{\n"
            "  \"third\": 0.333333333333,\n"
            "  \"neg_zero\": 0,\n"
            "  \"big\": 1e+20,\n"
            "  \"int\": 7,\n"
            "  \"tiny\": -5.55111512313e-17\n"
            "}\n");
}

TEST(DumpJsonTest, NestedLayoutAndEmptyContainers) {
  Json j;
  j["list"] = Json::array({1, "a", Json::object()});
  j["empty"] = Json::array();
  EXPECT_EQ(DumpJson(j),
            "{\n"
            "  \"list\": [\n"
            "    1,\n"
            "    \"a\",\n"
            "    {}\n"
            "  ],\n"
            "  \"empty\": []\n"
            "}\n");
}

TEST(DumpJsonTest, KeepsInsertionOrder) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = 2;
  const std::string out = DumpJson(j);
  EXPECT_LT(out.find("zeta"), out.find("alpha"));
}

TEST(ReportTest, MetricResultFields) {
  const MetricResult r = MakeResult("x", 0.25, 0.1, {Support{"a", 1, 4}});
  const Json j = ToJson(r);
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys.front(), "subject");
  EXPECT_EQ(j.at("value"), Json(0.25));
  EXPECT_EQ(j.at("violated"), Json(true));
}

TEST(ReportTest, InfiniteDfRendersSentinel) {
  const Dataset d = GenGerrymandering();
  const auto set = DifferentialFairness(d, EnumerateSubgroups(d), PairEpsilonPolicy(0));
  const std::string out = DumpJson(ToJson(set));
  EXPECT_NE(out.find("\"inf\""), std::string::npos);
  EXPECT_EQ(out.find("Infinity"), std::string::npos);
}

AuditConfig GerrymanderingConfig() {
  AuditConfig config;
  config.metrics = {MetricKind::kCumulative, MetricKind::kSpsf, MetricKind::kDf,
                    MetricKind::kWcf};
  return config;
}

TEST(AuditReportTest, TopLevelKeyOrder) {
  const AuditOutcome outcome = RunAudit(GenGerrymandering(), GerrymanderingConfig());
  std::vector<std::string> keys;
  for (const auto& [k, v] : outcome.report.items()) keys.push_back(k);
  ASSERT_GE(keys.size(), 5u);
  EXPECT_EQ(keys[0], "report_version");
  EXPECT_EQ(outcome.report.at("report_version"), Json(std::string(kReportVersion)));
  EXPECT_EQ(keys.back(), "summary");
  EXPECT_EQ(outcome.exit_code(), 1);
}

TEST(AuditReportTest, ByteIdenticalAcrossRuns) {
  const std::string a =
      DumpJson(RunAudit(GenGerrymandering(), GerrymanderingConfig()).report);
  const std::string b =
      DumpJson(RunAudit(GenGerrymandering(), GerrymanderingConfig()).report);
  EXPECT_EQ(a, b);
}

TEST(AuditReportTest, TextAndCsvProjections) {
  const Json report = RunAudit(GenGerrymandering(), GerrymanderingConfig()).report;
  const std::string text = Render(report, ReportFormat::kText);
  EXPECT_NE(text.find("report_version: 1.0"), std::string::npos) << text;
  const std::string csv = Render(report, ReportFormat::kCsv);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "metric,typology,path,subject,value,epsilon,violated");
  EXPECT_NE(csv.find("wcf,intersectional,"), std::string::npos) << csv;
  EXPECT_NE(csv.find(",inf,"), std::string::npos) << csv;
  EXPECT_MDFAIR_ERROR(ParseReportFormat("xml"), kInvalidArgument);
}

TEST(AuditReportTest, SubgroupsCsvIsAScarcityTable) {
  const Dataset d = GenRandom({.n = 100, .k = 2, .seed = 1});
  const Json report = RunSubgroups(d, {});
  const std::string csv = RenderCsv(report);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "subgroup,count,share,positives,negatives,cir");
}

TEST(AuditConfigTest, JsonRoundTrip) {
  const AuditConfig config = ParseAuditConfig(R"({
    "metrics": ["df", "wcf"], "condition": "fpr", "epsilon": 0.2,
    "operator": "mean", "alpha": 0.5, "min_support": 3,
    "attributes": ["s1"], "df_outcome": "negative"
  })");
  EXPECT_EQ(config.metrics, (std::vector<MetricKind>{MetricKind::kDf, MetricKind::kWcf}));
  EXPECT_EQ(config.condition, Condition::kFalsePositiveRate);
  EXPECT_EQ(config.op, CombineOperator::kMean);
  EXPECT_EQ(config.min_support, 3u);
  EXPECT_EQ(config.df_outcome, Label::kNegative);
  const AuditConfig again = ParseAuditConfig(ToJson(config).dump());
  EXPECT_EQ(DumpJson(ToJson(again)), DumpJson(ToJson(config)));
  EXPECT_MDFAIR_ERROR(ParseAuditConfig(R"({"metrics": ["nope"]})"), kInvalidArgument);
}

}  // namespace
}  // namespace mdfair
