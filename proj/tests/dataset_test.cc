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

#include <random>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "mdfair/calibration.h"
#include "mdfair/csv.h"
#include "mdfair/dataset.h"
#include "mdfair/scenarios.h"
#include "mdfair/schema_config.h"
#include "mdfair/subgroups.h"
#include "test_util.h"

namespace mdfair {
namespace {

using ::mdfair::testing::FromCsv;
using ::mdfair::testing::kTwoAttributeSchema;

TEST(CsvTest, SplitsQuotedFieldsAndTrims) {
  const auto fields = SplitCsvLine(R"( a ,"b,c", "d ""e""" ,)", ',');
  ASSERT_TRUE(fields.has_value());
  EXPECT_EQ(*fields, (std::vector<std::string>{"a", "b,c", "d \"e\"", ""}));
}

TEST(CsvTest, RejectsUnterminatedQuote) {
  EXPECT_FALSE(SplitCsvLine("a,\"b", ',').has_value());
}

TEST(CsvTest, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(EscapeCsvField("plain", ','), "plain");
  EXPECT_EQ(EscapeCsvField("a,b", ','), "\"a,b\"");
  EXPECT_EQ(EscapeCsvField("say \"hi\"", ','), "\"say \"\"hi\"\"\"");
}

TEST(LoadCsvTest, ReadsRecordsInFileOrder) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nF,B,1,0\nM,W,0,1\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.code(0, 0), 0u);
  EXPECT_EQ(d.code(1, 1), 1u);
  EXPECT_EQ(d.label(0), Label::kPositive);
  EXPECT_EQ(d.prediction(0), Label::kNegative);
  EXPECT_EQ(d.dropped_rows(), 0u);
}

TEST(LoadCsvTest, EmptyFileWithHeaderGivesEmptyDataset) {
  const Dataset d = FromCsv(kTwoAttributeSchema, "g,r,y,yhat\n");
  EXPECT_EQ(d.size(), 0u);
}

TEST(LoadCsvTest, ExtraColumnsAreIgnoredAndOrderIsFree) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "yhat,other,r,g,y\n1,zz,W,F,0\n");
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d.code(0, 0), 0u);
  EXPECT_EQ(d.code(0, 1), 1u);
  EXPECT_EQ(d.prediction(0), Label::kPositive);
}

TEST(LoadCsvTest, MissingColumn) {
  EXPECT_MDFAIR_ERROR(FromCsv(kTwoAttributeSchema, "g,y,yhat\nF,1,1\n"),
                      kMissingColumn);
}

TEST(LoadCsvTest, ValueOutsideDomain) {
  try {
    FromCsv(kTwoAttributeSchema, "g,r,y,yhat\nF,B,1,1\nX,B,1,1\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomainViolation);
    const std::string what = e.what();
    EXPECT_NE(what.find("line 3"), std::string::npos) << what;
    EXPECT_NE(what.find("'g'"), std::string::npos) << what;
    EXPECT_NE(what.find("'X'"), std::string::npos) << what;
  }
}

TEST(LoadCsvTest, UndeclaredOutcomeValue) {
  EXPECT_MDFAIR_ERROR(FromCsv(kTwoAttributeSchema, "g,r,y,yhat\nF,B,2,1\n"),
                      kDomainViolation);
}

TEST(LoadCsvTest, WrongFieldCount) {
  EXPECT_MDFAIR_ERROR(FromCsv(kTwoAttributeSchema, "g,r,y,yhat\nF,B,1\n"),
                      kUnparsableRow);
}

TEST(LoadCsvTest, MissingValuesAreDroppedAndCounted) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nF,?,1,1\nM,W,0,0\n,B,1,0\nF,B,?,1\n");
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.dropped_rows(), 3u);
}

TEST(LoadCsvTest, MissingValuePolicyError) {
  const std::string schema = R"({
    "csv": {"missing": "error"},
    "attributes": [{"name": "g", "values": ["F", "M"], "protected": "F"}],
    "prediction": {"column": "yhat", "positive": "1", "negative": "0"}
  })";
  EXPECT_MDFAIR_ERROR(FromCsv(schema, "g,yhat\n?,1\n"), kMissingValue);
}

TEST(LoadCsvTest, RowScopeDropsMissingValuesOutsideTheSchema) {
  const std::string columns = R"(
    "attributes": [{"name": "g", "values": ["F", "M"], "protected": "F"}],
    "prediction": {"column": "yhat", "positive": "1", "negative": "0"})";
  const std::string csv = "g,note,yhat\nF,?,1\nM,ok,0\n";
  EXPECT_EQ(FromCsv("{" + columns + "}", csv).size(), 2u);
  const Dataset d = FromCsv(
      R"({"csv": {"missing_scope": "row"},)" + columns + "}", csv);
  EXPECT_EQ(d.size(), 1u);
  EXPECT_EQ(d.dropped_rows(), 1u);
}

TEST(LoadCsvTest, OptionalLabelKeepsAbsentLabels) {
  const std::string schema = R"({
    "attributes": [{"name": "g", "values": ["F", "M"], "protected": "F"}],
    "label": {"column": "y", "positive": "1", "negative": "0",
              "allow_missing": true},
    "prediction": {"column": "yhat", "positive": "1", "negative": "0"}
  })";
  const Dataset d = FromCsv(schema, "g,y,yhat\nF,,1\nM,1,0\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.label(0), Label::kAbsent);
  EXPECT_EQ(d.label(1), Label::kPositive);
}

TEST(LoadCsvTest, NumericDomainIsSortedNumerically) {
  const std::string schema = R"({
    "attributes": [{"name": "age", "numeric": true}]
  , "label": {"column": "y", "positive": "1", "negative": "0"}})";
  const Dataset d = FromCsv(schema, "age,y\n40,1\n9,0\n100,1\n9,1\n");
  EXPECT_EQ(d.schema().attributes[0].domain,
            (std::vector<std::string>{"9", "40", "100"}));
  EXPECT_EQ(d.code(0, 0), 1u);
  EXPECT_EQ(d.code(3, 0), 0u);
}

TEST(LoadCsvTest, TwoLoadsAreIdentical) {
  const std::string csv = "g,r,y,yhat\nF,B,1,0\nM,W,0,1\nM,B,1,1\n";
  EXPECT_EQ(FromCsv(kTwoAttributeSchema, csv),
            FromCsv(kTwoAttributeSchema, csv));
}

TEST(LoadCsvTest, WriteThenReadRoundTrips) {
  const Dataset original = GenRandom({.n = 50, .k = 3, .seed = 9});
  std::ostringstream out;
  WriteCsv(original, out);
  std::istringstream in(out.str());
  EXPECT_EQ(ReadCsv(in, original.schema()), original);
}

TEST(SchemaTest, RejectsInvalidSchemas) {
  EXPECT_MDFAIR_ERROR(ParseSchema(R"({"attributes": [
      {"name": "a", "values": ["x", "y"]}, {"name": "a", "values": ["x", "y"]}]})"),
                      kInvalidSchema);
  EXPECT_MDFAIR_ERROR(ParseSchema(R"({"attributes": [
      {"name": "a", "values": ["x"]}]})"),
                      kInvalidSchema);
  EXPECT_MDFAIR_ERROR(ParseSchema(R"({"attributes": [
      {"name": "a", "values": ["x", "y"], "protected": "z"}]})"),
                      kInvalidSchema);
  EXPECT_MDFAIR_ERROR(ParseSchema(R"({"attributes": [
      {"name": "a", "values": ["x", "y"]}],
      "label": {"column": "a", "positive": "x"}})"),
                      kInvalidSchema);
  EXPECT_MDFAIR_ERROR(ParseSchema(R"({"attributes": [], "bogus": 1})"),
                      kInvalidSchema);
  EXPECT_MDFAIR_ERROR(ParseSchema("{not json"), kInvalidSchema);
}

TEST(SchemaTest, SerializeParseRoundTrip) {
  const SchemaFile file = LoadSchema(MDFAIR_DATA_DIR "/adult/schema.json");
  const SchemaFile again = ParseSchema(SerializeSchema(file));
  EXPECT_EQ(again.schema, file.schema);
  EXPECT_EQ(again.csv, file.csv);
}

Dataset RaceAgeDataset() {
  const std::string schema = R"({
    "attributes": [
      {"name": "race", "values": ["White", "Black", "Asian", "Other"]},
      {"name": "age", "numeric": true}
    ],
    "label": {"column": "y", "positive": "1", "negative": "0"}
  })";
  return FromCsv(schema,
                 "race,age,y\nWhite,20,1\nBlack,30,0\nAsian,25,1\n"
                 "Other,60,0\nWhite,45,0\nBlack,18,1\n");
}

TEST(BinarizeTest, ValueSetRuleGivesTwoGroupsAndKeepsN) {
  const Dataset raw = RaceAgeDataset();
  ValueSetRule rule{"Non-White", {"Black", "Asian", "Other"}, "White",
                    {"White"}, false};
  const Dataset b = Binarize(raw, {{"race", rule}});
  ASSERT_EQ(b.size(), raw.size());
  const ProtectedAttribute& race = b.schema().attributes[0];
  EXPECT_EQ(race.domain, (std::vector<std::string>{"Non-White", "White"}));
  EXPECT_EQ(race.protected_value, "Non-White");
  EXPECT_FALSE(race.binarization.has_value());
  EXPECT_EQ(b.code(0, 0), 1u);
  EXPECT_EQ(b.code(1, 0), 0u);
  // The input is unchanged.
  EXPECT_EQ(raw.schema().attributes[0].domain.size(), 4u);
}

TEST(BinarizeTest, RestOfDomainGoesToOther) {
  ValueSetRule rule{"White", {"White"}, "Non-White", {}, true};
  const Dataset b = Binarize(RaceAgeDataset(), {{"race", rule}});
  EXPECT_EQ(b.schema().attributes[0].protected_value, "White");
  EXPECT_EQ(b.code(0, 0), 0u);
  EXPECT_EQ(b.code(3, 0), 1u);
}

TEST(BinarizeTest, IncompleteRule) {
  ValueSetRule rule{"Non-White", {"Black"}, "White", {"White"}, false};
  EXPECT_MDFAIR_ERROR(Binarize(RaceAgeDataset(), {{"race", rule}}),
                      kIncompleteRule);
}

TEST(BinarizeTest, ThresholdOnCategoricalValues) {
  ThresholdRule rule{3.0, "low", "high", true};
  EXPECT_MDFAIR_ERROR(Binarize(RaceAgeDataset(), {{"race", rule}}),
                      kNonNumericThreshold);
}

TEST(BinarizeTest, ThresholdSplitsBelowAndAbove) {
  const Dataset b =
      Binarize(RaceAgeDataset(), {{"age", ThresholdRule{26, "Young", "Old", true}}});
  const ProtectedAttribute& age = b.schema().attributes[1];
  EXPECT_EQ(age.domain, (std::vector<std::string>{"Young", "Old"}));
  const std::vector<std::uint32_t> expected = {0, 1, 0, 1, 1, 0};
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_EQ(b.code(i, 1), expected[i]) << i;
  }
}

TEST(BinarizeTest, ThresholdSweepConservesCounts) {
  std::mt19937_64 rng(3);
  std::ostringstream csv;
  csv << "age,y\n";
  for (int i = 0; i < 300; ++i) csv << rng() % 80 + 10 << ",1\n";
  const Dataset raw = FromCsv(
      R"({"attributes": [{"name": "age", "numeric": true}],
          "label": {"column": "y", "positive": "1", "negative": "0"}})",
      csv.str());
  for (int t = 0; t < 100; ++t) {
    const double threshold = 5.0 + static_cast<double>(rng() % 900) / 10.0;
    const Dataset b = Binarize(raw, {{"age", ThresholdRule{threshold, "A", "B", true}}});
    ASSERT_EQ(b.size(), raw.size());
    std::size_t below = 0;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      below += std::stod(raw.schema().attributes[0].domain[raw.code(i, 0)]) <
               threshold;
    }
    const SubgroupIndex index = EnumerateSubgroups(b);
    std::size_t total = 0;
    for (const auto& sg : index.subgroups()) {
      total += sg.records.size();
      if (sg.key.groups[0] == 0) EXPECT_EQ(sg.records.size(), below);
    }
    EXPECT_EQ(total, raw.size());
  }
}

TEST(BinarizeTest, IdentityRuleOnBinaryAttributeIsANoOp) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nF,B,1,0\nM,W,0,1\nM,B,1,1\n");
  const Dataset b = Binarize(d, {{"g", ValueSetRule{"F", {"F"}, "M", {"M"}, false}}});
  EXPECT_EQ(b, d);
}

TEST(SubgroupsTest, LatticeOfThreeBinaryAttributesHasEightCells) {
  const Dataset d = GenRandom({.n = 64, .k = 3, .seed = 5});
  const SubgroupIndex index = EnumerateSubgroups(d);
  EXPECT_EQ(index.lattice_size(), 8.0);
  EXPECT_LE(index.subgroups().size(), 8u);
  EXPECT_EQ(index.empty_count(),
            8.0 - static_cast<double>(index.subgroups().size()));
}

TEST(SubgroupsTest, PartitionOfRandomDatasets) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Dataset d = GenRandom({.n = 64, .k = 3, .seed = seed});
    const SubgroupIndex index = EnumerateSubgroups(d);
    std::vector<int> seen(d.size(), 0);
    std::size_t total = 0;
    for (const auto& sg : index.subgroups()) {
      total += sg.records.size();
      for (const auto r : sg.records) {
        ++seen[r];
        for (std::size_t j = 0; j < d.num_attributes(); ++j) {
          EXPECT_EQ(d.code(r, j), sg.key.groups[j]);
        }
      }
    }
    EXPECT_EQ(total, d.size());
    for (const int s : seen) EXPECT_EQ(s, 1);
    EXPECT_LE(index.subgroups().size(), std::min<std::size_t>(d.size(), 8));
  }
}

TEST(SubgroupsTest, KeysAreSortedAndSingleAttributeMatchesGroups) {
  const Dataset d = GenRandom({.n = 40, .k = 1, .seed = 2});
  const SubgroupIndex index = EnumerateSubgroups(d);
  ASSERT_EQ(index.subgroups().size(), 2u);
  EXPECT_LT(index.subgroups()[0].key, index.subgroups()[1].key);
  std::size_t protected_count = 0;
  for (std::size_t i = 0; i < d.size(); ++i) protected_count += d.code(i, 0) == 0;
  EXPECT_EQ(index.subgroups()[0].records.size(), protected_count);
}

TEST(SubgroupsTest, NumericAttributeMustBeBinarized) {
  EXPECT_MDFAIR_ERROR(EnumerateSubgroups(RaceAgeDataset()), kNotBinarized);
}

TEST(SubgroupsTest, NamesAndParsing) {
  const Dataset d = GenGerrymandering();
  const SubgroupKey key{{0, 1}};
  EXPECT_EQ(SubgroupName(d.schema(), key), "White Female");
  EXPECT_EQ(ParseSubgroup(d.schema(), "White Female"), key);
  EXPECT_EQ(ParseSubgroup(d.schema(), "gender=Female,race=White"), key);
  EXPECT_MDFAIR_ERROR(ParseSubgroup(d.schema(), "White Purple"),
                      kInvalidArgument);
  EXPECT_EQ(KeyFromAssignment(d.schema(), {{"race", "Black"}, {"gender", "Male"}}),
            (SubgroupKey{{1, 0}}));
}

TEST(SubgroupsTest, LargeLatticeIsNotMaterialized) {
  const Dataset d = GenRandom({.n = 1000, .k = 40, .seed = 1});
  const SubgroupIndex index = EnumerateSubgroups(d);
  EXPECT_EQ(index.lattice_size(), std::ldexp(1.0, 40));
  EXPECT_LE(index.subgroups().size(), 1000u);
}

TEST(ScarcityTest, CountsSharesAndImbalance) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nF,B,1,0\nF,B,0,0\nF,B,0,0\nM,W,1,1\n"
                            "M,W,1,0\nM,W,0,0\nM,W,1,1\nF,W,1,1\n");
  const ScarcityReport report = BuildScarcityReport(EnumerateSubgroups(d), d);
  ASSERT_EQ(report.rows.size(), 3u);
  EXPECT_EQ(report.rows[0].name, "M W");
  EXPECT_EQ(report.rows[0].count, 4u);
  EXPECT_EQ(report.rows[0].positives, 3u);
  EXPECT_EQ(report.rows[0].cir, "1:0.3");
  EXPECT_EQ(report.rows[1].name, "F B");
  EXPECT_EQ(report.rows[1].cir, "1:2");
  EXPECT_EQ(report.rows[2].cir, "1:0");
  double shares = 0;
  for (const auto& row : report.rows) shares += row.share;
  EXPECT_NEAR(shares, 1.0, 1e-12);
}

TEST(ScarcityTest, SortedByCountThenKey) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nM,W,1,0\nF,B,1,0\nM,B,0,0\nF,W,0,0\n");
  const ScarcityReport report = BuildScarcityReport(EnumerateSubgroups(d), d);
  std::vector<std::string> names;
  for (const auto& row : report.rows) names.push_back(row.name);
  EXPECT_EQ(names, (std::vector<std::string>{"F B", "F W", "M B", "M W"}));
}

TEST(ScarcityTest, CirFormatting) {
  EXPECT_EQ(FormatCir(9, 546), "1:61");
  EXPECT_EQ(FormatCir(8644, 14228), "1:1.6");
  EXPECT_EQ(FormatCir(2, 4), "1:2");
  EXPECT_EQ(FormatCir(5, 0), "1:0");
  EXPECT_EQ(FormatCir(0, 5), "0:1");
}

TEST(ScarcityTest, AllPositiveLabelsGiveSentinel) {
  const Dataset d = FromCsv(kTwoAttributeSchema,
                            "g,r,y,yhat\nF,B,1,0\nM,W,1,1\n");
  for (const auto& row : BuildScarcityReport(EnumerateSubgroups(d), d).rows) {
    EXPECT_EQ(row.cir, "1:0");
    EXPECT_FALSE(row.negatives_per_positive.has_value() &&
                 *row.negatives_per_positive != 0.0);
  }
}

TEST(ScarcityTest, NeedsLabels) {
  const Dataset d = GenGerrymandering();
  EXPECT_MDFAIR_ERROR(BuildScarcityReport(EnumerateSubgroups(d), d),
                      kMissingLabels);
}

TEST(CalibrationTest, PartitionCandidatesCoverEveryProperSubset) {
  const auto rules = PartitionCandidates({"a", "b", "c"}, "P", "O");
  EXPECT_EQ(rules.size(), 6u);
  std::set<std::vector<std::string>> seen;
  for (const auto& r : rules) {
    seen.insert(std::get<ValueSetRule>(r).protected_values);
  }
  EXPECT_EQ(seen.size(), 6u);
}

TEST(CalibrationTest, FindsRuleThatReproducesTargets) {
  const Dataset raw = RaceAgeDataset();
  const std::vector<AttributeCandidates> candidates = {
      {"race", PartitionCandidates(raw.schema().attributes[0].domain,
                                   "Minority", "Majority")},
      {"age", ThresholdCandidates(15, 70, 1, "Young", "Old", true)},
  };
  // Minority = {Black}, Young = age < 26: Black Young has 1 record (age 18,
  // positive), Majority Old has 2 records (Other 60, White 45).
  const std::vector<CalibrationTarget> targets = {
      {{{"race", "Minority"}, {"age", "Young"}}, 1, 1},
      {{{"race", "Majority"}, {"age", "Old"}}, 2, std::nullopt},
  };
  const CalibrationResult result =
      CalibrateBinarization(raw, candidates, targets);
  EXPECT_TRUE(result.exact());
  EXPECT_EQ(result.matches[0].count, 1u);
  EXPECT_EQ(result.matches[1].count, 2u);
  const Dataset b = Binarize(raw, result.rules);
  const SubgroupIndex index = EnumerateSubgroups(b);
  const auto* sg = index.Find(KeyFromAssignment(
      b.schema(), {{"race", "Minority"}, {"age", "Young"}}));
  ASSERT_NE(sg, nullptr);
  EXPECT_EQ(sg->records.size(), 1u);
}

}  // namespace
}  // namespace mdfair
