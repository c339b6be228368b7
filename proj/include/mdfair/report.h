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

#ifndef MDFAIR_REPORT_H_
#define MDFAIR_REPORT_H_

#include <string>
#include <string_view>

#include "json.hpp"
#include "mdfair/calibration.h"
#include "mdfair/cumulative.h"
#include "mdfair/intersectional.h"
#include "mdfair/metrics.h"
#include "mdfair/pipeline.h"
#include "mdfair/sequential.h"
#include "mdfair/subgroups.h"

namespace mdfair {

using Json = nlohmann::ordered_json;

inline constexpr std::string_view kReportVersion = "1.0";

// Finite numbers as JSON numbers, +/-infinity as the strings "inf"/"-inf",
// NaN as null.
Json NumberJson(double value);

// Deterministic rendering: insertion key order, doubles with 12 significant
// digits, two-space indentation and a trailing newline.
std::string DumpJson(const Json& value);

Json ToJson(const GroupRate& rate);
Json ToJson(const MetricResult& result);
Json ToJson(const CumulativeResult& result);
Json ToJson(const SubgroupMetricSet& set);
Json ToJson(const SequentialResult& result);
Json ToJson(const SequentialMultiResult& result);
Json ToJson(const ScarcityReport& report);
Json ToJson(const PipelineValidation& validation);
Json ToJson(const CalibrationResult& result);
Json ToJson(const AttributeSchema& schema, const SubgroupKey& key);

// Text and CSV are projections of the JSON report. CSV has one row per
// metric result (or per subgroup for a scarcity report).
std::string RenderText(const Json& report);
std::string RenderCsv(const Json& report);

enum class ReportFormat { kJson, kText, kCsv };
ReportFormat ParseReportFormat(std::string_view text);
std::string Render(const Json& report, ReportFormat format);

}  // namespace mdfair

#endif  // MDFAIR_REPORT_H_
