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

#ifndef MDFAIR_SCHEMA_CONFIG_H_
#define MDFAIR_SCHEMA_CONFIG_H_

#include <filesystem>
#include <string>
#include <vector>

#include "mdfair/calibration.h"
#include "mdfair/dataset.h"
#include "mdfair/pipeline.h"

namespace mdfair {

// JSON schema files. A dataset schema looks like
//
//   {
//     "csv": {"delimiter": ",", "missing": "drop", "missing_tokens": ["?"],
//             "missing_scope": "schema"},
//     "attributes": [
//       {"name": "sex", "values": ["Female", "Male"], "protected": "Female"},
//       {"name": "age", "numeric": true,
//        "binarize": {"type": "threshold", "threshold": 26, "below": "Young",
//                     "above": "Old", "protected": "below"}},
//       {"name": "race", "values": ["White", "Black", "Other"],
//        "binarize": {"type": "values",
//                     "protected": {"label": "Non-White", "values": ["Black"]},
//                     "other": {"label": "White", "values": ["White"]}}}
//     ],
//     "label": {"column": "income", "positive": ">50K", "negative": "<=50K"},
//     "prediction": {"column": "predicted", "positive": "1"}
//   }
//
// "missing_scope" is "schema" (only schema columns are checked for missing
// tokens) or "row" (any column). An "other" side may set "rest": true instead
// of listing values. Pipeline
// schemas replace "label"/"prediction" with
// "stages": [{"name": "cv", "column": "cv", "truth": "cv_truth"}], where
// "column" defaults to the name and "truth" is optional.
struct SchemaFile {
  AttributeSchema schema;
  CsvOptions csv;
};

struct PipelineSchemaFile {
  PipelineSchema schema;
  CsvOptions csv;
};

SchemaFile ParseSchema(const std::string& json_text);
SchemaFile LoadSchema(const std::filesystem::path& path);
std::string SerializeSchema(const SchemaFile& file);

PipelineSchemaFile ParsePipelineSchema(const std::string& json_text);
PipelineSchemaFile LoadPipelineSchema(const std::filesystem::path& path);
std::string SerializePipelineSchema(const PipelineSchemaFile& file);

// Calibration sweep definition:
//
//   {
//     "attributes": [
//       {"name": "race", "partition": {"protected": "Non-White",
//                                      "other": "White"}},
//       {"name": "age", "threshold": {"from": 17, "to": 90, "step": 1,
//                                     "below": "Young", "above": "Old",
//                                     "protected": "below"}}
//     ],
//     "targets": [
//       {"subgroup": {"race": "Non-White", "age": "Young", "sex": "Female"},
//        "count": 555, "positives": 9}
//     ]
//   }
//
// Partition candidates range over the attribute's declared domain in
// `schema`.
struct CalibrationSpec {
  std::vector<AttributeCandidates> candidates;
  std::vector<CalibrationTarget> targets;
};

CalibrationSpec ParseCalibration(const std::string& json_text,
                                 const AttributeSchema& schema);
CalibrationSpec LoadCalibration(const std::filesystem::path& path,
                                const AttributeSchema& schema);

std::string ReadTextFile(const std::filesystem::path& path);

}  // namespace mdfair

#endif  // MDFAIR_SCHEMA_CONFIG_H_
