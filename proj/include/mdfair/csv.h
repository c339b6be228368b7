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

#ifndef MDFAIR_CSV_H_
#define MDFAIR_CSV_H_

#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdfair {

// Splits one CSV line. Double-quoted fields may contain the delimiter and
// escaped quotes (""). Fields are trimmed of surrounding blanks. Returns
// nullopt for an unterminated quote.
std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line,
                                                     char delimiter);

std::string_view Trim(std::string_view s);

// Quotes a field only when it contains the delimiter, a quote, or leading or
// trailing blanks.
std::string EscapeCsvField(std::string_view field, char delimiter);

// Line-oriented reader that strips CR and a leading UTF-8 BOM and skips
// blank lines. line_number() is 1-based over physical lines.
class CsvReader {
 public:
  CsvReader(std::istream& in, char delimiter)
      : in_(in), delimiter_(delimiter) {}

  // False at end of input. Throws UnparsableRow on a malformed line.
  bool Next(std::vector<std::string>& fields);

  std::size_t line_number() const { return line_number_; }

 private:
  std::istream& in_;
  char delimiter_;
  std::size_t line_number_ = 0;
  std::string line_;
};

}  // namespace mdfair

#endif  // MDFAIR_CSV_H_
