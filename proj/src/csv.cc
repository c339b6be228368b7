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

#include "mdfair/csv.h"

#include <string>

#include "mdfair/error.h"

namespace mdfair {

std::string_view Trim(std::string_view s) {
  const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
  while (!s.empty() && blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && blank(s.back())) s.remove_suffix(1);
  return s;
}

std::optional<std::vector<std::string>> SplitCsvLine(std::string_view line,
                                                     char delimiter) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    // Skip leading blanks so that `a, "b"` is read as a quoted field.
    std::size_t start = pos;
    while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) {
      ++start;
    }
    if (start < line.size() && line[start] == '"') {
      std::string value;
      std::size_t i = start + 1;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            value.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        value.push_back(line[i++]);
      }
      if (!closed) return std::nullopt;
      // Only blanks may follow the closing quote.
      while (i < line.size() && line[i] != delimiter) {
        if (line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
          return std::nullopt;
        }
        ++i;
      }
      fields.push_back(std::move(value));
      if (i >= line.size()) break;
      pos = i + 1;
    } else {
      const std::size_t end = line.find(delimiter, pos);
      const std::string_view raw =
          line.substr(pos, end == std::string_view::npos ? end : end - pos);
      fields.emplace_back(Trim(raw));
      if (end == std::string_view::npos) break;
      pos = end + 1;
    }
  }
  return fields;
}

std::string EscapeCsvField(std::string_view field, char delimiter) {
  const bool needs_quotes =
      field.find(delimiter) != std::string_view::npos ||
      field.find('"') != std::string_view::npos ||
      (!field.empty() && (field.front() == ' ' || field.back() == ' '));
  if (!needs_quotes) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool CsvReader::Next(std::vector<std::string>& fields) {
  while (std::getline(in_, line_)) {
    ++line_number_;
    std::string_view view(line_);
    if (line_number_ == 1 && view.substr(0, 3) == "\xEF\xBB\xBF") {
      view.remove_prefix(3);
    }
    if (Trim(view).empty()) continue;
    auto split = SplitCsvLine(view, delimiter_);
    if (!split) {
      throw Error(ErrorCode::kUnparsableRow,
                  "line " + std::to_string(line_number_) +
                      ": unterminated or malformed quoted field");
    }
    fields = std::move(*split);
    return true;
  }
  return false;
}

}  // namespace mdfair
