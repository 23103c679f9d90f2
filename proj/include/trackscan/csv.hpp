/*
 * Copyright (C) 2026 The trackscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Minimal RFC 4180 CSV reader/writer. Lines whose first character is '#'
// are comments and are returned separately.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "trackscan/error.hpp"

namespace trackscan::csv {

struct Row {
  std::size_t line = 0;  // 1-based line where the record starts
  std::vector<std::string> fields;
};

struct Document {
  std::vector<std::string> comments;  // text after '#', one per comment line
  std::vector<Row> rows;              // header included, blank lines dropped
};

inline Document parse(std::string_view text, const std::string& file_name = {}) {
  Document doc;
  std::size_t line = 1;
  std::size_t i = 0;
  const std::size_t n = text.size();
  if (n >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") i = 3;  // UTF-8 BOM
  while (i < n) {
    if (text[i] == '#') {
      auto end = text.find('\n', i);
      if (end == std::string_view::npos) end = n;
      std::string_view c = text.substr(i + 1, end - i - 1);
      if (!c.empty() && c.back() == '\r') c.remove_suffix(1);
      doc.comments.emplace_back(c);
      i = end + 1;
      ++line;
      continue;
    }
    Row row;
    row.line = line;
    std::string field;
    bool any = false;
    while (true) {
      if (i < n && text[i] == '"') {
        ++i;
        while (true) {
          if (i >= n) throw Error(Errc::ParseError, "unterminated quoted field", file_line(file_name, row.line));
          if (text[i] == '"') {
            if (i + 1 < n && text[i + 1] == '"') {
              field += '"';
              i += 2;
              continue;
            }
            ++i;
            break;
          }
          if (text[i] == '\n') ++line;
          field += text[i++];
        }
        any = true;
        if (i < n && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
          throw Error(Errc::ParseError, "unexpected character after quoted field", file_line(file_name, line));
        }
      }
      while (i < n && text[i] != ',' && text[i] != '\n') {
        if (text[i] != '\r') field += text[i];
        ++i;
        any = true;
      }
      row.fields.push_back(std::move(field));
      field.clear();
      if (i < n && text[i] == ',') {
        ++i;
        any = true;
        continue;
      }
      break;
    }
    ++i;  // newline
    ++line;
    if (any) doc.rows.push_back(std::move(row));
  }
  return doc;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos && !field.starts_with('#')) {
    return std::string(field);
  }
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string line(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    out += quote(fields[i]);
  }
  out += '\n';
  return out;
}

/// Checks that `row` is the expected header; throws ParseError otherwise.
inline void expect_header(const Row& row, const std::vector<std::string>& expected, const std::string& file_name) {
  if (row.fields != expected) {
    std::string want;
    for (const auto& f : expected) want += (want.empty() ? "" : ",") + f;
    throw Error(Errc::ParseError, "expected header '" + want + "'", file_line(file_name, row.line));
  }
}

}  // namespace trackscan::csv
