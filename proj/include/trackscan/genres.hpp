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

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "trackscan/byte_source.hpp"
#include "trackscan/csv.hpp"
#include "trackscan/error.hpp"

namespace trackscan {

inline constexpr std::string_view kFamilySuperGenre = "Family";
inline constexpr std::string_view kOtherSuperGenre = "Other";

struct SuperGenre {
  std::string name;
  std::optional<std::string> warning;  // set when the genre was not mapped
};

/// Store genre -> super genre, read from a `genre,super_genre` CSV.
class GenreMap {
 public:
  GenreMap() = default;
  explicit GenreMap(std::map<std::string, std::string, std::less<>> mapping) : mapping_(std::move(mapping)) {}

  static GenreMap parse(std::string_view text, const std::string& file_name = {}) {
    const auto doc = csv::parse(text, file_name);
    std::map<std::string, std::string, std::less<>> mapping;
    for (std::size_t r = 0; r < doc.rows.size(); ++r) {
      const auto& row = doc.rows[r];
      if (r == 0) {
        csv::expect_header(row, {"genre", "super_genre"}, file_name);
        continue;
      }
      const auto where = file_line(file_name, row.line);
      if (row.fields.size() != 2 || row.fields[0].empty() || row.fields[1].empty()) {
        throw Error(Errc::ParseError, "expected 'genre,super_genre'", where);
      }
      if (!mapping.emplace(row.fields[0], row.fields[1]).second) {
        throw Error(Errc::ParseError, "genre '" + row.fields[0] + "' mapped twice", where);
      }
    }
    return GenreMap(std::move(mapping));
  }

  static GenreMap load(const std::filesystem::path& path) { return parse(read_file_text(path), path.string()); }

  std::size_t size() const { return mapping_.size(); }

  /// Family apps always land in "Family"; unmapped genres land in "Other".
  SuperGenre lookup(std::string_view genre, bool family = false) const {
    if (family) return {std::string(kFamilySuperGenre), std::nullopt};
    if (auto it = mapping_.find(genre); it != mapping_.end()) return {it->second, std::nullopt};
    return {std::string(kOtherSuperGenre), "genre '" + std::string(genre) + "' has no super genre; using Other"};
  }

 private:
  std::map<std::string, std::string, std::less<>> mapping_;
};

inline SuperGenre super_genre_map(std::string_view genre, const GenreMap& mapping, bool family = false) {
  return mapping.lookup(genre, family);
}

}  // namespace trackscan
