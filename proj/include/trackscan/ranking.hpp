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

// Tracker rankings and the Kendall tau distance between them.

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "trackscan/error.hpp"
#include "trackscan/prevalence.hpp"

namespace trackscan {

/// Distinct entity ids, most prevalent first.
class Ranking {
 public:
  Ranking() = default;
  explicit Ranking(std::vector<std::string> items) : items_(std::move(items)) {
    std::set<std::string_view> seen;
    for (const auto& item : items_) {
      if (!seen.insert(item).second) throw Error(Errc::InvalidArgument, "ranking lists '" + item + "' twice");
    }
  }
  Ranking(std::initializer_list<std::string> items) : Ranking(std::vector<std::string>(items)) {}

  const std::vector<std::string>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }

  Ranking reversed() const { return Ranking(std::vector<std::string>(items_.rbegin(), items_.rend())); }

  friend bool operator==(const Ranking&, const Ranking&) = default;

 private:
  std::vector<std::string> items_;
};

struct RankDistance {
  std::uint64_t raw_k = 0;  // discordant pairs
  double normalized_k = 0;  // raw_k / max(1, u(u-1)/2)
  std::size_t universe_size = 0;

  bool degenerate() const { return universe_size < 2; }
};

inline Ranking ranking_from_prevalence(const PrevalenceTable& table, std::optional<std::size_t> top_k = std::nullopt) {
  std::vector<std::string> items;
  const std::size_t n = top_k ? std::min(*top_k, table.rows.size()) : table.rows.size();
  items.reserve(n);
  for (std::size_t i = 0; i < n; ++i) items.push_back(table.rows[i].entity);
  return Ranking(std::move(items));
}

namespace detail {

// Merge sort that counts inversions.
inline std::uint64_t count_inversions(std::vector<std::size_t>& v, std::vector<std::size_t>& scratch, std::size_t lo,
                                      std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::uint64_t inv = count_inversions(v, scratch, lo, mid) + count_inversions(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      inv += mid - i;
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo), scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return inv;
}

}  // namespace detail

/// Kendall tau distance over the items both rankings contain: the number of
/// unordered pairs {i, j} that the two rankings put in opposite order.
/// Fewer than two common items give distance 0 (see degenerate()).
inline RankDistance kendall_distance(const Ranking& r1, const Ranking& r2) {
  std::unordered_map<std::string_view, std::size_t> pos2;
  for (std::size_t i = 0; i < r2.size(); ++i) pos2.emplace(r2.items()[i], i);
  std::vector<std::size_t> order;  // r2 positions of common items, in r1 order
  for (const auto& item : r1.items()) {
    if (auto it = pos2.find(item); it != pos2.end()) order.push_back(it->second);
  }
  RankDistance d;
  d.universe_size = order.size();
  std::vector<std::size_t> scratch(order.size());
  d.raw_k = detail::count_inversions(order, scratch, 0, order.size());
  const std::uint64_t u = d.universe_size;
  const std::uint64_t pairs = u < 2 ? 0 : u * (u - 1) / 2;
  d.normalized_k = static_cast<double>(d.raw_k) / static_cast<double>(std::max<std::uint64_t>(1, pairs));
  return d;
}

struct GenreDistanceRow {
  std::string genre;
  RankDistance vs_reference;
  double sum_k = 0;  // normalized distances to every other genre
};

struct GenreDistances {
  std::vector<GenreDistanceRow> rows;                       // genre name order
  std::map<std::string, std::map<std::string, double>> matrix;  // normalized K, symmetric
};

/// Distance of each genre's ranking from the reference ranking, plus the sum
/// of its pairwise distances to every other genre.
inline GenreDistances pairwise_genre_distances(const std::map<std::string, Ranking>& rankings,
                                               const Ranking& reference) {
  if (rankings.size() < 2) throw Error(Errc::InvalidArgument, "pairwise genre distances need at least two genres");
  GenreDistances out;
  for (const auto& [a, ra] : rankings) {
    for (const auto& [b, rb] : rankings) {
      if (a == b) {
        out.matrix[a][b] = 0.0;
      } else if (a < b) {
        const double k = kendall_distance(ra, rb).normalized_k;
        out.matrix[a][b] = k;
        out.matrix[b][a] = k;
      }
    }
  }
  for (const auto& [genre, ranking] : rankings) {
    GenreDistanceRow row{genre, kendall_distance(ranking, reference), 0.0};
    for (const auto& [other, k] : out.matrix[genre]) {
      if (other != genre) row.sum_k += k;
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace trackscan
