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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "trackscan/error.hpp"

namespace trackscan {

/// 100 * part / whole, or 0 for an empty whole.
inline double percent(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

/// Rounds to two decimals, the precision used in every report.
inline double round2(double v) { return std::round(v * 100.0) / 100.0; }

struct DescriptiveStats {
  std::size_t n = 0;
  double median = 0;
  double q1 = 0;
  double q3 = 0;
  std::int64_t threshold = 0;
  std::size_t n_above_threshold = 0;  // strictly greater than threshold
  double pct_above_threshold = 0;
  std::size_t n_zero = 0;
  double pct_zero = 0;
};

/// Quartiles use the nearest-rank-lower rule: the p-quantile is the element
/// at 1-based position ceil(p * n) of the sorted values.
inline DescriptiveStats descriptive_stats(std::span<const std::int64_t> values, std::int64_t threshold) {
  if (values.empty()) throw Error(Errc::EmptyInput, "descriptive_stats needs at least one value");
  std::vector<std::int64_t> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  auto at_rank = [&](std::size_t rank) { return static_cast<double>(sorted[std::max<std::size_t>(rank, 1) - 1]); };

  DescriptiveStats s;
  s.n = n;
  s.q1 = at_rank((n + 3) / 4);
  s.median = at_rank((n + 1) / 2);
  s.q3 = at_rank((3 * n + 3) / 4);
  s.threshold = threshold;
  s.n_above_threshold = static_cast<std::size_t>(sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), threshold));
  s.n_zero = static_cast<std::size_t>(std::count(sorted.begin(), sorted.end(), 0));
  s.pct_above_threshold = percent(s.n_above_threshold, n);
  s.pct_zero = percent(s.n_zero, n);
  return s;
}

inline DescriptiveStats descriptive_stats(std::initializer_list<std::int64_t> values, std::int64_t threshold) {
  return descriptive_stats(std::span<const std::int64_t>(values.begin(), values.size()), threshold);
}

/// Gini coefficient, sum_i sum_j |x_i - x_j| / (2 n^2 mean), evaluated in
/// O(n log n) as sum_i (2i - n - 1) x_(i) / (n * sum x) over sorted x.
inline double gini(std::span<const double> values) {
  if (values.empty()) throw Error(Errc::EmptyInput, "gini needs at least one value");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() < 0) throw Error(Errc::InvalidArgument, "gini is defined for non-negative values");
  const auto n = static_cast<long double>(sorted.size());
  long double total = 0;
  long double weighted = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    total += sorted[i];
    weighted += (2.0L * static_cast<long double>(i + 1) - n - 1.0L) * sorted[i];
  }
  if (total <= 0) throw Error(Errc::ZeroMean, "gini is undefined when the mean is zero");
  return static_cast<double>(weighted / (n * total));
}

inline double gini(std::span<const std::int64_t> values) {
  std::vector<double> v(values.begin(), values.end());
  return gini(std::span<const double>(v));
}

inline double gini(std::initializer_list<double> values) {
  return gini(std::span<const double>(values.begin(), values.size()));
}

struct HistogramBin {
  std::int64_t low = 0;   // inclusive
  std::int64_t high = 0;  // exclusive
  std::size_t count = 0;

  friend bool operator==(const HistogramBin&, const HistogramBin&) = default;
};

/// Fixed-width bins [k*w, (k+1)*w) starting at 0. Empty bins are omitted.
inline std::vector<HistogramBin> emit_histogram(std::span<const std::int64_t> values, std::int64_t bin_width) {
  if (values.empty()) throw Error(Errc::EmptyInput, "histogram needs at least one value");
  if (bin_width < 1) throw Error(Errc::InvalidArgument, "bin width must be >= 1");
  std::map<std::int64_t, std::size_t> counts;
  for (auto v : values) {
    if (v < 0) throw Error(Errc::InvalidArgument, "histogram values must be non-negative");
    ++counts[v / bin_width];
  }
  std::vector<HistogramBin> out;
  out.reserve(counts.size());
  for (const auto& [bin, count] : counts) out.push_back({bin * bin_width, (bin + 1) * bin_width, count});
  return out;
}

}  // namespace trackscan
