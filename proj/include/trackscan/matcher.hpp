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

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackscan/domain.hpp"
#include "trackscan/host_scan.hpp"
#include "trackscan/tracker_kb.hpp"

namespace trackscan {

/// Strict adds a left label boundary to the right-boundary rule, so that
/// "notgoogle.com" no longer matches "google.com". PaperCompat applies the
/// right-boundary rule alone.
enum class MatchMode { Strict, PaperCompat };

namespace detail {

// A match may not continue into a further label or a longer alphabetic TLD.
constexpr bool right_boundary_ok(std::string_view text, std::size_t end) {
  return end == text.size() || !(text[end] == '.' || is_alpha(text[end]));
}

constexpr bool left_boundary_ok(std::string_view text, std::size_t start) {
  return start == 0 || text[start - 1] == '.';
}

}  // namespace detail

/// True iff `tracker_domain` occurs in `candidate_text` at a position that
/// is not followed by '.' or a letter ("google.com" matches
/// "google.com/somepath" but neither "google.com.domain" nor
/// "google.coming"). Strict mode also requires the occurrence to start the
/// text or follow a '.'.
inline bool match_candidate(std::string_view tracker_domain, std::string_view candidate_text,
                            MatchMode mode = MatchMode::Strict) {
  if (tracker_domain.empty()) return false;
  const std::string text = detail::lowercase(candidate_text);
  const std::string needle = detail::lowercase(tracker_domain);
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    if (!detail::right_boundary_ok(text, pos + needle.size())) continue;
    if (mode == MatchMode::Strict && !detail::left_boundary_ok(text, pos)) continue;
    return true;
  }
  return false;
}

inline bool match_candidate(const NormalizedDomain& tracker_domain, std::string_view candidate_text,
                            MatchMode mode = MatchMode::Strict) {
  return match_candidate(tracker_domain.registrable, candidate_text, mode);
}

struct AppProfile {
  std::string app_id;
  std::set<std::string> tracker_domains;
  std::set<std::string> companies;  // immediate domain owners
  std::set<std::string> root_parents;
  std::set<std::string> countries;             // owners and all their ancestors
  std::set<std::string> subsidiary_countries;  // immediate owners only
  std::vector<std::string> permissions;
  std::size_t candidate_count = 0;     // every extracted candidate
  std::size_t tracker_host_refs = 0;   // candidates that matched a tracker domain
  std::size_t normalize_failures = 0;  // candidates with no registrable domain
};

/// Every KB domain that `candidate` matches under `mode`.
inline std::set<std::string> matching_tracker_domains(std::string_view candidate, const std::string& normalized,
                                                      const TrackerKB& kb, MatchMode mode) {
  std::set<std::string> hits;
  if (kb.domains.contains(normalized)) hits.insert(normalized);
  if (mode == MatchMode::PaperCompat) {
    const std::string text = detail::lowercase(candidate);
    for (std::size_t end = 1; end <= text.size(); ++end) {
      if (!detail::right_boundary_ok(text, end) || !detail::is_alpha(text[end - 1])) continue;
      for (std::size_t start = 0; start + 1 < end; ++start) {
        std::string_view sub(text.data() + start, end - start);
        if (kb.domains.find(sub) != kb.domains.end()) hits.emplace(sub);
      }
    }
  }
  return hits;
}

/// Attributes an app's host candidates to tracker domains, companies, root
/// parents and countries.
inline AppProfile profile_app(std::string app_id, std::span<const HostCandidate> candidates, const TrackerKB& kb,
                              const SuffixList& suffixes, MatchMode mode = MatchMode::Strict) {
  AppProfile p;
  p.app_id = std::move(app_id);
  p.candidate_count = candidates.size();
  for (const auto& cand : candidates) {
    std::string normalized;
    try {
      normalized = normalize_host(cand.text, suffixes).registrable;
    } catch (const Error&) {
      ++p.normalize_failures;
      continue;
    }
    auto hits = matching_tracker_domains(cand.text, normalized, kb, mode);
    if (!hits.empty()) ++p.tracker_host_refs;
    p.tracker_domains.merge(hits);
  }
  for (const auto& domain : p.tracker_domains) p.companies.insert(kb.domains.find(domain)->second);
  for (const auto& company : p.companies) {
    const auto chain = ancestry(kb, company);
    p.root_parents.insert(chain.back());
    p.subsidiary_countries.insert(company_country(kb, company));
    for (const auto& ancestor : chain) p.countries.insert(company_country(kb, ancestor));
  }
  return p;
}

inline AppProfile profile_app(std::string app_id, std::span<const HostCandidate> candidates, const TrackerKB& kb,
                              MatchMode mode = MatchMode::Strict) {
  return profile_app(std::move(app_id), candidates, kb, kb.suffixes, mode);
}

}  // namespace trackscan
