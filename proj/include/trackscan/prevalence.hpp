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
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trackscan/matcher.hpp"
#include "trackscan/stats.hpp"
#include "trackscan/tracker_kb.hpp"

namespace trackscan {

enum class PrevalenceLevel {
  Subsidiary,         // immediate domain owner
  RootParent,         // top of the ownership chain
  Country,            // countries of owners and their ancestors
  SubsidiaryCountry,  // countries of immediate owners only
};

constexpr std::string_view level_name(PrevalenceLevel level) {
  switch (level) {
    case PrevalenceLevel::Subsidiary: return "subsidiary";
    case PrevalenceLevel::RootParent: return "root_parent";
    case PrevalenceLevel::Country: return "country";
    case PrevalenceLevel::SubsidiaryCountry: return "country_subsidiary";
  }
  return "unknown";
}

struct PrevalenceRow {
  std::string entity;
  std::size_t apps_present = 0;
  double pct_apps = 0;

  friend bool operator==(const PrevalenceRow&, const PrevalenceRow&) = default;
};

struct PrevalenceTable {
  PrevalenceLevel level = PrevalenceLevel::Subsidiary;
  std::size_t corpus_size = 0;
  std::vector<PrevalenceRow> rows;  // pct descending, then entity ascending

  const PrevalenceRow* find(std::string_view entity) const {
    for (const auto& r : rows) {
      if (r.entity == entity) return &r;
    }
    return nullptr;
  }
};

inline const std::set<std::string>& entities_at(const AppProfile& p, PrevalenceLevel level) {
  switch (level) {
    case PrevalenceLevel::Subsidiary: return p.companies;
    case PrevalenceLevel::RootParent: return p.root_parents;
    case PrevalenceLevel::Country: return p.countries;
    case PrevalenceLevel::SubsidiaryCountry: return p.subsidiary_countries;
  }
  return p.companies;
}

/// Share of apps with at least one tracker attributed to each entity. An app
/// counts once per entity however many of its domains lead there.
inline PrevalenceTable prevalence_table(std::span<const AppProfile> profiles, PrevalenceLevel level) {
  std::map<std::string, std::size_t> counts;
  for (const auto& p : profiles) {
    for (const auto& e : entities_at(p, level)) ++counts[e];
  }
  PrevalenceTable t;
  t.level = level;
  t.corpus_size = profiles.size();
  for (const auto& [entity, n] : counts) t.rows.push_back({entity, n, percent(n, profiles.size())});
  // Same denominator throughout, so ordering by count orders by percentage.
  std::stable_sort(t.rows.begin(), t.rows.end(),
                   [](const PrevalenceRow& a, const PrevalenceRow& b) { return a.apps_present > b.apps_present; });
  return t;
}

/// One line of the root-parent / subsidiary table: a root with each of the
/// subsidiaries found under it.
struct OwnershipRow {
  std::string root_parent;
  std::size_t root_apps = 0;
  double root_pct = 0;
  std::string subsidiary;
  std::size_t subsidiary_apps = 0;
  double subsidiary_pct = 0;
  std::string country;
};

inline std::vector<OwnershipRow> ownership_rows(const PrevalenceTable& subsidiaries, const PrevalenceTable& roots,
                                                const TrackerKB& kb) {
  std::map<std::string, std::vector<const PrevalenceRow*>> by_root;
  for (const auto& row : subsidiaries.rows) by_root[root_parent(kb, row.entity)].push_back(&row);
  std::vector<OwnershipRow> out;
  for (const auto& root : roots.rows) {
    for (const auto* sub : by_root[root.entity]) {
      out.push_back({root.entity, root.apps_present, root.pct_apps, sub->entity, sub->apps_present, sub->pct_apps,
                     company_country(kb, sub->entity)});
    }
  }
  return out;
}

}  // namespace trackscan
