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

// Tracker knowledge base: tracker domain -> owning company, company ->
// parent company, company -> country.
//
// On disk a KB is a directory holding
//
//   domains.csv        domain,company_id
//   companies.csv      company_id,display_name,parent_id,country
//   public_suffix.txt  optional; the built-in snapshot is used when absent
//
// An empty parent_id marks a root parent. A comment line such as
// "# version: 2018.1" in either CSV sets the KB version (domains.csv wins).

#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "trackscan/csv.hpp"
#include "trackscan/domain.hpp"
#include "trackscan/error.hpp"

namespace trackscan {

struct Company {
  std::string id;
  std::string display_name;
  std::optional<std::string> parent_id;
  std::string country;  // ISO 3166-1 alpha-2

  friend bool operator==(const Company&, const Company&) = default;
};

struct TrackerKB {
  std::map<std::string, Company, std::less<>> companies;
  std::map<std::string, std::string, std::less<>> domains;  // registrable domain -> company id
  std::string version;
  SuffixList suffixes = SuffixList::builtin();

  bool empty() const { return companies.empty() && domains.empty(); }
  friend bool operator==(const TrackerKB&, const TrackerKB&) = default;
};

struct Violation {
  Errc kind;
  std::string subject;  // offending company id or domain
  std::string message;
  std::string where;  // file:line when known
};

namespace detail {

inline bool valid_company_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
           return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
         });
}

inline bool valid_country(std::string_view cc) {
  return cc.size() == 2 && cc[0] >= 'A' && cc[0] <= 'Z' && cc[1] >= 'A' && cc[1] <= 'Z';
}

inline bool is_normalized(const std::string& domain, const SuffixList& suffixes) {
  try {
    return normalize_host(domain, suffixes).registrable == domain;
  } catch (const Error&) {
    return false;
  }
}

/// Ownership cycles as sorted member lists, each reported once.
inline std::vector<std::vector<std::string>> find_cycles(const std::map<std::string, Company, std::less<>>& companies) {
  std::vector<std::vector<std::string>> cycles;
  std::map<std::string, int> state;  // 0 unseen, 1 on current path, 2 done
  for (const auto& [start, _] : companies) {
    if (state[start] != 0) continue;
    std::vector<std::string> path;
    std::string cur = start;
    while (true) {
      int& s = state[cur];
      if (s == 1) {
        auto it = std::find(path.begin(), path.end(), cur);
        std::vector<std::string> cycle(it, path.end());
        std::sort(cycle.begin(), cycle.end());
        cycles.push_back(std::move(cycle));
        break;
      }
      if (s == 2) break;
      s = 1;
      path.push_back(cur);
      auto c = companies.find(cur);
      if (c == companies.end() || !c->second.parent_id) break;
      if (!companies.contains(*c->second.parent_id)) break;
      cur = *c->second.parent_id;
    }
    for (const auto& p : path) state[p] = 2;
  }
  return cycles;
}

inline std::string parse_version(const std::vector<std::string>& comments) {
  for (const auto& raw : comments) {
    std::string_view c = raw;
    while (!c.empty() && c.front() == ' ') c.remove_prefix(1);
    if (!c.starts_with("version")) continue;
    c.remove_prefix(7);
    while (!c.empty() && (c.front() == ' ' || c.front() == ':' || c.front() == '=')) c.remove_prefix(1);
    while (!c.empty() && c.back() == ' ') c.remove_suffix(1);
    return std::string(c);
  }
  return {};
}

}  // namespace detail

/// Every invariant violation in `kb`; empty iff the KB is valid.
inline std::vector<Violation> validate_kb(const TrackerKB& kb) {
  std::vector<Violation> out;
  for (const auto& [id, c] : kb.companies) {
    if (c.id != id) out.push_back({Errc::ParseError, id, "company keyed as '" + id + "' has id '" + c.id + "'", {}});
    if (!detail::valid_company_id(id)) out.push_back({Errc::ParseError, id, "company id is not a lowercase slug", {}});
    if (!detail::valid_country(c.country)) {
      out.push_back({Errc::ParseError, id, "country '" + c.country + "' is not an ISO 3166-1 alpha-2 code", {}});
    }
    if (c.parent_id && !kb.companies.contains(*c.parent_id)) {
      out.push_back({Errc::UnknownCompanyReference, id, "parent_id '" + *c.parent_id + "' does not exist", {}});
    }
  }
  for (const auto& cycle : detail::find_cycles(kb.companies)) {
    std::string members;
    for (const auto& m : cycle) members += (members.empty() ? "" : " -> ") + m;
    out.push_back({Errc::OwnershipCycle, cycle.front(), "ownership cycle among " + members, {}});
  }
  for (const auto& [domain, company] : kb.domains) {
    if (!detail::is_normalized(domain, kb.suffixes)) {
      out.push_back({Errc::UnnormalizedDomain, domain, "domain is not in registrable (2-level) form", {}});
    }
    if (!kb.companies.contains(company)) {
      out.push_back({Errc::UnknownCompanyReference, domain, "company_id '" + company + "' does not exist", {}});
    }
  }
  return out;
}

inline std::optional<std::string> resolve_company(const TrackerKB& kb, std::string_view domain) {
  auto it = kb.domains.find(domain);
  if (it == kb.domains.end()) return std::nullopt;
  return it->second;
}

inline const Company& find_company(const TrackerKB& kb, std::string_view id) {
  auto it = kb.companies.find(id);
  if (it == kb.companies.end()) throw Error(Errc::UnknownCompany, "'" + std::string(id) + "'");
  return it->second;
}

/// The company followed by its parent, grandparent, ... up to the root.
inline std::vector<std::string> ancestry(const TrackerKB& kb, std::string_view company_id) {
  std::vector<std::string> chain;
  const Company* c = &find_company(kb, company_id);
  chain.push_back(c->id);
  while (c->parent_id) {
    if (chain.size() > kb.companies.size()) throw Error(Errc::OwnershipCycle, "while resolving '" + chain[0] + "'");
    c = &find_company(kb, *c->parent_id);
    chain.push_back(c->id);
  }
  return chain;
}

inline std::string root_parent(const TrackerKB& kb, std::string_view company_id) {
  return ancestry(kb, company_id).back();
}

inline const std::string& company_country(const TrackerKB& kb, std::string_view company_id) {
  return find_company(kb, company_id).country;
}

/// Loads and validates a KB. Any violation aborts the load; nothing partial
/// is returned.
inline TrackerKB load_kb(const std::filesystem::path& domains_file, const std::filesystem::path& companies_file,
                         const SuffixList& suffixes = SuffixList::builtin()) {
  TrackerKB kb;
  kb.suffixes = suffixes;
  const std::string cfile = companies_file.string();
  const std::string dfile = domains_file.string();
  const auto companies_doc = csv::parse(read_file_text(companies_file), cfile);
  const auto domains_doc = csv::parse(read_file_text(domains_file), dfile);

  std::map<std::string, std::size_t> company_line;
  for (std::size_t r = 0; r < companies_doc.rows.size(); ++r) {
    const auto& row = companies_doc.rows[r];
    if (r == 0) {
      csv::expect_header(row, {"company_id", "display_name", "parent_id", "country"}, cfile);
      continue;
    }
    const auto where = file_line(cfile, row.line);
    if (row.fields.size() != 4) throw Error(Errc::ParseError, "expected 4 fields", where);
    Company c{row.fields[0], row.fields[1], std::nullopt, row.fields[3]};
    if (!row.fields[2].empty()) c.parent_id = row.fields[2];
    if (!detail::valid_company_id(c.id)) throw Error(Errc::ParseError, "bad company id '" + c.id + "'", where);
    if (!detail::valid_country(c.country)) throw Error(Errc::ParseError, "bad country '" + c.country + "'", where);
    if (kb.companies.contains(c.id)) throw Error(Errc::ParseError, "duplicate company id '" + c.id + "'", where);
    company_line[c.id] = row.line;
    kb.companies.emplace(c.id, std::move(c));
  }
  for (const auto& [id, c] : kb.companies) {
    if (c.parent_id && !kb.companies.contains(*c.parent_id)) {
      throw Error(Errc::UnknownCompanyReference, "parent_id '" + *c.parent_id + "'", file_line(cfile, company_line[id]));
    }
  }
  if (auto cycles = detail::find_cycles(kb.companies); !cycles.empty()) {
    const auto& first = cycles.front();
    std::string members;
    for (const auto& m : first) members += (members.empty() ? "" : ", ") + m;
    throw Error(Errc::OwnershipCycle, "among " + members, file_line(cfile, company_line[first.front()]));
  }

  for (std::size_t r = 0; r < domains_doc.rows.size(); ++r) {
    const auto& row = domains_doc.rows[r];
    if (r == 0) {
      csv::expect_header(row, {"domain", "company_id"}, dfile);
      continue;
    }
    const auto where = file_line(dfile, row.line);
    if (row.fields.size() != 2) throw Error(Errc::ParseError, "expected 2 fields", where);
    const auto& domain = row.fields[0];
    const auto& company = row.fields[1];
    if (!detail::is_normalized(domain, kb.suffixes)) throw Error(Errc::UnnormalizedDomain, "'" + domain + "'", where);
    if (!kb.companies.contains(company)) throw Error(Errc::UnknownCompanyReference, "'" + company + "'", where);
    if (!kb.domains.emplace(domain, company).second) throw Error(Errc::DuplicateDomain, "'" + domain + "'", where);
  }

  kb.version = detail::parse_version(domains_doc.comments);
  if (kb.version.empty()) kb.version = detail::parse_version(companies_doc.comments);
  return kb;
}

inline TrackerKB load_kb_dir(const std::filesystem::path& dir) {
  const auto psl = dir / "public_suffix.txt";
  const SuffixList suffixes = std::filesystem::exists(psl) ? SuffixList::load(psl) : SuffixList::builtin();
  return load_kb(dir / "domains.csv", dir / "companies.csv", suffixes);
}

/// Writes `kb` in the directory layout read by load_kb_dir, rows sorted.
inline void write_kb_dir(const TrackerKB& kb, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string version_line = kb.version.empty() ? "" : "# version: " + kb.version + "\n";
  {
    std::ofstream out(dir / "domains.csv", std::ios::binary);
    out << version_line << csv::line({"domain", "company_id"});
    for (const auto& [d, c] : kb.domains) out << csv::line({d, c});
  }
  {
    std::ofstream out(dir / "companies.csv", std::ios::binary);
    out << version_line << csv::line({"company_id", "display_name", "parent_id", "country"});
    for (const auto& [id, c] : kb.companies) out << csv::line({id, c.display_name, c.parent_id.value_or(""), c.country});
  }
  std::ofstream(dir / "public_suffix.txt", std::ios::binary) << kb.suffixes.to_text();
}

/// Reads a KB directory without stopping at the first problem and returns
/// every violation found, with file:line context where available.
inline std::vector<Violation> inspect_kb_dir(const std::filesystem::path& dir) {
  std::vector<Violation> out;
  TrackerKB kb;
  const auto psl = dir / "public_suffix.txt";
  if (std::filesystem::exists(psl)) kb.suffixes = SuffixList::load(psl);
  const std::string cfile = (dir / "companies.csv").string();
  const std::string dfile = (dir / "domains.csv").string();
  std::map<std::string, std::string> lines;  // subject -> file:line

  const auto companies_doc = csv::parse(read_file_text(cfile), cfile);
  for (std::size_t r = 0; r < companies_doc.rows.size(); ++r) {
    const auto& row = companies_doc.rows[r];
    const auto where = file_line(cfile, row.line);
    if (r == 0) {
      if (row.fields != std::vector<std::string>{"company_id", "display_name", "parent_id", "country"}) {
        out.push_back({Errc::ParseError, "companies.csv", "unexpected header", where});
      }
      continue;
    }
    if (row.fields.size() != 4) {
      out.push_back({Errc::ParseError, row.fields.empty() ? "" : row.fields[0], "expected 4 fields", where});
      continue;
    }
    Company c{row.fields[0], row.fields[1], std::nullopt, row.fields[3]};
    if (!row.fields[2].empty()) c.parent_id = row.fields[2];
    if (kb.companies.contains(c.id)) {
      out.push_back({Errc::ParseError, c.id, "duplicate company id", where});
      continue;
    }
    lines.emplace(c.id, where);
    kb.companies.emplace(c.id, std::move(c));
  }

  const auto domains_doc = csv::parse(read_file_text(dfile), dfile);
  for (std::size_t r = 0; r < domains_doc.rows.size(); ++r) {
    const auto& row = domains_doc.rows[r];
    const auto where = file_line(dfile, row.line);
    if (r == 0) {
      if (row.fields != std::vector<std::string>{"domain", "company_id"}) {
        out.push_back({Errc::ParseError, "domains.csv", "unexpected header", where});
      }
      continue;
    }
    if (row.fields.size() != 2) {
      out.push_back({Errc::ParseError, row.fields.empty() ? "" : row.fields[0], "expected 2 fields", where});
      continue;
    }
    if (!kb.domains.emplace(row.fields[0], row.fields[1]).second) {
      out.push_back({Errc::DuplicateDomain, row.fields[0], "domain listed more than once", where});
      continue;
    }
    lines.emplace(row.fields[0], where);
  }

  for (auto& v : validate_kb(kb)) {
    if (auto it = lines.find(v.subject); it != lines.end()) v.where = it->second;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace trackscan
