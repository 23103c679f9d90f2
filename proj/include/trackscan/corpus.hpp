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

// Corpus analysis: profile every app in a manifest, then aggregate the
// per-app profiles into distributions, prevalence tables and genre ranking
// distances. Aggregation walks apps in manifest order and every map is
// ordered, so a report depends only on its inputs.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "trackscan/csv.hpp"
#include "trackscan/genres.hpp"
#include "trackscan/pipeline.hpp"
#include "trackscan/prevalence.hpp"
#include "trackscan/ranking.hpp"
#include "trackscan/stats.hpp"
#include "trackscan/tracker_kb.hpp"
#include "trackscan/version.hpp"

namespace trackscan {

struct ManifestRow {
  std::size_t line = 0;
  std::string app_id;
  std::optional<std::filesystem::path> apk_path;
  std::optional<std::filesystem::path> hosts_path;
  std::string genre;
  bool family = false;
  std::string store;
};

/// manifest.csv: app_id,apk_path,hosts_path,genre,family_flag,store
/// Exactly one of apk_path / hosts_path is set per row; relative paths are
/// resolved against the manifest's directory.
inline std::vector<ManifestRow> load_manifest(const std::filesystem::path& path) {
  const std::string file = path.string();
  const auto doc = csv::parse(read_file_text(path), file);
  const auto base = path.parent_path();
  std::vector<ManifestRow> rows;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& row = doc.rows[r];
    if (r == 0) {
      csv::expect_header(row, {"app_id", "apk_path", "hosts_path", "genre", "family_flag", "store"}, file);
      continue;
    }
    const auto where = file_line(file, row.line);
    if (row.fields.size() != 6) throw Error(Errc::ParseError, "expected 6 fields", where);
    ManifestRow m;
    m.line = row.line;
    m.app_id = row.fields[0];
    if (m.app_id.empty()) throw Error(Errc::ParseError, "empty app_id", where);
    if (!ids.insert(m.app_id).second) throw Error(Errc::ParseError, "duplicate app_id '" + m.app_id + "'", where);
    if (!row.fields[1].empty()) m.apk_path = base / row.fields[1];
    if (!row.fields[2].empty()) m.hosts_path = base / row.fields[2];
    if (m.apk_path.has_value() == m.hosts_path.has_value()) {
      throw Error(Errc::ParseError, "exactly one of apk_path and hosts_path must be set", where);
    }
    m.genre = row.fields[3];
    const std::string flag = detail::lowercase(row.fields[4]);
    if (flag == "1" || flag == "true" || flag == "yes") {
      m.family = true;
    } else if (!(flag.empty() || flag == "0" || flag == "false" || flag == "no")) {
      throw Error(Errc::ParseError, "family_flag must be true/false/1/0/yes/no", where);
    }
    m.store = row.fields[5];
    rows.push_back(std::move(m));
  }
  return rows;
}

struct CorpusOptions {
  ScanOptions scan;
  std::int64_t host_threshold = 20;
  std::int64_t company_threshold = 10;
  std::int64_t country_threshold = 1;
  std::int64_t bin_width = 1;
  std::optional<std::size_t> top_k = 20;  // ranking length for genre distances
  unsigned jobs = 0;                      // 0: hardware concurrency
};

struct AppResult {
  ManifestRow row;
  std::string super_genre;
  std::optional<AppProfile> profile;
  std::string failure;
};

struct GenreSummary {
  std::string super_genre;
  std::size_t apps = 0;  // profiled apps
  std::optional<DescriptiveStats> hosts;
  std::optional<DescriptiveStats> companies;
  PrevalenceTable subsidiaries;
  PrevalenceTable countries;
};

struct CorpusReport {
  std::string tool_version{kToolVersion};
  std::string kb_version;
  CorpusOptions options;
  std::size_t apps_total = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // app id, reason
  std::vector<std::string> warnings;
  std::optional<DescriptiveStats> hosts;      // distinct tracker domains per app
  std::optional<DescriptiveStats> host_refs;  // tracker-matching candidates per app
  std::optional<DescriptiveStats> companies;
  std::optional<DescriptiveStats> countries;
  std::optional<double> gini_hosts;
  std::optional<double> gini_companies;
  std::map<PrevalenceLevel, PrevalenceTable> prevalence;
  std::vector<OwnershipRow> ownership;
  std::vector<GenreSummary> genres;  // super genre name order
  std::map<std::string, std::size_t> stores;
  std::optional<GenreDistances> genre_distances;
  std::vector<HistogramBin> histogram_hosts;
  std::vector<HistogramBin> histogram_companies;
  std::vector<HistogramBin> histogram_countries;
};

struct CorpusRun {
  std::vector<AppResult> apps;  // manifest order
  CorpusReport report;
};

inline AppProfile profile_manifest_row(const ManifestRow& row, const TrackerKB& kb, const ScanOptions& options) {
  if (row.hosts_path) return profile_app(row.app_id, read_host_list(*row.hosts_path), kb, options.match);
  return scan_apk(*row.apk_path, kb, options, row.app_id).profile;
}

/// Profiles every row on a bounded pool of worker threads. Results land in
/// manifest order regardless of scheduling; a failing app is recorded, not
/// fatal.
inline std::vector<AppResult> profile_corpus(const std::vector<ManifestRow>& rows, const TrackerKB& kb,
                                             const GenreMap& genres, const ScanOptions& options, unsigned jobs) {
  std::vector<AppResult> results(rows.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < rows.size(); i = next++) {
      AppResult& r = results[i];
      r.row = rows[i];
      try {
        r.profile = profile_manifest_row(rows[i], kb, options);
      } catch (const std::exception& e) {
        r.failure = e.what();
      }
    }
  };
  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(rows.size(), 1)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  for (auto& r : results) r.super_genre = genres.lookup(r.row.genre, r.row.family).name;
  return results;
}

namespace detail {

template <class Fn>
std::vector<std::int64_t> collect(const std::vector<const AppProfile*>& profiles, Fn&& fn) {
  std::vector<std::int64_t> out;
  out.reserve(profiles.size());
  for (const auto* p : profiles) out.push_back(static_cast<std::int64_t>(fn(*p)));
  return out;
}

inline std::optional<DescriptiveStats> maybe_stats(const std::vector<std::int64_t>& v, std::int64_t threshold) {
  if (v.empty()) return std::nullopt;
  return descriptive_stats(v, threshold);
}

inline std::optional<double> maybe_gini(const std::vector<std::int64_t>& v) {
  if (v.empty() || std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) return std::nullopt;
  return gini(std::span<const std::int64_t>(v));
}

}  // namespace detail

inline CorpusReport aggregate_corpus(const std::vector<AppResult>& apps, const TrackerKB& kb, const GenreMap& genres,
                                     const CorpusOptions& options) {
  CorpusReport rep;
  rep.kb_version = kb.version;
  rep.options = options;
  rep.apps_total = apps.size();

  std::vector<AppProfile> profiles;
  std::map<std::string, std::vector<AppProfile>> by_genre;
  std::set<std::string> unmapped;
  for (const auto& a : apps) {
    by_genre[a.super_genre];  // every genre in the manifest gets a row
    if (auto sg = genres.lookup(a.row.genre, a.row.family); sg.warning) unmapped.insert(*sg.warning);
    if (!a.profile) {
      rep.failures.emplace_back(a.row.app_id, a.failure);
      continue;
    }
    profiles.push_back(*a.profile);
    by_genre[a.super_genre].push_back(*a.profile);
    ++rep.stores[a.row.store];
  }
  rep.warnings.assign(unmapped.begin(), unmapped.end());

  std::vector<const AppProfile*> all;
  for (const auto& p : profiles) all.push_back(&p);
  const auto hosts = detail::collect(all, [](const AppProfile& p) { return p.tracker_domains.size(); });
  const auto refs = detail::collect(all, [](const AppProfile& p) { return p.tracker_host_refs; });
  const auto companies = detail::collect(all, [](const AppProfile& p) { return p.companies.size(); });
  const auto countries = detail::collect(all, [](const AppProfile& p) { return p.countries.size(); });
  rep.hosts = detail::maybe_stats(hosts, options.host_threshold);
  rep.host_refs = detail::maybe_stats(refs, options.host_threshold);
  rep.companies = detail::maybe_stats(companies, options.company_threshold);
  rep.countries = detail::maybe_stats(countries, options.country_threshold);
  rep.gini_hosts = detail::maybe_gini(hosts);
  rep.gini_companies = detail::maybe_gini(companies);
  if (!all.empty()) {
    rep.histogram_hosts = emit_histogram(hosts, options.bin_width);
    rep.histogram_companies = emit_histogram(companies, options.bin_width);
    rep.histogram_countries = emit_histogram(countries, options.bin_width);
  }

  for (auto level : {PrevalenceLevel::Subsidiary, PrevalenceLevel::RootParent, PrevalenceLevel::Country,
                     PrevalenceLevel::SubsidiaryCountry}) {
    rep.prevalence[level] = prevalence_table(profiles, level);
  }
  rep.ownership =
      ownership_rows(rep.prevalence[PrevalenceLevel::Subsidiary], rep.prevalence[PrevalenceLevel::RootParent], kb);

  std::map<std::string, Ranking> rankings;
  for (const auto& [name, members] : by_genre) {
    GenreSummary g;
    g.super_genre = name;
    g.apps = members.size();
    std::vector<const AppProfile*> ptrs;
    for (const auto& p : members) ptrs.push_back(&p);
    g.hosts = detail::maybe_stats(detail::collect(ptrs, [](const AppProfile& p) { return p.tracker_domains.size(); }),
                                  options.host_threshold);
    g.companies = detail::maybe_stats(detail::collect(ptrs, [](const AppProfile& p) { return p.companies.size(); }),
                                      options.company_threshold);
    g.subsidiaries = prevalence_table(members, PrevalenceLevel::Subsidiary);
    g.countries = prevalence_table(members, PrevalenceLevel::Country);
    if (!members.empty()) rankings.emplace(name, ranking_from_prevalence(g.subsidiaries, options.top_k));
    rep.genres.push_back(std::move(g));
  }
  if (rankings.size() >= 2) {
    rep.genre_distances = pairwise_genre_distances(
        rankings, ranking_from_prevalence(rep.prevalence[PrevalenceLevel::Subsidiary], options.top_k));
  }
  return rep;
}

inline CorpusRun run_corpus(const std::vector<ManifestRow>& rows, const TrackerKB& kb, const GenreMap& genres,
                            const CorpusOptions& options) {
  CorpusRun run;
  run.apps = profile_corpus(rows, kb, genres, options.scan, options.jobs);
  run.report = aggregate_corpus(run.apps, kb, genres, options);
  return run;
}

// ---------------------------------------------------------------------------
// Serialization

namespace detail {

inline std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

inline std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline nlohmann::json stats_json(const std::optional<DescriptiveStats>& s) {
  if (!s) return nullptr;
  return {{"n", s->n},
          {"median", s->median},
          {"q1", s->q1},
          {"q3", s->q3},
          {"threshold", s->threshold},
          {"n_above_threshold", s->n_above_threshold},
          {"pct_above_threshold", round2(s->pct_above_threshold)},
          {"n_zero", s->n_zero},
          {"pct_zero", round2(s->pct_zero)}};
}

inline nlohmann::json table_json(const PrevalenceTable& t) {
  auto rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"entity", r.entity}, {"apps_present", r.apps_present}, {"pct_apps", round2(r.pct_apps)}});
  }
  return {{"level", level_name(t.level)}, {"corpus_size", t.corpus_size}, {"rows", rows}};
}

inline nlohmann::json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v;
}

}  // namespace detail

inline nlohmann::json to_json(const CorpusReport& rep) {
  using nlohmann::json;
  json j;
  j["tool_version"] = rep.tool_version;
  j["kb_version"] = rep.kb_version;
  j["options"] = {{"match_mode", rep.options.scan.match == MatchMode::PaperCompat ? "paper_compat" : "strict"},
                  {"extraction", scan_mode_name(rep.options.scan.extraction)},
                  {"host_threshold", rep.options.host_threshold},
                  {"company_threshold", rep.options.company_threshold},
                  {"country_threshold", rep.options.country_threshold},
                  {"bin_width", rep.options.bin_width},
                  {"top_k", rep.options.top_k ? json(*rep.options.top_k) : json(nullptr)}};
  j["apps_total"] = rep.apps_total;
  j["apps_profiled"] = rep.apps_total - rep.failures.size();
  auto failures = json::array();
  for (const auto& [id, reason] : rep.failures) failures.push_back({{"app_id", id}, {"reason", reason}});
  j["failures"] = failures;
  j["warnings"] = rep.warnings;
  j["tracker_hosts"] = detail::stats_json(rep.hosts);
  j["tracker_host_refs"] = detail::stats_json(rep.host_refs);
  j["companies"] = detail::stats_json(rep.companies);
  j["countries"] = detail::stats_json(rep.countries);
  j["gini"] = detail::optional_number(rep.gini_hosts);
  j["gini_companies"] = detail::optional_number(rep.gini_companies);
  json prevalence;
  for (const auto& [level, table] : rep.prevalence) prevalence[std::string(level_name(level))] = detail::table_json(table);
  j["prevalence"] = prevalence;
  auto ownership = json::array();
  for (const auto& o : rep.ownership) {
    ownership.push_back({{"root_parent", o.root_parent},
                         {"root_apps", o.root_apps},
                         {"root_pct", round2(o.root_pct)},
                         {"subsidiary", o.subsidiary},
                         {"subsidiary_apps", o.subsidiary_apps},
                         {"subsidiary_pct", round2(o.subsidiary_pct)},
                         {"country", o.country}});
  }
  j["ownership"] = ownership;
  json genres = json::object();
  for (const auto& g : rep.genres) {
    genres[g.super_genre] = {{"apps", g.apps},
                             {"tracker_hosts", detail::stats_json(g.hosts)},
                             {"companies", detail::stats_json(g.companies)},
                             {"prevalence_subsidiary", detail::table_json(g.subsidiaries)},
                             {"prevalence_country", detail::table_json(g.countries)}};
  }
  j["super_genres"] = genres;
  j["stores"] = rep.stores;
  if (rep.genre_distances) {
    auto rows = json::array();
    for (const auto& r : rep.genre_distances->rows) {
      rows.push_back({{"super_genre", r.genre},
                      {"k", r.vs_reference.normalized_k},
                      {"raw_k", r.vs_reference.raw_k},
                      {"universe_size", r.vs_reference.universe_size},
                      {"sum_k", r.sum_k}});
    }
    j["genre_distances"] = {{"reference", "all_apps"}, {"rows", rows}, {"matrix", rep.genre_distances->matrix}};
  } else {
    j["genre_distances"] = nullptr;
  }
  return j;
}

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write", path.string());
  out << text;
}

inline std::string table_csv(const PrevalenceTable& t) {
  std::string out = csv::line({"entity_id", "apps_present", "pct_apps"});
  for (const auto& r : t.rows) out += csv::line({r.entity, std::to_string(r.apps_present), fixed2(r.pct_apps)});
  return out;
}

inline std::string histogram_csv(const std::vector<HistogramBin>& bins) {
  std::string out = csv::line({"bin_low", "bin_high", "count"});
  for (const auto& b : bins) out += csv::line({std::to_string(b.low), std::to_string(b.high), std::to_string(b.count)});
  return out;
}

inline std::string slug(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (is_alnum(c)) {
      out += to_lower(c);
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "genre" : out;
}

}  // namespace detail

/// Writes report.json plus CSV tables and histograms into `dir`.
inline void write_corpus_outputs(const CorpusRun& run, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  using detail::fixed2;
  const auto& rep = run.report;
  fs::create_directories(dir / "rankings");
  detail::write_text(dir / "report.json", to_json(rep).dump(2) + "\n");

  std::string profiles = csv::line({"app_id", "store", "genre", "super_genre", "family_flag", "candidate_count",
                                    "tracker_host_refs", "tracker_hosts", "companies", "root_parents", "countries"});
  std::string failures = csv::line({"app_id", "reason"});
  for (const auto& a : run.apps) {
    if (!a.profile) {
      failures += csv::line({a.row.app_id, a.failure});
      continue;
    }
    const auto& p = *a.profile;
    profiles += csv::line({p.app_id, a.row.store, a.row.genre, a.super_genre, a.row.family ? "true" : "false",
                           std::to_string(p.candidate_count), std::to_string(p.tracker_host_refs),
                           std::to_string(p.tracker_domains.size()), std::to_string(p.companies.size()),
                           std::to_string(p.root_parents.size()), std::to_string(p.countries.size())});
  }
  detail::write_text(dir / "profiles.csv", profiles);
  detail::write_text(dir / "failures.csv", failures);

  for (const auto& [level, table] : rep.prevalence) {
    detail::write_text(dir / ("prevalence_" + std::string(level_name(level)) + ".csv"), detail::table_csv(table));
  }

  std::string ownership = csv::line({"root_parent", "root_apps", "root_pct_apps", "subsidiary", "subsidiary_apps",
                                     "subsidiary_pct_apps", "country"});
  for (const auto& o : rep.ownership) {
    ownership += csv::line({o.root_parent, std::to_string(o.root_apps), fixed2(o.root_pct), o.subsidiary,
                            std::to_string(o.subsidiary_apps), fixed2(o.subsidiary_pct), o.country});
  }
  detail::write_text(dir / "ownership.csv", ownership);

  std::string genre_stats = csv::line({"super_genre", "metric", "apps", "median", "q1", "q3", "threshold",
                                       "n_above_threshold", "pct_above_threshold", "n_zero", "pct_zero"});
  for (const auto& g : rep.genres) {
    for (const auto& [metric, stats] : {std::pair{"tracker_hosts", &g.hosts}, std::pair{"companies", &g.companies}}) {
      if (!*stats) {
        genre_stats += csv::line({g.super_genre, metric, "0", "", "", "", "", "", "", "", ""});
        continue;
      }
      const auto& s = **stats;
      genre_stats += csv::line({g.super_genre, metric, std::to_string(g.apps), detail::number(s.median),
                                detail::number(s.q1), detail::number(s.q3), std::to_string(s.threshold),
                                std::to_string(s.n_above_threshold), fixed2(s.pct_above_threshold),
                                std::to_string(s.n_zero), fixed2(s.pct_zero)});
    }
  }
  detail::write_text(dir / "genre_stats.csv", genre_stats);

  if (rep.genre_distances) {
    std::string distances = csv::line({"super_genre", "k", "sum_k", "raw_k", "universe_size"});
    for (const auto& r : rep.genre_distances->rows) {
      distances += csv::line({r.genre, detail::number(r.vs_reference.normalized_k), detail::number(r.sum_k),
                              std::to_string(r.vs_reference.raw_k), std::to_string(r.vs_reference.universe_size)});
    }
    detail::write_text(dir / "genre_distances.csv", distances);
    std::vector<std::string> header{"super_genre"};
    for (const auto& [name, _] : rep.genre_distances->matrix) header.push_back(name);
    std::string matrix = csv::line(header);
    for (const auto& [name, row] : rep.genre_distances->matrix) {
      std::vector<std::string> fields{name};
      for (const auto& [_, k] : row) fields.push_back(detail::number(k));
      matrix += csv::line(fields);
    }
    detail::write_text(dir / "genre_distance_matrix.csv", matrix);
  }

  detail::write_text(dir / "rankings" / "all_apps.csv",
                     detail::table_csv(rep.prevalence.at(PrevalenceLevel::Subsidiary)));
  for (const auto& g : rep.genres) {
    detail::write_text(dir / "rankings" / (detail::slug(g.super_genre) + ".csv"), detail::table_csv(g.subsidiaries));
  }

  detail::write_text(dir / "histogram_tracker_hosts.csv", detail::histogram_csv(rep.histogram_hosts));
  detail::write_text(dir / "histogram_companies.csv", detail::histogram_csv(rep.histogram_companies));
  detail::write_text(dir / "histogram_countries.csv", detail::histogram_csv(rep.histogram_countries));
}

/// Reads a ranking file: the first column of each row is an entity id. A
/// first row whose first field is "entity_id" is a header.
inline Ranking load_ranking(const std::filesystem::path& path) {
  const auto doc = csv::parse(read_file_text(path), path.string());
  std::vector<std::string> items;
  for (std::size_t r = 0; r < doc.rows.size(); ++r) {
    const auto& f = doc.rows[r].fields;
    if (r == 0 && !f.empty() && f[0] == "entity_id") continue;
    if (f.empty() || f[0].empty()) throw Error(Errc::ParseError, "empty entity id", file_line(path.string(), doc.rows[r].line));
    items.push_back(f[0]);
  }
  try {
    return Ranking(std::move(items));
  } catch (const Error& e) {
    throw Error(Errc::ParseError, e.what(), path.string());
  }
}

}  // namespace trackscan
