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

// A synthetic corpus of pre-extracted host lists whose tracker content is
// fixed at generation time, so expected report values can be computed
// without the library.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "test_support.hpp"
#include "trackscan/corpus.hpp"

namespace tsup {

struct KnownTracker {
  const char* domain;
  const char* company;
  const char* root;
  std::set<std::string> countries;  // company and every ancestor
  const char* own_country;
};

// Hand-resolved against data/seed_kb.
inline const std::vector<KnownTracker>& known_trackers() {
  static const std::vector<KnownTracker> t = {
      {"doubleclick.net", "doubleclick", "alphabet", {"US"}, "US"},
      {"google.com", "google", "alphabet", {"US"}, "US"},
      {"googleapis.com", "google_apis", "alphabet", {"US"}, "US"},
      {"google-analytics.com", "google_analytics", "alphabet", {"US"}, "US"},
      {"firebaseio.com", "firebase", "alphabet", {"US"}, "US"},
      {"facebook.com", "facebook", "facebook", {"US"}, "US"},
      {"facebook.net", "facebook", "facebook", {"US"}, "US"},
      {"crashlytics.com", "crashlytics", "twitter", {"US"}, "US"},
      {"flurry.com", "flurry", "verizon", {"US"}, "US"},
      {"yahoo.com", "yahoo", "verizon", {"US"}, "US"},
      {"admobi.us", "admobius", "lotame", {"US"}, "US"},
      {"adcolony.com", "adcolony", "opera", {"US", "NO"}, "US"},
      {"umeng.com", "umeng", "alibaba", {"CN"}, "CN"},
      {"yandex.ru", "yandex", "yandex", {"RU"}, "RU"},
      {"appsflyer.com", "appsflyer", "appsflyer", {"IL"}, "IL"},
      {"unity3d.com", "unitytechnologies", "unitytechnologies", {"US"}, "US"},
      {"amazon-adsystem.com", "amazon_marketing_services", "amazon", {"US"}, "US"},
      {"chartboost.com", "chartboost", "chartboost", {"US"}, "US"},
  };
  return t;
}

struct OracleApp {
  std::string id;
  std::string genre;
  bool family = false;
  std::string store;
  std::string super_genre;
  std::set<std::string> domains;
  std::set<std::string> companies;
  std::set<std::string> roots;
  std::set<std::string> countries;
  std::set<std::string> subsidiary_countries;
  std::size_t refs = 0;  // host lines that carry a tracker
  std::size_t candidates = 0;
};

struct SyntheticCorpus {
  std::filesystem::path manifest;
  std::vector<OracleApp> apps;
};

// Genre choices per super genre; Family apps carry the family flag.
inline const std::vector<std::pair<std::string, std::vector<std::string>>>& synthetic_genres() {
  static const std::vector<std::pair<std::string, std::vector<std::string>>> g = {
      {"Games & Entertainment", {"Casino Games", "Comics", "Puzzle Games", "Sports"}},
      {"News", {"News & Magazines"}},
      {"Productivity & Tools", {"Tools", "Finance", "Weather"}},
      {"Family", {"Educational Games", "Education", "Casual Games"}},
  };
  return g;
}

inline SyntheticCorpus make_synthetic_corpus(const std::filesystem::path& dir, std::uint64_t seed,
                                             std::size_t n_apps = 100) {
  std::mt19937_64 rng(seed);
  const auto& trackers = known_trackers();
  const auto& genres = synthetic_genres();
  SyntheticCorpus corpus;
  corpus.manifest = dir / "manifest.csv";
  std::string manifest = "app_id,apk_path,hosts_path,genre,family_flag,store\n";

  for (std::size_t i = 0; i < n_apps; ++i) {
    OracleApp app;
    char id[48];
    std::snprintf(id, sizeof id, "com.synthetic.app%03zu", i);
    app.id = id;
    const auto& [super_genre, choices] = genres[i % genres.size()];
    app.super_genre = super_genre;
    app.genre = choices[rng() % choices.size()];
    app.family = super_genre == "Family";
    app.store = i % 3 == 0 ? "uk" : "us";

    // Each genre favours a different slice of the tracker list, which
    // makes the per-genre rankings differ.
    std::vector<std::string> lines = {"# extracted strings for " + app.id, ""};
    const std::size_t bias = (i % genres.size()) * 4;
    const std::size_t picks = i % 11 == 0 ? 0 : rng() % 9;
    for (std::size_t k = 0; k < picks; ++k) {
      const std::size_t idx = rng() % 3 == 0 ? rng() % trackers.size() : (bias + rng() % 6) % trackers.size();
      const KnownTracker& t = trackers[idx];
      static const char* kForms[] = {"https://ads.%s/v1/track?id=7", "%s", "cdn.%s:443", "HTTP://WWW.%s/",
                                     "sdk.%s"};
      const int form = static_cast<int>(rng() % 5);
      char buf[256];
      std::string upper = t.domain;
      if (form == 3) {
        for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      }
      std::snprintf(buf, sizeof buf, kForms[form], upper.c_str());
      lines.push_back(buf);
      app.domains.insert(t.domain);
      app.companies.insert(t.company);
      app.roots.insert(t.root);
      app.countries.insert(t.countries.begin(), t.countries.end());
      app.subsidiary_countries.insert(t.own_country);
      ++app.refs;
      ++app.candidates;
    }
    // Hosts that are not trackers, and look-alikes the strict rule rejects.
    const std::vector<std::string> noise = {"api.synthetic" + std::to_string(i) + ".com", "cdn.example.org",
                                            "notflurry.com", "doubleclick.net.example.org", "google.coming",
                                            "Lcom/synthetic/Main;", "version 1.2.3"};
    for (std::size_t k = 0, n = rng() % 5; k < n; ++k) {
      const std::string& line = noise[rng() % noise.size()];
      lines.push_back(line);
      if (line.find('.') != std::string::npos && line[0] != 'L' && line[0] != 'v') ++app.candidates;
    }
    std::shuffle(lines.begin() + 2, lines.end(), rng);

    std::string text;
    for (const auto& l : lines) text += l + "\n";
    const std::string hosts_file = "hosts/" + app.id + ".txt";
    write_file(dir / hosts_file, text);
    manifest += app.id + ",," + hosts_file + ",\"" + app.genre + "\"," + (app.family ? "true" : "false") + "," +
                app.store + "\n";
    corpus.apps.push_back(std::move(app));
  }
  write_file(corpus.manifest, manifest);
  return corpus;
}

// Expected prevalence rows for one entity level, sorted by count descending
// then entity id.
inline std::vector<std::pair<std::string, std::size_t>> expected_prevalence(
    const std::vector<const OracleApp*>& apps, const std::set<std::string> OracleApp::*field) {
  std::map<std::string, std::size_t> counts;
  for (const auto* a : apps) {
    for (const auto& e : a->*field) ++counts[e];
  }
  std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
  std::sort(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });
  return rows;
}

// Compares a corpus run against values recomputed from the generator's
// ground truth. Returns one line per mismatch; empty means agreement.
inline std::vector<std::string> oracle_mismatches(const SyntheticCorpus& corpus, const trackscan::CorpusRun& run,
                                                  const trackscan::CorpusOptions& options) {
  using trackscan::PrevalenceLevel;
  std::vector<std::string> bad;
  auto fail = [&](const std::string& what) { bad.push_back(what); };
  auto near = [](double a, double b, double tol = 1e-12) { return std::fabs(a - b) <= tol; };

  const auto& rep = run.report;
  if (rep.apps_total != corpus.apps.size()) fail("apps_total");
  if (!rep.failures.empty()) fail("unexpected failures");
  if (run.apps.size() != corpus.apps.size()) return {"app count"};

  std::vector<const OracleApp*> all;
  for (std::size_t i = 0; i < corpus.apps.size(); ++i) {
    const OracleApp& want = corpus.apps[i];
    all.push_back(&want);
    const auto& got = run.apps[i];
    if (got.row.app_id != want.id || !got.profile) {
      fail("app " + want.id + " missing");
      continue;
    }
    const auto& p = *got.profile;
    if (got.super_genre != want.super_genre) fail(want.id + " super genre " + got.super_genre);
    if (p.tracker_domains != want.domains) fail(want.id + " tracker domains");
    if (p.companies != want.companies) fail(want.id + " companies");
    if (p.root_parents != want.roots) fail(want.id + " root parents");
    if (p.countries != want.countries) fail(want.id + " countries");
    if (p.subsidiary_countries != want.subsidiary_countries) fail(want.id + " subsidiary countries");
    if (p.tracker_host_refs != want.refs) fail(want.id + " tracker host refs");
    if (p.candidate_count != want.candidates) fail(want.id + " candidate count");
  }

  auto check_stats = [&](const std::string& label, const std::optional<trackscan::DescriptiveStats>& s,
                         const std::vector<std::int64_t>& v, std::int64_t threshold) {
    if (v.empty()) {
      if (s) fail(label + " present for empty input");
      return;
    }
    if (!s) return fail(label + " missing");
    std::size_t above = 0, zero = 0;
    for (auto x : v) {
      above += x > threshold;
      zero += x == 0;
    }
    const double n = static_cast<double>(v.size());
    if (s->n != v.size()) fail(label + " n");
    if (s->median != static_cast<double>(rank_quantile(v, 1, 2))) fail(label + " median");
    if (s->q1 != static_cast<double>(rank_quantile(v, 1, 4))) fail(label + " q1");
    if (s->q3 != static_cast<double>(rank_quantile(v, 3, 4))) fail(label + " q3");
    if (s->n_above_threshold != above) fail(label + " n_above_threshold");
    if (s->n_zero != zero) fail(label + " n_zero");
    if (!near(s->pct_above_threshold, 100.0 * static_cast<double>(above) / n)) fail(label + " pct_above_threshold");
    if (!near(s->pct_zero, 100.0 * static_cast<double>(zero) / n)) fail(label + " pct_zero");
  };
  auto sizes = [](const std::vector<const OracleApp*>& apps, const std::set<std::string> OracleApp::*field) {
    std::vector<std::int64_t> v;
    for (const auto* a : apps) v.push_back(static_cast<std::int64_t>((a->*field).size()));
    return v;
  };
  auto check_gini = [&](const std::string& label, const std::optional<double>& g, const std::vector<std::int64_t>& v) {
    if (std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; })) {
      if (g) fail(label + " should be null");
      return;
    }
    if (!g || !near(*g, gini_pairs(std::vector<double>(v.begin(), v.end())))) fail(label);
  };
  auto check_table = [&](const std::string& label, const trackscan::PrevalenceTable& t,
                         const std::vector<const OracleApp*>& apps, const std::set<std::string> OracleApp::*field) {
    const auto want = expected_prevalence(apps, field);
    if (t.rows.size() != want.size()) return fail(label + " row count");
    for (std::size_t r = 0; r < want.size(); ++r) {
      if (t.rows[r].entity != want[r].first || t.rows[r].apps_present != want[r].second ||
          !near(t.rows[r].pct_apps, 100.0 * static_cast<double>(want[r].second) / static_cast<double>(apps.size()))) {
        return fail(label + " row " + std::to_string(r));
      }
    }
  };

  const auto hosts = sizes(all, &OracleApp::domains);
  const auto companies = sizes(all, &OracleApp::companies);
  std::vector<std::int64_t> refs;
  for (const auto* a : all) refs.push_back(static_cast<std::int64_t>(a->refs));
  check_stats("hosts", rep.hosts, hosts, options.host_threshold);
  check_stats("host_refs", rep.host_refs, refs, options.host_threshold);
  check_stats("companies", rep.companies, companies, options.company_threshold);
  check_stats("countries", rep.countries, sizes(all, &OracleApp::countries), options.country_threshold);
  check_gini("gini hosts", rep.gini_hosts, hosts);
  check_gini("gini companies", rep.gini_companies, companies);

  check_table("subsidiary", rep.prevalence.at(PrevalenceLevel::Subsidiary), all, &OracleApp::companies);
  check_table("root parent", rep.prevalence.at(PrevalenceLevel::RootParent), all, &OracleApp::roots);
  check_table("country", rep.prevalence.at(PrevalenceLevel::Country), all, &OracleApp::countries);
  check_table("subsidiary country", rep.prevalence.at(PrevalenceLevel::SubsidiaryCountry), all,
              &OracleApp::subsidiary_countries);

  std::map<std::int64_t, std::size_t> hist;
  for (auto h : hosts) ++hist[h / options.bin_width];
  if (rep.histogram_hosts.size() != hist.size()) {
    fail("histogram size");
  } else {
    std::size_t b = 0;
    for (const auto& [bin, count] : hist) {
      const auto& got = rep.histogram_hosts[b++];
      if (got.low != bin * options.bin_width || got.high != (bin + 1) * options.bin_width || got.count != count) {
        fail("histogram bin " + std::to_string(bin));
      }
    }
  }

  std::map<std::string, std::vector<const OracleApp*>> by_genre;
  for (const auto* a : all) by_genre[a->super_genre].push_back(a);
  if (rep.genres.size() != by_genre.size()) return bad.push_back("genre count"), bad;
  auto top = [&](const std::vector<std::pair<std::string, std::size_t>>& rows) {
    std::vector<std::string> items;
    for (const auto& [e, _] : rows) {
      if (options.top_k && items.size() == *options.top_k) break;
      items.push_back(e);
    }
    return items;
  };
  auto norm_k = [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::size_t u = 0;
    for (const auto& x : a) u += std::find(b.begin(), b.end(), x) != b.end();
    const double pairs = u < 2 ? 1.0 : static_cast<double>(u * (u - 1) / 2);
    return static_cast<double>(discordant_pairs(a, b)) / pairs;
  };
  std::map<std::string, std::vector<std::string>> rankings;
  std::size_t gi = 0;
  for (const auto& [name, apps] : by_genre) {
    const auto& g = rep.genres[gi++];
    if (g.super_genre != name || g.apps != apps.size()) {
      fail("genre " + name);
      continue;
    }
    check_stats(name + " hosts", g.hosts, sizes(apps, &OracleApp::domains), options.host_threshold);
    check_stats(name + " companies", g.companies, sizes(apps, &OracleApp::companies), options.company_threshold);
    check_table(name + " subsidiaries", g.subsidiaries, apps, &OracleApp::companies);
    check_table(name + " countries", g.countries, apps, &OracleApp::countries);
    rankings[name] = top(expected_prevalence(apps, &OracleApp::companies));
  }

  if (!rep.genre_distances) return bad.push_back("genre distances missing"), bad;
  const auto reference = top(expected_prevalence(all, &OracleApp::companies));
  const auto& gd = *rep.genre_distances;
  if (gd.rows.size() != rankings.size()) return bad.push_back("distance rows"), bad;
  std::size_t ri = 0;
  for (const auto& [a, ra] : rankings) {
    const auto& row = gd.rows[ri++];
    if (row.genre != a) fail("distance row order");
    if (row.vs_reference.raw_k != discordant_pairs(ra, reference)) fail(a + " raw K vs reference");
    if (!near(row.vs_reference.normalized_k, norm_k(ra, reference))) fail(a + " K vs reference");
    double sum = 0;
    for (const auto& [b, rb] : rankings) {
      const double want = a == b ? 0.0 : norm_k(ra, rb);
      if (b != a) sum += want;
      if (!near(gd.matrix.at(a).at(b), want)) fail("matrix " + a + " / " + b);
    }
    if (!near(row.sum_k, sum, 1e-9)) fail(a + " sum K");
  }
  return bad;
}

// Every regular file under `dir`, keyed by relative path.
inline std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir)) {
    if (e.is_regular_file()) out[std::filesystem::relative(e.path(), dir).generic_string()] = slurp(e.path());
  }
  return out;
}

}  // namespace tsup
