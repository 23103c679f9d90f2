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

// Command-line front end. Exit status: 0 success, 1 failure (validation
// violations or a runtime error), 2 usage error.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "trackscan/corpus.hpp"
#include "trackscan/pipeline.hpp"
#include "trackscan/ranking.hpp"
#include "trackscan/tracker_kb.hpp"
#include "trackscan/version.hpp"

namespace trackscan {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::filesystem::path kb_dir_or_env(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TRACKSCAN_KB_DIR"); env && *env) return env;
  throw UsageError("no knowledge base: pass --kb <dir> or set TRACKSCAN_KB_DIR");
}

inline ScanMode parse_extraction(const std::string& mode) {
  return mode == "raw" ? ScanMode::RawScan : ScanMode::StringPool;
}

inline void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty() || out_path == "-") {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(Errc::IoError, "cannot write", out_path);
  f << text;
}

}  // namespace detail

inline int run_cli(std::vector<std::string> args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"trackscan: find third-party tracker hosts in Android apps and measure their prevalence", "trackscan"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  std::string kb_flag;
  bool paper_compat = false;
  std::string mode = "pool";

  auto* scan = app.add_subcommand("scan", "Profile one APK");
  std::string apk;
  std::string scan_out;
  std::string manifest_xml;
  std::string app_id;
  scan->add_option("apk", apk, "APK file")->required();
  scan->add_option("--kb", kb_flag, "Knowledge base directory (default: $TRACKSCAN_KB_DIR)");
  scan->add_flag("--paper-compat", paper_compat, "Match with the right-boundary rule only");
  scan->add_option("--mode", mode, "Host extraction: pool (string pool) or raw (byte scan)")
      ->check(CLI::IsMember({"pool", "raw"}));
  scan->add_option("-o,--output", scan_out, "Output JSON file (default: stdout)");
  scan->add_option("--manifest-xml", manifest_xml, "Decoded AndroidManifest.xml for permissions");
  scan->add_option("--app-id", app_id, "App id to report (default: APK file stem)");

  auto* corpus = app.add_subcommand("corpus", "Analyse every app in a corpus manifest");
  std::string manifest;
  std::string genres_file;
  std::string corpus_out;
  CorpusOptions copts;
  std::size_t top_k = 20;
  corpus->add_option("manifest", manifest, "manifest.csv")->required();
  corpus->add_option("--kb", kb_flag, "Knowledge base directory (default: $TRACKSCAN_KB_DIR)");
  corpus->add_option("--genres", genres_file, "genre,super_genre mapping CSV")->required();
  corpus->add_option("-o,--output", corpus_out, "Output directory")->required();
  corpus->add_flag("--paper-compat", paper_compat, "Match with the right-boundary rule only");
  corpus->add_option("--mode", mode, "Host extraction for APK rows: pool or raw")->check(CLI::IsMember({"pool", "raw"}));
  corpus->add_option("--jobs", copts.jobs, "Worker threads (0: one per core)");
  corpus->add_option("--top-k", top_k, "Ranking length for genre distances (0: all)");
  corpus->add_option("--bin-width", copts.bin_width, "Histogram bin width")->check(CLI::PositiveNumber);
  corpus->add_option("--host-threshold", copts.host_threshold, "Report % of apps above this many tracker hosts");
  corpus->add_option("--company-threshold", copts.company_threshold, "Report % of apps above this many companies");

  auto* kb = app.add_subcommand("kb", "Knowledge base utilities");
  kb->require_subcommand(1);
  auto* validate = kb->add_subcommand("validate", "Check a knowledge base directory");
  std::string validate_dir;
  validate->add_option("dir", validate_dir, "Knowledge base directory")->required();

  auto* rankdist = app.add_subcommand("rankdist", "Kendall tau distance between two ranking CSVs");
  std::string r1_file;
  std::string r2_file;
  rankdist->add_option("r1", r1_file, "First ranking")->required();
  rankdist->add_option("r2", r2_file, "Second ranking")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    const MatchMode match = paper_compat ? MatchMode::PaperCompat : MatchMode::Strict;
    if (*scan) {
      const auto kb_dir = detail::kb_dir_or_env(kb_flag);
      const TrackerKB tracker_kb = load_kb_dir(kb_dir);
      std::optional<std::filesystem::path> xml;
      if (!manifest_xml.empty()) xml = manifest_xml;
      const auto result = scan_apk(apk, tracker_kb, {match, detail::parse_extraction(mode)}, app_id, xml);
      auto j = to_json(result.profile);
      j["dex_entries"] = result.dex_entries;
      j["warnings"] = result.warnings;
      j["kb_version"] = tracker_kb.version;
      j["tool_version"] = kToolVersion;
      for (const auto& w : result.warnings) err << "warning: " << w << "\n";
      detail::emit(j.dump(2) + "\n", scan_out, out);
      return kExitOk;
    }
    if (*corpus) {
      const auto kb_dir = detail::kb_dir_or_env(kb_flag);
      const TrackerKB tracker_kb = load_kb_dir(kb_dir);
      const GenreMap genres = GenreMap::load(genres_file);
      const auto rows = load_manifest(manifest);
      copts.scan = {match, detail::parse_extraction(mode)};
      copts.top_k = top_k == 0 ? std::nullopt : std::optional<std::size_t>(top_k);
      const auto run = run_corpus(rows, tracker_kb, genres, copts);
      write_corpus_outputs(run, corpus_out);
      for (const auto& w : run.report.warnings) err << "warning: " << w << "\n";
      for (const auto& [id, reason] : run.report.failures) err << "failed: " << id << ": " << reason << "\n";
      out << run.report.apps_total - run.report.failures.size() << " of " << run.report.apps_total
          << " apps profiled; report written to " << corpus_out << "\n";
      return kExitOk;
    }
    if (*validate) {
      const auto violations = inspect_kb_dir(validate_dir);
      for (const auto& v : violations) {
        out << (v.where.empty() ? v.subject : v.where) << ": " << errc_name(v.kind) << ": " << v.message << "\n";
      }
      out << violations.size() << " violations\n";
      return violations.empty() ? kExitOk : kExitFailure;
    }
    if (*rankdist) {
      const auto d = kendall_distance(load_ranking(r1_file), load_ranking(r2_file));
      nlohmann::json j{{"raw_k", d.raw_k}, {"normalized_k", d.normalized_k}, {"universe_size", d.universe_size}};
      out << j.dump() << "\n";
      return kExitOk;
    }
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

inline int run_cli(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace trackscan
