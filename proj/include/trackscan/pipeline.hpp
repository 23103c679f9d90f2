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

// Single-app pipeline: APK -> dex blobs -> host candidates -> AppProfile.

#pragma once

#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "trackscan/apk.hpp"
#include "trackscan/dex.hpp"
#include "trackscan/host_scan.hpp"
#include "trackscan/manifest.hpp"
#include "trackscan/matcher.hpp"
#include "trackscan/tracker_kb.hpp"

namespace trackscan {

struct ScanOptions {
  MatchMode match = MatchMode::Strict;
  ScanMode extraction = ScanMode::StringPool;  // StringPool or RawScan
};

inline std::vector<HostCandidate> extract_candidates(const std::vector<DexBlob>& blobs, ScanMode mode) {
  std::vector<HostCandidate> out;
  for (const auto& blob : blobs) {
    auto found = mode == ScanMode::RawScan ? scan_hosts_raw(blob)
                                           : scan_hosts_structured(extract_string_pool(blob), blob.entry_name);
    out.insert(out.end(), std::make_move_iterator(found.begin()), std::make_move_iterator(found.end()));
  }
  return out;
}

/// Host candidates from a pre-extracted host list: one string per line,
/// '#' starts a comment line. Each line goes through the hostname grammar,
/// so "https://ads.example.com/x" contributes "ads.example.com".
inline std::vector<HostCandidate> read_host_list(const std::filesystem::path& path) {
  std::istringstream in(read_file_text(path));
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') line.clear();
    lines.push_back(std::move(line));
  }
  return scan_hosts_structured(std::span<const std::string>(lines), path.filename().string(), ScanMode::HostList);
}

struct AppScan {
  AppProfile profile;
  std::vector<std::string> dex_entries;
  std::vector<std::string> warnings;
};

inline AppScan scan_apk(const std::filesystem::path& apk_path, const TrackerKB& kb, const ScanOptions& options,
                        std::string app_id = {}, const std::optional<std::filesystem::path>& manifest_xml = {}) {
  const auto archive = open_apk(apk_path);
  const auto blobs = extract_dex_files(archive);
  const auto candidates = extract_candidates(blobs, options.extraction);
  if (app_id.empty()) app_id = apk_path.stem().string();
  AppScan scan{profile_app(std::move(app_id), candidates, kb, options.match), {}, archive.warnings()};
  for (const auto& b : blobs) scan.dex_entries.push_back(b.entry_name);
  if (manifest_xml) scan.profile.permissions = extract_manifest_permissions(read_file_text(*manifest_xml));
  return scan;
}

inline nlohmann::json to_json(const AppProfile& p) {
  return {
      {"app_id", p.app_id},
      {"tracker_domains", p.tracker_domains},
      {"companies", p.companies},
      {"root_parents", p.root_parents},
      {"countries", p.countries},
      {"subsidiary_countries", p.subsidiary_countries},
      {"permissions", p.permissions},
      {"candidate_count", p.candidate_count},
      {"tracker_host_refs", p.tracker_host_refs},
      {"normalize_failures", p.normalize_failures},
  };
}

}  // namespace trackscan
