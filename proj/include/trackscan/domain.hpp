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

// Registrable-domain normalization against a public suffix list.

#pragma once

#include <compare>
#include <filesystem>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trackscan/byte_source.hpp"
#include "trackscan/error.hpp"
#include "trackscan/host_scan.hpp"

namespace trackscan {

/// A public suffix plus exactly one preceding label, lowercase.
struct NormalizedDomain {
  std::string registrable;

  friend auto operator<=>(const NormalizedDomain&, const NormalizedDomain&) = default;
};

// Snapshot subset of the public suffix list, used when no list file is
// supplied. The shipped data/seed_kb/public_suffix.txt carries the same rules.
inline constexpr std::string_view kBuiltinSuffixes = R"(# ICANN generic
com
net
org
info
biz
io
co
me
tv
app
dev
mobi
# country codes
us
uk
co.uk
org.uk
ac.uk
gov.uk
ltd.uk
plc.uk
de
fr
it
es
nl
ch
at
co.at
or.at
se
no
dk
fi
ie
pl
ru
com.ru
cn
com.cn
net.cn
org.cn
hk
com.hk
tw
com.tw
jp
co.jp
ne.jp
or.jp
kr
co.kr
or.kr
sg
com.sg
in
co.in
au
com.au
net.au
nz
co.nz
ca
br
com.br
mx
com.mx
il
co.il
za
co.za
tr
com.tr
# wildcard and exception rules
*.ck
!www.ck
)";

/// Public suffix rules, including wildcard ("*.ck") and exception
/// ("!www.ck") rules. Hosts that match no rule fall back to their final
/// label as the suffix.
class SuffixList {
 public:
  SuffixList() = default;

  static SuffixList parse(std::string_view text) {
    SuffixList list;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      auto last = line.find_first_of(" \t\r", first);
      std::string rule = detail::lowercase(line.substr(first, last == std::string::npos ? last : last - first));
      if (rule.empty() || rule[0] == '#' || rule.starts_with("//")) continue;
      if (rule[0] == '!') {
        list.exceptions_.insert(rule.substr(1));
      } else if (rule.starts_with("*.")) {
        list.wildcards_.insert(rule.substr(2));
      } else {
        list.rules_.insert(rule);
      }
    }
    return list;
  }

  static SuffixList load(const std::filesystem::path& path) { return parse(read_file_text(path)); }

  static const SuffixList& builtin() {
    static const SuffixList list = parse(kBuiltinSuffixes);
    return list;
  }

  bool empty() const { return rules_.empty() && wildcards_.empty() && exceptions_.empty(); }
  std::size_t size() const { return rules_.size() + wildcards_.size() + exceptions_.size(); }

  /// Number of trailing labels of `host` that form its public suffix.
  std::size_t suffix_labels(const std::vector<std::string_view>& labels) const {
    std::size_t best = 1;
    for (std::size_t k = 1; k <= labels.size(); ++k) {
      const std::string tail = join_tail(labels, k);
      if (exceptions_.contains(tail)) return k - 1;
      if (rules_.contains(tail)) best = std::max(best, k);
      if (k < labels.size() && wildcards_.contains(tail)) best = std::max(best, k + 1);
    }
    return best;
  }

  /// Serializes rules in sorted order (one per line).
  std::string to_text() const {
    std::string out;
    for (const auto& r : rules_) out += r + "\n";
    for (const auto& r : wildcards_) out += "*." + r + "\n";
    for (const auto& r : exceptions_) out += "!" + r + "\n";
    return out;
  }

  friend bool operator==(const SuffixList&, const SuffixList&) = default;

 private:
  static std::string join_tail(const std::vector<std::string_view>& labels, std::size_t k) {
    std::string out;
    for (std::size_t i = labels.size() - k; i < labels.size(); ++i) {
      if (!out.empty()) out += '.';
      out += labels[i];
    }
    return out;
  }

  std::set<std::string> rules_;
  std::set<std::string> wildcards_;
  std::set<std::string> exceptions_;
};

namespace detail {

inline std::vector<std::string_view> split_labels(std::string_view host) {
  std::vector<std::string_view> labels;
  std::size_t start = 0;
  while (true) {
    auto dot = host.find('.', start);
    labels.push_back(host.substr(start, dot == std::string_view::npos ? dot : dot - start));
    if (dot == std::string_view::npos) break;
    start = dot + 1;
  }
  return labels;
}

}  // namespace detail

/// Keeps the longest matching public suffix plus one preceding label:
/// "subdomain.example.com" -> "example.com", "a.b.foo.co.uk" -> "foo.co.uk".
inline NormalizedDomain normalize_host(std::string_view raw, const SuffixList& suffixes = SuffixList::builtin()) {
  const std::string host = detail::lowercase(raw);
  const auto labels = detail::split_labels(host);
  for (auto label : labels) {
    if (label.empty()) throw Error(Errc::NoRegistrableDomain, "empty label in '" + host + "'");
  }
  const std::size_t k = suffixes.suffix_labels(labels);
  if (labels.size() <= k) throw Error(Errc::NoRegistrableDomain, "'" + host + "' is a bare public suffix");
  std::string out;
  for (std::size_t i = labels.size() - k - 1; i < labels.size(); ++i) {
    if (!out.empty()) out += '.';
    out += labels[i];
  }
  return {out};
}

}  // namespace trackscan
