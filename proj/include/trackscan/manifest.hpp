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

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "trackscan/error.hpp"

namespace trackscan {

namespace detail {

inline void collect_permissions(const boost::property_tree::ptree& node, std::vector<std::string>& out,
                                std::set<std::string>& seen) {
  for (const auto& [tag, child] : node) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag == "uses-permission") {
      if (auto name = child.get_optional<std::string>("<xmlattr>.android:name")) {
        if (seen.insert(*name).second) out.push_back(*name);
      }
    }
    collect_permissions(child, out, seen);
  }
}

}  // namespace detail

/// Permission names requested by a decoded (plain-text) AndroidManifest.xml,
/// deduplicated, in document order of first occurrence.
inline std::vector<std::string> extract_manifest_permissions(std::string_view manifest_xml) {
  boost::property_tree::ptree tree;
  std::istringstream in{std::string(manifest_xml)};
  try {
    boost::property_tree::read_xml(in, tree);
  } catch (const boost::property_tree::xml_parser_error& e) {
    throw Error(Errc::MalformedXml, e.message() + " at line " + std::to_string(e.line()));
  }
  std::vector<std::string> out;
  std::set<std::string> seen;
  detail::collect_permissions(tree, out, seen);
  return out;
}

}  // namespace trackscan
