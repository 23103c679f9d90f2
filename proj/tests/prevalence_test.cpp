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

#include <gtest/gtest.h>

#include <random>

#include "expect_errc.hpp"
#include "random_kb.hpp"
#include "test_support.hpp"
#include "trackscan/genres.hpp"
#include "trackscan/prevalence.hpp"

namespace trackscan {
namespace {

const TrackerKB& seed() {
  static const TrackerKB kb = load_kb_dir(tsup::seed_kb_dir());
  return kb;
}

AppProfile profile(const std::string& id, std::initializer_list<const char*> hosts) {
  std::vector<HostCandidate> c;
  for (const char* h : hosts) c.push_back({h, "classes.dex", c.size(), ScanMode::StringPool});
  return profile_app(id, c, seed());
}

TEST(Prevalence, HandCountedAlphabetRow) {
  const std::vector<AppProfile> apps = {profile("a", {"doubleclick.net"}), profile("b", {"google.com"}),
                                        profile("c", {"flurry.com"})};
  const auto t = prevalence_table(apps, PrevalenceLevel::RootParent);
  const auto* row = t.find("alphabet");
  ASSERT_NE(row, nullptr);
  EXPECT_EQ(row->apps_present, 2u);
  EXPECT_DOUBLE_EQ(round2(row->pct_apps), 66.67);
  EXPECT_EQ(t.corpus_size, 3u);
  EXPECT_EQ(t.rows.front().entity, "alphabet");
}

TEST(Prevalence, AppCountsOncePerEntity) {
  const std::vector<AppProfile> apps = {profile("a", {"doubleclick.net", "google.com", "ads.google.com"})};
  const auto roots = prevalence_table(apps, PrevalenceLevel::RootParent);
  ASSERT_EQ(roots.rows.size(), 1u);
  EXPECT_EQ(roots.rows[0].apps_present, 1u);
  EXPECT_EQ(prevalence_table(apps, PrevalenceLevel::Subsidiary).rows.size(), 2u);
}

TEST(Prevalence, EmptyCorpus) {
  EXPECT_TRUE(prevalence_table(std::vector<AppProfile>{}, PrevalenceLevel::Subsidiary).rows.empty());
  EXPECT_TRUE(prevalence_table(std::vector<AppProfile>{}, PrevalenceLevel::Country).rows.empty());
}

TEST(Prevalence, CountryLevels) {
  const std::vector<AppProfile> apps = {profile("a", {"adcolony.com"}), profile("b", {"umeng.com"}),
                                        profile("c", {})};
  const auto with_ancestors = prevalence_table(apps, PrevalenceLevel::Country);
  const auto owners_only = prevalence_table(apps, PrevalenceLevel::SubsidiaryCountry);
  ASSERT_NE(with_ancestors.find("NO"), nullptr);
  EXPECT_EQ(owners_only.find("NO"), nullptr);
  EXPECT_EQ(with_ancestors.find("US")->apps_present, 1u);
  EXPECT_EQ(with_ancestors.find("CN")->apps_present, 1u);
}

TEST(Prevalence, RowOrderAndBounds) {
  std::mt19937_64 rng(50);
  for (int round = 0; round < 200; ++round) {
    const auto kb = tsup::random_kb(rng, 1 + rng() % 12, 1 + rng() % 25);
    std::vector<AppProfile> apps;
    const std::size_t n = rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      apps.push_back(profile_app("app" + std::to_string(i), tsup::random_candidates(rng, rng() % 12, 25), kb));
    }
    for (auto level : {PrevalenceLevel::Subsidiary, PrevalenceLevel::RootParent, PrevalenceLevel::Country,
                       PrevalenceLevel::SubsidiaryCountry}) {
      const auto t = prevalence_table(apps, level);
      for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const auto& r = t.rows[k];
        EXPECT_LE(r.apps_present, n);
        EXPECT_GE(r.apps_present, 1u);
        EXPECT_DOUBLE_EQ(r.pct_apps, percent(r.apps_present, n));
        const auto brute = std::count_if(apps.begin(), apps.end(),
                                         [&](const AppProfile& p) { return entities_at(p, level).contains(r.entity); });
        EXPECT_EQ(static_cast<std::size_t>(brute), r.apps_present);
        if (k > 0) {
          const auto& prev = t.rows[k - 1];
          EXPECT_TRUE(prev.pct_apps > r.pct_apps || (prev.pct_apps == r.pct_apps && prev.entity < r.entity));
        }
      }
    }
  }
}

TEST(Prevalence, RootAtLeastEverySubsidiary) {
  std::mt19937_64 rng(51);
  for (int round = 0; round < 200; ++round) {
    const auto kb = tsup::random_kb(rng, 1 + rng() % 12, 1 + rng() % 25);
    std::vector<AppProfile> apps;
    for (std::size_t i = 0, n = 1 + rng() % 30; i < n; ++i) {
      apps.push_back(profile_app("app" + std::to_string(i), tsup::random_candidates(rng, rng() % 12, 25), kb));
    }
    const auto subs = prevalence_table(apps, PrevalenceLevel::Subsidiary);
    const auto roots = prevalence_table(apps, PrevalenceLevel::RootParent);
    for (const auto& s : subs.rows) {
      const auto* r = roots.find(root_parent(kb, s.entity));
      ASSERT_NE(r, nullptr);
      EXPECT_GE(r->pct_apps, s.pct_apps);
    }
  }
}

TEST(Ownership, RowsGroupSubsidiariesUnderRoots) {
  const std::vector<AppProfile> apps = {profile("a", {"doubleclick.net", "google.com"}), profile("b", {"google.com"}),
                                        profile("c", {"flurry.com", "yahoo.com"})};
  const auto rows = ownership_rows(prevalence_table(apps, PrevalenceLevel::Subsidiary),
                                   prevalence_table(apps, PrevalenceLevel::RootParent), seed());
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].root_parent, "alphabet");
  EXPECT_EQ(rows[0].subsidiary, "google");
  EXPECT_EQ(rows[0].root_apps, 2u);
  EXPECT_EQ(rows[0].subsidiary_apps, 2u);
  EXPECT_EQ(rows[1].subsidiary, "doubleclick");
  EXPECT_EQ(rows[2].root_parent, "verizon");
  EXPECT_EQ(rows[2].subsidiary, "flurry");
  EXPECT_EQ(rows[3].subsidiary, "yahoo");
  EXPECT_EQ(rows[3].country, "US");
}

TEST(SuperGenre, ShippedMapping) {
  const auto map = GenreMap::load(tsup::genres_csv());
  EXPECT_EQ(super_genre_map("Casino Games", map).name, "Games & Entertainment");
  for (const char* g : {"Comics", "Entertainment", "Sports", "Video Players", "Puzzle Games", "Action Games"}) {
    const auto sg = super_genre_map(g, map);
    EXPECT_EQ(sg.name, "Games & Entertainment") << g;
    EXPECT_FALSE(sg.warning.has_value());
  }
}

TEST(SuperGenre, UnknownGoesToOtherWithWarning) {
  const auto sg = super_genre_map("Zzz", GenreMap::load(tsup::genres_csv()));
  EXPECT_EQ(sg.name, "Other");
  ASSERT_TRUE(sg.warning.has_value());
  EXPECT_NE(sg.warning->find("Zzz"), std::string::npos);
}

TEST(SuperGenre, FamilyFlagOverrides) {
  const auto sg = super_genre_map("Casino Games", GenreMap::load(tsup::genres_csv()), true);
  EXPECT_EQ(sg.name, "Family");
  EXPECT_EQ(super_genre_map("Zzz", GenreMap{}, true).name, "Family");
}

TEST(SuperGenre, MappingFileErrors) {
  EXPECT_ERRC(GenreMap::parse("genre,group\nA,B\n", "g.csv"), Errc::ParseError);
  EXPECT_ERRC(GenreMap::parse("genre,super_genre\nA,B\nA,C\n", "g.csv"), Errc::ParseError);
  EXPECT_ERRC(GenreMap::parse("genre,super_genre\nA\n", "g.csv"), Errc::ParseError);
  EXPECT_EQ(GenreMap::parse("# comment\ngenre,super_genre\n\"Music & Audio\",Music\n").lookup("Music & Audio").name,
            "Music");
}

}  // namespace
}  // namespace trackscan
