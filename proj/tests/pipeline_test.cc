// Copyright 2026 The plkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "plkit/pipeline.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "json.hpp"
#include "plkit/error.h"
#include "test_util.h"

namespace plkit {
namespace {

ManifestEntry Entry(LanguageTag lang, std::optional<double> conf, std::string text = "x",
                    double duration = 1.0) {
  return {"a.wav", duration, std::move(text), lang, conf, std::nullopt};
}

FilterPolicy PdPolicy(double threshold) {
  FilterPolicy p = FilterPolicy::Permissive();
  p.thresholds[LanguageTag::kPd] = threshold;
  return p;
}

TEST(ConfidenceFilterTest, Examples) {
  auto r = FilterByConfidence({Entry(LanguageTag::kPd, 0.95)}, PdPolicy(0.9));
  EXPECT_EQ(r.kept.size(), 1u);
  r = FilterByConfidence({Entry(LanguageTag::kPd, 0.85)}, PdPolicy(0.9));
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].reason, "confidence");
  r = FilterByConfidence({Entry(LanguageTag::kPd, 0.9)}, PdPolicy(0.9));
  EXPECT_EQ(r.kept.size(), 1u);

  std::vector<ManifestEntry> all;
  for (LanguageTag lang : kAllLanguages) all.push_back(Entry(lang, 1e-6));
  EXPECT_EQ(FilterByConfidence(all, FilterPolicy::Permissive()).kept.size(), all.size());
}

TEST(ConfidenceFilterTest, UnscoredEntries) {
  FilterPolicy p = FilterPolicy::Permissive();
  auto r = FilterByConfidence({Entry(LanguageTag::kYo, std::nullopt)}, p);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].reason, "confidence");
  p.keep_unscored = true;
  EXPECT_EQ(FilterByConfidence({Entry(LanguageTag::kYo, std::nullopt)}, p).kept.size(), 1u);
}

TEST(ConfidenceFilterTest, Errors) {
  FilterPolicy p;
  p.thresholds[LanguageTag::kPd] = 0.5;
  try {
    FilterByConfidence({Entry(LanguageTag::kHa, 0.9)}, p);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_STREQ(e.what(), "no threshold for lang ha");
  }
  EXPECT_THROW(FilterByConfidence({}, PdPolicy(1.5)), ValidationError);
  EXPECT_THROW(FilterByConfidence({}, PdPolicy(-0.1)), ValidationError);
}

TEST(LanguageFilterTest, Examples) {
  auto r = FilterLanguageMismatch({Entry(LanguageTag::kIg, 1, "<|en|> the thing")});
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].reason, "language-mismatch");
  r = FilterLanguageMismatch({Entry(LanguageTag::kIg, 1, "<|ig|> kedu")});
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].text, "kedu");
  r = FilterLanguageMismatch({Entry(LanguageTag::kIg, 1, "kedu")});
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].text, "kedu");
  r = FilterLanguageMismatch({Entry(LanguageTag::kIg, 1, "kedu")}, true);
  ASSERT_EQ(r.dropped.size(), 1u);
  EXPECT_EQ(r.dropped[0].reason, "untagged");
}

std::vector<ManifestEntry> RandomEntries(std::mt19937_64& gen, int n) {
  const std::vector<std::string> texts = {"<|pd|> wetin dey", "<|en|> the thing", "kedu",
                                          "<|yo|> bawo", "<|ha|> sannu", "<|ig|> kedu", ""};
  std::vector<ManifestEntry> out;
  for (int i = 0; i < n; ++i) {
    std::optional<double> conf;
    if (gen() % 5) conf = static_cast<double>(gen() % 1000 + 1) / 1000.0;
    out.push_back(Entry(kAllLanguages[gen() % 5], conf, texts[gen() % texts.size()],
                        static_cast<double>(gen() % 20000) / 1000.0));
    out.back().audio_path = std::to_string(i) + ".wav";
  }
  return out;
}

FilterPolicy RandomPolicy(std::mt19937_64& gen) {
  FilterPolicy p;
  for (LanguageTag lang : kAllLanguages) {
    p.thresholds[lang] = static_cast<double>(gen() % 1001) / 1000.0;
  }
  p.keep_unscored = gen() % 2;
  return p;
}

TEST(FilterPropertyTest, FiltersCommute) {
  std::mt19937_64 gen(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto entries = RandomEntries(gen, static_cast<int>(gen() % 30));
    const auto policy = RandomPolicy(gen);
    const bool untagged = gen() % 2;
    const auto a =
        FilterLanguageMismatch(FilterByConfidence(entries, policy).kept, untagged).kept;
    const auto b =
        FilterByConfidence(FilterLanguageMismatch(entries, untagged).kept, policy).kept;
    EXPECT_EQ(a, b);
  }
}

TEST(FilterPropertyTest, StageIsPartitionOfInput) {
  std::mt19937_64 gen(32);
  for (int trial = 0; trial < 200; ++trial) {
    const auto entries = RandomEntries(gen, static_cast<int>(gen() % 30));
    auto policy = RandomPolicy(gen);
    policy.drop_untagged = gen() % 2;
    policy.drop_mismatched = gen() % 2;
    const auto r = RunStage(entries, policy);
    ASSERT_EQ(r.kept.size() + r.dropped.size(), entries.size());
    std::vector<std::string> seen;
    for (const auto& e : r.kept) seen.push_back(e.audio_path);
    for (const auto& d : r.dropped) {
      seen.push_back(d.entry.audio_path);
      EXPECT_EQ(d.entry.text, entries[std::stoul(d.entry.audio_path)].text);
    }
    std::sort(seen.begin(), seen.end());
    EXPECT_EQ(std::adjacent_find(seen.begin(), seen.end()), seen.end());

    long kept = 0, dropped = 0;
    for (LanguageTag lang : kAllLanguages) {
      double hours = 0;
      for (const auto& e : r.kept) {
        if (e.lang == lang) hours += e.duration_s / 3600.0;
      }
      EXPECT_NEAR(r.report[lang].hours, hours, 1e-12);
      kept += r.report[lang].kept;
      dropped += r.report[lang].dropped_confidence + r.report[lang].dropped_language;
    }
    EXPECT_EQ(kept, static_cast<long>(r.kept.size()));
    EXPECT_EQ(dropped, static_cast<long>(r.dropped.size()));
  }
}

TEST(RunStageTest, EmptyInputGivesZeroedReport) {
  const auto r = RunStage({}, FilterPolicy::Permissive());
  EXPECT_TRUE(r.kept.empty());
  const auto doc = nlohmann::json::parse(r.report.ToJson());
  EXPECT_EQ(doc["schema_version"], 1);
  ASSERT_EQ(doc["languages"].size(), 5u);
  for (const auto& [code, stats] : doc["languages"].items()) {
    EXPECT_EQ(stats["kept"], 0) << code;
    EXPECT_EQ(stats["dropped_confidence"], 0);
    EXPECT_EQ(stats["dropped_language"], 0);
    EXPECT_EQ(stats["hours"], 0.0);
  }
}

TEST(RunStageTest, MixedInputReport) {
  FilterPolicy p = FilterPolicy::Permissive();
  p.thresholds[LanguageTag::kPd] = 0.9;
  const auto r = RunStage({Entry(LanguageTag::kPd, 0.95, "<|pd|> wetin dey", 1800),
                           Entry(LanguageTag::kPd, 0.5, "<|pd|> na so", 60),
                           Entry(LanguageTag::kIg, 0.99, "<|en|> the thing", 30),
                           Entry(LanguageTag::kIg, 0.99, "<|ig|> kedu", 3600)},
                          p);
  ASSERT_EQ(r.kept.size(), 2u);
  EXPECT_EQ(r.kept[0].text, "wetin dey");
  EXPECT_EQ(r.kept[1].text, "kedu");
  EXPECT_EQ(r.report.ToJson(),
            "{\n"
            "  \"schema_version\": 1,\n"
            "  \"languages\": {\n"
            "    \"en\": {\n      \"kept\": 0,\n      \"dropped_confidence\": 0,\n"
            "      \"dropped_language\": 0,\n      \"hours\": 0.0\n    },\n"
            "    \"ig\": {\n      \"kept\": 1,\n      \"dropped_confidence\": 0,\n"
            "      \"dropped_language\": 1,\n      \"hours\": 1.0\n    },\n"
            "    \"yo\": {\n      \"kept\": 0,\n      \"dropped_confidence\": 0,\n"
            "      \"dropped_language\": 0,\n      \"hours\": 0.0\n    },\n"
            "    \"pd\": {\n      \"kept\": 1,\n      \"dropped_confidence\": 1,\n"
            "      \"dropped_language\": 0,\n      \"hours\": 0.5\n    },\n"
            "    \"ha\": {\n      \"kept\": 0,\n      \"dropped_confidence\": 0,\n"
            "      \"dropped_language\": 0,\n      \"hours\": 0.0\n    }\n"
            "  }\n"
            "}\n");
}

TEST(PolicyFileTest, ParsesAndOverrides) {
  testing::TempDir dir;
  testing::WriteFile(dir / "p.txt",
                     "# thresholds\npd=0.8\nyo = 0.25\ndrop_untagged=true\nkeep_unscored=1\n");
  const auto p = FilterPolicy::FromFile(dir / "p.txt");
  EXPECT_DOUBLE_EQ(p.thresholds.at(LanguageTag::kPd), 0.8);
  EXPECT_DOUBLE_EQ(p.thresholds.at(LanguageTag::kYo), 0.25);
  EXPECT_DOUBLE_EQ(p.thresholds.at(LanguageTag::kHa), 0.0);
  EXPECT_TRUE(p.drop_untagged);
  EXPECT_TRUE(p.drop_mismatched);
  EXPECT_TRUE(p.keep_unscored);

  testing::WriteFile(dir / "bad.txt", "pd=0.8\nfr=0.1\n");
  EXPECT_THROW(FilterPolicy::FromFile(dir / "bad.txt"), ParseError);
  testing::WriteFile(dir / "bad2.txt", "pd\n");
  try {
    FilterPolicy::FromFile(dir / "bad2.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
  EXPECT_THROW(FilterPolicy::FromFile(dir / "none.txt"), IoError);
}

TEST(TemperatureTest, Examples) {
  auto w = TemperatureWeights({{{"a", 900}, {"b", 100}}, 1.0});
  EXPECT_NEAR(w["a"], 0.9, 1e-12);
  EXPECT_NEAR(w["b"], 0.1, 1e-12);
  w = TemperatureWeights({{{"a", 900}, {"b", 100}}, 1e6});
  EXPECT_LT(std::abs(w["a"] - 0.5), 1e-3);
  EXPECT_LT(std::abs(w["b"] - 0.5), 1e-3);
  // 40-digit evaluation of 0.9^0.05 / (0.9^0.05 + 0.1^0.05).
  w = TemperatureWeights({{{"a", 900}, {"b", 100}}, 20.0});
  EXPECT_NEAR(w["a"], 0.5274377161638805, 1e-12);
  w = TemperatureWeights({{{"x", 3}, {"y", 2}, {"z", 1}}, 5.0});
  EXPECT_NEAR(w["x"], 0.3669927494417608, 1e-12);
  EXPECT_NEAR(w["y"], 0.3384069177166790, 1e-12);
  EXPECT_NEAR(w["z"], 0.2946003328415601, 1e-12);
  w = TemperatureWeights({{{"x", 5}, {"y", 0}}, 20.0});
  EXPECT_DOUBLE_EQ(w["x"], 1.0);
  EXPECT_DOUBLE_EQ(w["y"], 0.0);
}

TEST(TemperatureTest, Errors) {
  EXPECT_THROW(TemperatureWeights({{{"a", 0}, {"b", 0}}, 20}), ValidationError);
  EXPECT_THROW(TemperatureWeights({{}, 20}), ValidationError);
  EXPECT_THROW(TemperatureWeights({{{"a", 1}}, 0}), ValidationError);
  EXPECT_THROW(TemperatureWeights({{{"a", 1}}, -1}), ValidationError);
  EXPECT_THROW(TemperatureWeights({{{"a", -1}, {"b", 2}}, 1}), ValidationError);
}

TEST(TemperatureTest, SumMonotoneAndFlatteningProperty) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> count(1.0, 1e5), temp(0.5, 50.0);
  for (int trial = 0; trial < 500; ++trial) {
    MixSpec spec;
    const int k = 2 + static_cast<int>(gen() % 5);
    for (int i = 0; i < k; ++i) spec.counts["l" + std::to_string(i)] = count(gen);
    spec.temperature = temp(gen);
    const auto w = TemperatureWeights(spec);
    double sum = 0;
    for (const auto& [key, p] : w) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-12);
    for (const auto& [a, na] : spec.counts) {
      for (const auto& [b, nb] : spec.counts) {
        if (na < nb) {
          EXPECT_LT(w.at(a), w.at(b));
        }
      }
    }
    auto spread = [](const std::map<std::string, double>& m) {
      auto [lo, hi] = std::minmax_element(m.begin(), m.end(), [](const auto& x, const auto& y) {
        return x.second < y.second;
      });
      return hi->second - lo->second;
    };
    MixSpec hotter = spec;
    hotter.temperature *= 1.5;
    EXPECT_LT(spread(TemperatureWeights(hotter)), spread(w));
  }
}

TEST(LanguageCountsTest, DurationOrUtterances) {
  const std::vector<ManifestEntry> entries = {Entry(LanguageTag::kPd, 1, "x", 2.5),
                                              Entry(LanguageTag::kPd, 1, "x", 1.5),
                                              Entry(LanguageTag::kYo, 1, "x", 4.0)};
  EXPECT_EQ(LanguageCounts(entries), (std::map<std::string, double>{{"pd", 4.0}, {"yo", 4.0}}));
  EXPECT_EQ(LanguageCounts(entries, false),
            (std::map<std::string, double>{{"pd", 2.0}, {"yo", 1.0}}));
}

}  // namespace
}  // namespace plkit
