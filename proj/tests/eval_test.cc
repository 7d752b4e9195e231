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

#include "plkit/eval.h"

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "plkit/error.h"
#include "test_util.h"

namespace plkit {
namespace {

TEST(WerTest, Examples) {
  EXPECT_EQ(Wer("wetin dey happen", "wetin dey happen").wer(), 0.0);
  const auto one = Wer("a b c", "a x c");
  EXPECT_EQ(one, (WerBreakdown{1, 0, 0, 3}));
  EXPECT_DOUBLE_EQ(one.wer(), 1.0 / 3.0);
  const auto many = Wer("a", "x y z");
  EXPECT_EQ(many, (WerBreakdown{1, 2, 0, 1}));
  EXPECT_DOUBLE_EQ(many.wer(), 3.0);
  EXPECT_EQ(Wer("a b c", ""), (WerBreakdown{0, 0, 3, 3}));
  EXPECT_THROW(Wer("", "a"), ValidationError);
  EXPECT_THROW(Wer("?!", "a"), ValidationError);
}

TEST(WerTest, NormalizationToggle) {
  EXPECT_EQ(Wer("He has 2 cats.", "he has two cats").wer(), 0.0);
  EXPECT_EQ(Wer("He has 2 cats.", "he has two cats", false).errors(), 3);
  EXPECT_EQ(Wer("a b c", "a x c").ToJson(),
            R"({"substitutions":1,"insertions":0,"deletions":0,"ref_words":3,"wer":0.333333})");
}

std::string RandomSentence(std::mt19937_64& gen, const std::vector<std::string>& vocab,
                           int min_words) {
  std::string s;
  const int n = min_words + static_cast<int>(gen() % 6);
  for (int i = 0; i < n; ++i) s += (i ? " " : "") + vocab[gen() % vocab.size()];
  return s;
}

TEST(WerPropertyTest, IdentityAndSwapSymmetry) {
  const std::vector<std::string> vocab = {"a", "b", "c", "dey", "wetin"};
  std::mt19937_64 gen(13);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = RandomSentence(gen, vocab, 1);
    const std::string b = RandomSentence(gen, vocab, 1);
    EXPECT_EQ(Wer(a, a).errors(), 0);
    const auto ab = Wer(a, b), ba = Wer(b, a);
    EXPECT_EQ(ab.errors(), ba.errors());
    EXPECT_EQ(ab.insertions - ab.deletions, ba.deletions - ba.insertions);
    EXPECT_EQ(ab.ref_words - ab.deletions + ab.insertions, ba.ref_words);
  }
}

TEST(WerPropertyTest, PoolingIsRefWeightedMean) {
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  std::mt19937_64 gen(14);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<TextPair> pairs;
    for (int k = 1 + static_cast<int>(gen() % 6); k > 0; --k) {
      pairs.emplace_back(RandomSentence(gen, vocab, 1), RandomSentence(gen, vocab, 0));
    }
    double weighted = 0, words = 0;
    for (const auto& [r, h] : pairs) {
      const auto w = Wer(r, h);
      weighted += w.wer() * w.ref_words;
      words += w.ref_words;
    }
    EXPECT_NEAR(CorpusWer(pairs).wer(), weighted / words, 1e-12);
  }
}

TEST(CorpusWerTest, Examples) {
  EXPECT_EQ(CorpusWer({{"a b c", "a x c"}}), Wer("a b c", "a x c"));
  EXPECT_DOUBLE_EQ(CorpusWer({{"a b c", "a x c"}, {"a b c", "a x c"}}).wer(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(CorpusWer({{"a b", "a b"}, {"c d", "x y"}}).wer(), 0.5);
  EXPECT_DOUBLE_EQ(MeanUtteranceWer({{"a b", "a b"}, {"c d e f", "x y e f"}}), 0.25);
  EXPECT_THROW(CorpusWer({}), ValidationError);
}

TEST(MacroAverageTest, TableAverages) {
  EXPECT_EQ(FormatFixed(MacroAverage({19.36, 24.38, 33.86, 39.94, 12.94})), "26.10");
  EXPECT_EQ(FormatFixed(MacroAverage({25.3, 31.04, 38.68, 55.6, 32.44})), "36.61");
  EXPECT_EQ(MacroAverage({7.5}), 7.5);
  EXPECT_THROW(MacroAverage({}), ValidationError);
}

TEST(DiacriticWerTest, Examples) {
  const auto d = WerDiacriticModes({{"ọmọ", "omo"}});
  EXPECT_EQ(d.retained, (WerBreakdown{1, 0, 0, 1}));
  EXPECT_EQ(d.stripped.errors(), 0);
  const auto plain = WerDiacriticModes({{"wetin dey", "wetin day"}, {"how far", "how"}});
  EXPECT_EQ(plain.retained, plain.stripped);
}

TEST(DiacriticWerTest, StrippedNeverWorseProperty) {
  const std::vector<std::string> vocab = {"ọmọ", "omo", "ọmọ́", "ṣe", "se", "bá", "ba",
                                          "ẹ", "e", "kò", "ko", "ní", "ni"};
  std::mt19937_64 gen(15);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<TextPair> pairs;
    for (int k = 1 + static_cast<int>(gen() % 4); k > 0; --k) {
      pairs.emplace_back(RandomSentence(gen, vocab, 1), RandomSentence(gen, vocab, 0));
    }
    const auto d = WerDiacriticModes(pairs);
    EXPECT_LE(d.stripped.errors(), d.retained.errors());
    EXPECT_EQ(d.stripped.ref_words, d.retained.ref_words);
  }
}

TEST(LidTest, Examples) {
  std::vector<LidExample> ex;
  for (int i = 0; i < 50; ++i) ex.push_back({LanguageTag::kYo, LanguageTag::kYo});
  for (int i = 0; i < 97; ++i) ex.push_back({LanguageTag::kPd, LanguageTag::kPd});
  for (int i = 0; i < 3; ++i) ex.push_back({LanguageTag::kEn, LanguageTag::kPd});
  const LidReport r = LidF1(ex);
  EXPECT_EQ(FormatFixed(*r[LanguageTag::kYo].f1()), "100.00");
  EXPECT_NEAR(*r[LanguageTag::kPd].f1(), 100.0 * 194.0 / 197.0, 1e-12);
  EXPECT_EQ(FormatFixed(*r[LanguageTag::kPd].f1()), "98.48");
  EXPECT_EQ(*r[LanguageTag::kEn].f1(), 0.0);
  EXPECT_FALSE(r[LanguageTag::kHa].f1());
  EXPECT_EQ(r.ToCsv(), "lang,f1\nen,0.00\nig,NA\nyo,100.00\npd,98.48\nha,NA\n");
  EXPECT_THROW(LidF1({}), ValidationError);
}

TEST(LidTest, MissingPredictionIsFalseNegativeOnly) {
  const LidReport r = LidF1({{std::nullopt, LanguageTag::kHa}, {LanguageTag::kHa, LanguageTag::kHa}});
  EXPECT_EQ(r[LanguageTag::kHa].tp, 1);
  EXPECT_EQ(r[LanguageTag::kHa].fn, 1);
  EXPECT_EQ(r[LanguageTag::kHa].fp, 0);
}

TEST(LidTest, RangeAndPerfectPredictorProperty) {
  std::mt19937_64 gen(16);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<LidExample> ex, perfect;
    std::set<LanguageTag> present;
    for (int k = 1 + static_cast<int>(gen() % 30); k > 0; --k) {
      const LanguageTag truth = kAllLanguages[gen() % 5];
      std::optional<LanguageTag> pred;
      if (gen() % 6) pred = kAllLanguages[gen() % 5];
      ex.push_back({pred, truth});
      perfect.push_back({truth, truth});
      present.insert(truth);
    }
    const LidReport r = LidF1(ex), p = LidF1(perfect);
    for (LanguageTag lang : kAllLanguages) {
      if (auto f = r[lang].f1()) {
        EXPECT_GE(*f, 0.0);
        EXPECT_LE(*f, 100.0);
      }
      if (present.contains(lang)) {
        EXPECT_EQ(p[lang].f1(), 100.0);
      } else {
        EXPECT_FALSE(p[lang].f1());
      }
    }
  }
}

class SpeedSweepTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const std::vector<std::string> texts = {"one two three four five six seven eight nine ten",
                                            "a b c d e f g h i j",
                                            "wetin dey happen for here now now abeg make una talk"};
    for (std::size_t i = 0; i < texts.size(); ++i) {
      const std::string name = "u" + std::to_string(i) + ".wav";
      const Waveform w = testing::Sine(300.0 + 50.0 * i, 1.0 + 0.25 * i, 0.3);
      WriteWav(w, dir_ / name);
      manifest_.push_back({name, w.duration_s(), texts[i], LanguageTag::kPd, std::nullopt,
                           std::nullopt});
    }
  }

  testing::TempDir dir_;
  std::vector<ManifestEntry> manifest_;
};

// Corrupts a number of leading words proportional to how far the audio it
// was handed is from the original length.
std::string DegradingStub(const Waveform& audio, const ManifestEntry& entry, double) {
  const double ratio = entry.duration_s * audio.sample_rate / audio.samples.size();
  const long bad = std::lround(std::abs(ratio - 1.0) * 10.0);
  std::istringstream in(entry.text);
  std::string word, out;
  for (long i = 0; in >> word; ++i) out += (out.empty() ? "" : " ") + (i < bad ? "zzz" : word);
  return out;
}

TEST_F(SpeedSweepTest, ReferenceEchoScoresZero) {
  SweepOptions opt;
  opt.audio_root = dir_.path();
  const auto rows = SpeedSweep(
      manifest_, kSweepFactors,
      [](const Waveform&, const ManifestEntry& e, double) { return e.text; }, opt);
  ASSERT_EQ(rows.size(), 7u);
  for (const auto& r : rows) EXPECT_EQ(r.wer.errors(), 0);
  EXPECT_EQ(SweepCsv(rows),
            "factor,wer\n0.80,0.000000\n1.00,0.000000\n1.20,0.000000\n1.40,0.000000\n"
            "1.60,0.000000\n1.80,0.000000\n2.00,0.000000\n");
}

TEST_F(SpeedSweepTest, UnitFactorUsesOriginalAudio) {
  SweepOptions opt;
  opt.audio_root = dir_.path();
  const auto rows = SpeedSweep(manifest_, kSweepFactors, DegradingStub, opt);
  std::vector<TextPair> pairs;
  for (const auto& e : manifest_) {
    pairs.emplace_back(e.text, DegradingStub(ReadWav(dir_ / e.audio_path), e, 1.0));
  }
  EXPECT_EQ(rows[1].wer, CorpusWer(pairs));
  EXPECT_EQ(rows[1].wer.errors(), 0);
}

TEST_F(SpeedSweepTest, DegradingStubIsMonotoneInStretch) {
  SweepOptions opt;
  opt.audio_root = dir_.path();
  opt.jobs = 3;
  const auto rows = SpeedSweep(manifest_, kSweepFactors, DegradingStub, opt);
  std::multimap<double, double> by_distance;
  for (const auto& r : rows) by_distance.emplace(std::abs(r.factor - 1.0), r.wer.wer());
  double prev = -1.0;
  for (const auto& [dist, wer] : by_distance) {
    EXPECT_GE(wer, prev - 1e-12) << dist;
    prev = std::max(prev, wer);
  }
  EXPECT_GT(rows.back().wer.wer(), 0.0);
  opt.jobs = 1;
  const auto serial = SpeedSweep(manifest_, kSweepFactors, DegradingStub, opt);
  for (std::size_t i = 0; i < rows.size(); ++i) EXPECT_EQ(rows[i].wer, serial[i].wer);
}

TEST_F(SpeedSweepTest, MissingAudioListsEveryFile) {
  manifest_[0].audio_path = "gone_a.wav";
  manifest_[2].audio_path = "gone_b.wav";
  SweepOptions opt;
  opt.audio_root = dir_.path();
  int calls = 0;
  try {
    SpeedSweep(manifest_, {1.0},
               [&](const Waveform&, const ManifestEntry& e, double) {
                 ++calls;
                 return e.text;
               },
               opt);
    FAIL();
  } catch (const IoError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("gone_a.wav"), std::string::npos);
    EXPECT_NE(msg.find("gone_b.wav"), std::string::npos);
    EXPECT_EQ(msg.find("u1.wav"), std::string::npos);
  }
  EXPECT_EQ(calls, 0);
  EXPECT_THROW(SpeedSweep(manifest_, {3.0}, DegradingStub, opt), ValidationError);
}

}  // namespace
}  // namespace plkit
