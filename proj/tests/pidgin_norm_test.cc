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

#include <gtest/gtest.h>

#include <random>

#include "homophone_suite.h"
#include "lm_checks.h"
#include "plkit/error.h"
#include "plkit/text_norm.h"
#include "test_util.h"

namespace plkit {
namespace {

using testing::ShippedData;

const VariantTable& Variants() {
  static const VariantTable table = VariantTable::FromFile(ShippedData("pidgin_variants.tsv"));
  return table;
}

const HomophoneSets& Homophones() {
  static const HomophoneSets sets = HomophoneSets::FromFile(ShippedData("pidgin_homophones.txt"));
  return sets;
}

TEST(VariantTableTest, ShippedTableLoads) {
  EXPECT_EQ(Variants().size(), 253u);
  EXPECT_EQ(Variants().max_phrase_words(), 3u);
}

TEST(VariantTableTest, EveryRowApplies) {
  for (const auto& [source, replacement] : Variants().entries()) {
    EXPECT_EQ(Variants().Apply(source), replacement) << source;
  }
}

TEST(VariantTableTest, Examples) {
  // The table also carries come -> com.
  EXPECT_EQ(Variants().Apply("they de come"), "dey dey com");
  EXPECT_EQ(Variants().Apply("they de"), "dey dey");
  EXPECT_EQ(Variants().Apply("plenty people dey"), "plenti pipo dey");
  EXPECT_EQ(Variants().Apply("throw way am"), "troway am");
  EXPECT_EQ(Variants().Apply("chewing gum sweet"), "chingum sweet");
  EXPECT_EQ(Variants().Apply(""), "");
  EXPECT_EQ(Variants().Apply("  wetin   dey "), "wetin dey");
}

TEST(VariantTableTest, IdempotentProperty) {
  std::vector<std::string> words = {"wetin", "dey", "am", "na", "go", "come"};
  for (const auto& [source, replacement] : Variants().entries()) {
    words.push_back(source);
    words.push_back(replacement);
  }
  std::mt19937_64 gen(12);
  for (int i = 0; i < 3000; ++i) {
    std::string text;
    const int n = static_cast<int>(gen() % 10);
    for (int k = 0; k < n; ++k) text += (k ? " " : "") + words[gen() % words.size()];
    const std::string once = Variants().Apply(text);
    ASSERT_EQ(Variants().Apply(once), once) << text;
  }
}

TEST(VariantTableTest, LongestMatchWins) {
  VariantTable t({{"a", "x"}, {"a b", "y"}, {"a b c", "z"}});
  EXPECT_EQ(t.Apply("a b c a b a"), "z y x");
}

TEST(VariantTableTest, RejectsBadTables) {
  EXPECT_THROW(VariantTable({{"a", "b"}, {"b", "c"}}), ValidationError);
  EXPECT_THROW(VariantTable({{"a", "b"}, {"x y", "p x y q"}}), ValidationError);
  EXPECT_THROW(VariantTable({{"a", "b"}, {"a", "c"}}), ValidationError);
  using Entries = std::vector<std::pair<std::string, std::string>>;
  EXPECT_THROW(VariantTable(Entries{{"", "b"}}), ValidationError);
  testing::TempDir dir;
  testing::WriteFile(dir / "v.tsv", "# header\nabof\tabove\nno tab here\n");
  try {
    VariantTable::FromFile(dir / "v.tsv");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
  EXPECT_THROW(VariantTable::FromFile(dir / "missing.tsv"), IoError);
}

TEST(HomophoneSetsTest, ShippedSetsLoad) {
  EXPECT_EQ(Homophones().sets().size(), 41u);
  EXPECT_EQ(Homophones().Candidates("dey"), (std::vector<std::string>{"dey", "day"}));
  EXPECT_TRUE(Homophones().Candidates("becoming").empty());
  EXPECT_TRUE(Homophones().Candidates("convex").empty());
  EXPECT_TRUE(Homophones().Candidates("wahala").empty());
}

TEST(HomophoneSetsTest, CandidatesAreUnionOfSets) {
  HomophoneSets sets({{"a", "b"}, {"b", "c"}, {"x", "y z"}});
  EXPECT_EQ(sets.Candidates("b"), (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(sets.Candidates("a"), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(sets.Candidates("x").empty());
  EXPECT_THROW(HomophoneSets({{"solo"}}), ValidationError);
  testing::TempDir dir;
  testing::WriteFile(dir / "h.txt", "a | b\nc |  | d\n");
  try {
    HomophoneSets::FromFile(dir / "h.txt");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
  }
}

TEST(HomophoneTest, PicksLmPreferredMember) {
  std::vector<std::string> corpus(100, "how you dey");
  const ArpaLm lm = TrainLm(TokenizedCorpus::FromLines(corpus), {3, {}, false});
  EXPECT_EQ(DisambiguateHomophones("how you day", Homophones(), lm, {}), "how you dey");
  EXPECT_EQ(DisambiguateHomophones("how you dey", Homophones(), lm, {}), "how you dey");
  EXPECT_EQ(DisambiguateHomophones("how you day", Homophones(), lm, {4, true}), "how you dey");
}

TEST(HomophoneTest, TieKeepsOriginal) {
  const ArpaLm lm = testing::UniformLm({"dey", "day", "how"});
  EXPECT_EQ(DisambiguateHomophones("how day", Homophones(), lm, {}), "how day");
  EXPECT_EQ(DisambiguateHomophones("how dey", Homophones(), lm, {}), "how dey");
}

TEST(HomophoneTest, AllShippedSetsResolve) {
  const auto suite = testing::BuildHomophoneSuite(Homophones());
  const ArpaLm lm = testing::HomophoneSuiteLm(suite);
  std::vector<bool> ok(Homophones().sets().size(), true);
  for (const auto& c : suite.cases) {
    const std::string out = DisambiguateHomophones(c.input, Homophones(), lm, {});
    EXPECT_EQ(out, c.expected) << c.input;
    if (out != c.expected) ok[c.set] = false;
  }
  EXPECT_EQ(std::count(ok.begin(), ok.end(), true), 41);
}

TEST(HomophoneTest, PreservesTokenCountAndOtherWordsProperty) {
  const auto suite = testing::BuildHomophoneSuite(Homophones());
  const ArpaLm lm = testing::HomophoneSuiteLm(suite);
  std::vector<std::string> words = {"wetin", "na", "go", "zqlaaaa", "zqrabab"};
  for (const auto& set : Homophones().sets()) {
    for (const auto& m : set) words.push_back(m);
  }
  std::mt19937_64 gen(5);
  for (int i = 0; i < 500; ++i) {
    std::vector<std::string> in;
    std::string text;
    const int n = static_cast<int>(gen() % 9);
    for (int k = 0; k < n; ++k) {
      const auto& w = words[gen() % words.size()];
      text += (k ? " " : "") + w;
    }
    in = SplitWords(text);
    const auto out = SplitWords(DisambiguateHomophones(text, Homophones(), lm, {}));
    ASSERT_EQ(out.size(), in.size()) << text;
    for (std::size_t k = 0; k < in.size(); ++k) {
      const auto& cands = Homophones().Candidates(in[k]);
      if (cands.empty()) {
        EXPECT_EQ(out[k], in[k]);
      } else {
        EXPECT_NE(std::find(cands.begin(), cands.end(), out[k]), cands.end());
      }
    }
  }
}

std::size_t Levenshtein(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] != b[j - 1])});
      diag = up;
    }
  }
  return row[b.size()];
}

TEST(AlignWordsTest, MinimalAndConsistentProperty) {
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  std::mt19937_64 gen(9);
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::string> ref, hyp;
    for (int k = static_cast<int>(gen() % 7); k > 0; --k) ref.push_back(vocab[gen() % 4]);
    for (int k = static_cast<int>(gen() % 7); k > 0; --k) hyp.push_back(vocab[gen() % 4]);
    const auto ops = AlignWords(ref, hyp);
    std::size_t i = 0, j = 0, edits = 0;
    for (EditOp op : ops) {
      switch (op) {
        case EditOp::kMatch: ASSERT_EQ(ref[i], hyp[j]); ++i; ++j; break;
        case EditOp::kSubstitute: ASSERT_NE(ref[i], hyp[j]); ++i; ++j; ++edits; break;
        case EditOp::kDelete: ++i; ++edits; break;
        case EditOp::kInsert: ++j; ++edits; break;
      }
    }
    EXPECT_EQ(i, ref.size());
    EXPECT_EQ(j, hyp.size());
    EXPECT_EQ(edits, Levenshtein(ref, hyp));
  }
}

TEST(AlignWordsTest, PrefersSubstitution) {
  EXPECT_EQ(AlignWords({"a"}, {"b"}), (std::vector<EditOp>{EditOp::kSubstitute}));
  EXPECT_EQ(AlignWords({}, {"b"}), (std::vector<EditOp>{EditOp::kInsert}));
  EXPECT_EQ(AlignWords({"a"}, {}), (std::vector<EditOp>{EditOp::kDelete}));
}

TEST(MineVariantsTest, Examples) {
  EXPECT_EQ(MineVariants({"di pipo dey"}, {"the people dey"}, 1),
            (std::vector<AlignmentPair>{{"di", "the", 1}, {"pipo", "people", 1}}));
  EXPECT_TRUE(MineVariants({"a b", "c"}, {"a b", "c"}, 1).empty());
  EXPECT_TRUE(MineVariants({"di pipo dey"}, {"the people dey"}, 2).empty());
  EXPECT_THROW(MineVariants({"a"}, {}, 1), ValidationError);
}

TEST(MineVariantsTest, SortedByCount) {
  const auto pairs = MineVariants({"pipo go", "pipo come", "di man", "x"},
                                  {"people go", "people come", "the man", "y"}, 1);
  ASSERT_EQ(pairs.size(), 3u);
  EXPECT_EQ(pairs[0], (AlignmentPair{"pipo", "people", 2}));
  EXPECT_EQ(pairs[1], (AlignmentPair{"di", "the", 1}));
  EXPECT_EQ(pairs[2], (AlignmentPair{"x", "y", 1}));
  for (const auto& p : pairs) EXPECT_NE(p.ref_word, p.hyp_word);
}

}  // namespace
}  // namespace plkit
