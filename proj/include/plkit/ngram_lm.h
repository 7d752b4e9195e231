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

#ifndef PLKIT_NGRAM_LM_H_
#define PLKIT_NGRAM_LM_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plkit {

using WordId = std::uint32_t;

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

// Log10 probability used for <s> (never predicted) and for <unk> in
// closed-vocabulary models.
inline constexpr double kBosLog10Prob = -99.0;
inline constexpr double kClosedUnkLog10Prob = -100.0;

struct TokenizedCorpus {
  std::vector<std::vector<std::string>> sentences;

  // Splits each line on ASCII whitespace. Blank lines are dropped.
  static TokenizedCorpus FromLines(const std::vector<std::string>& lines);
  static TokenizedCorpus FromFile(const std::filesystem::path& path);
  std::set<std::string> Vocabulary() const;
};

// Split on ASCII whitespace.
std::vector<std::string> SplitWords(std::string_view text);

struct NGramKeyHash {
  std::size_t operator()(const std::vector<WordId>& key) const noexcept;
};

struct NGramEntry {
  double log10_prob = 0.0;
  double log10_backoff = 0.0;
};

using NGramTable =
    std::unordered_map<std::vector<WordId>, NGramEntry, NGramKeyHash>;

// Up to order-1 most recent words, oldest first.
struct LmState {
  std::vector<WordId> context;
  bool operator==(const LmState&) const = default;
};

struct ScoredWord {
  double log10_prob;
  LmState next;
};

// Backoff N-gram model in ARPA form. Immutable once built; all queries are
// const and safe to run concurrently.
class ArpaLm {
 public:
  // tables[k-1] holds the k-grams. words gives the id -> string mapping;
  // <s>, </s> and <unk> must be present in it and in the unigram table.
  ArpaLm(std::vector<std::string> words, std::vector<NGramTable> tables);

  int order() const { return static_cast<int>(tables_.size()); }
  std::size_t vocab_size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  const NGramTable& table(int k) const { return tables_.at(k - 1); }

  // Id of word, or the <unk> id when the word is unknown.
  WordId Index(std::string_view word) const;
  bool Contains(std::string_view word) const;
  const std::string& Word(WordId id) const { return words_.at(id); }

  WordId bos() const { return bos_; }
  WordId eos() const { return eos_; }
  WordId unk() const { return unk_; }
  double unk_log10_prob() const;

  LmState BeginSentenceState() const;
  LmState NullState() const { return {}; }

  ScoredWord Score(const LmState& state, WordId word) const;
  ScoredWord Score(const LmState& state, std::string_view word) const {
    return Score(state, Index(word));
  }
  // log10 P(</s> | state).
  double EndSentence(const LmState& state) const;

  const NGramEntry* Find(std::span<const WordId> ngram) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
  std::vector<NGramTable> tables_;
  WordId bos_ = 0, eos_ = 0, unk_ = 0;
};

// Sum of log10 P(w_i | history) plus the end-of-sentence term, starting from
// the <s> context.
double SentenceLogProb(const ArpaLm& lm, const std::vector<std::string>& words);

// 10^(-sum / N) with N = words + one </s> per sentence.
double Perplexity(const ArpaLm& lm, const TokenizedCorpus& corpus);

struct TrainOptions {
  int order = 5;
  // Per-order minimum adjusted count; missing entries default to 1. Unigrams
  // are never pruned.
  std::vector<long> min_counts;
  // When set, <unk> receives no probability mass.
  bool closed_vocabulary = false;
};

// Interpolated modified Kneser-Ney estimation with three discounts per order.
ArpaLm TrainLm(const TokenizedCorpus& corpus, const TrainOptions& options);

void WriteArpa(const ArpaLm& lm, std::ostream& out);
void WriteArpa(const ArpaLm& lm, const std::filesystem::path& path);
ArpaLm ReadArpa(std::istream& in);
ArpaLm ReadArpa(const std::filesystem::path& path);

// Two-row table: a "Language" header row and a "Perplexity" row, values with
// two decimals, in the given column order.
std::string FormatPerplexityTable(
    const std::vector<std::pair<std::string, double>>& columns);

}  // namespace plkit

#endif  // PLKIT_NGRAM_LM_H_
