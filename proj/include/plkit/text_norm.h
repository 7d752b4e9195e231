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

#ifndef PLKIT_TEXT_NORM_H_
#define PLKIT_TEXT_NORM_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "plkit/ngram_lm.h"

namespace plkit {

// English cardinal words for 0 .. 10^15-1, hyphenless, no "and":
// 21 -> "twenty one", 1005 -> "one thousand five".
std::string CardinalWords(std::uint64_t value);

// Spells a run of ASCII digits. Runs with a leading zero, or too long for
// CardinalWords, are spelled digit by digit.
std::string SpellDigitRun(std::string_view digits);

// Lowercase (Unicode-aware), drop punctuation and symbols except ' and -,
// optionally spell digit runs, collapse whitespace, trim. Output is NFC.
std::string Preprocess(std::string_view text, bool spell_digits);

// NFD, drop combining marks, NFC.
std::string StripDiacritics(std::string_view text);

// Drops duplicate lines and lines matching a held-out line, comparing
// Preprocess(line, false). Surviving lines keep their original form.
std::vector<std::string> DedupAndFilter(const std::vector<std::string>& corpus,
                                        const std::vector<std::string>& heldout);

// Source phrase (1..3 words) -> replacement, applied with left-to-right
// longest match.
class VariantTable {
 public:
  VariantTable() = default;
  // Throws ValidationError on duplicate sources or if a replacement word
  // sequence contains a source phrase (the table must be closed).
  explicit VariantTable(std::vector<std::pair<std::string, std::string>> entries);

  static VariantTable FromFile(const std::filesystem::path& path);

  const std::vector<std::pair<std::string, std::string>>& entries() const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }
  std::size_t max_phrase_words() const { return max_words_; }

  std::string Apply(std::string_view text) const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t max_words_ = 0;
};

// Sets of confusable words with distinct meanings. Multi-word members are
// kept but never matched or proposed.
class HomophoneSets {
 public:
  HomophoneSets() = default;
  explicit HomophoneSets(std::vector<std::vector<std::string>> sets);

  // One set per line, members separated by " | ", '#' comments.
  static HomophoneSets FromFile(const std::filesystem::path& path);

  const std::vector<std::vector<std::string>>& sets() const { return sets_; }
  // Single-word alternatives for word (union of every set containing it,
  // word itself included, first-seen order). Empty if word is in no set.
  const std::vector<std::string>& Candidates(std::string_view word) const;

 private:
  std::vector<std::vector<std::string>> sets_;
  std::unordered_map<std::string, std::vector<std::string>> candidates_;
};

struct HomophoneOptions {
  int window = 4;            // words of context on each side
  bool full_sentence = false;  // score the whole sentence instead
};

// Left to right, each token with alternatives is replaced by the candidate
// with the highest LM score in its context; ties keep the original.
std::string DisambiguateHomophones(std::string_view text, const HomophoneSets& sets,
                                   const ArpaLm& lm, const HomophoneOptions& options);

struct AlignmentPair {
  std::string ref_word;
  std::string hyp_word;
  long count = 0;
  bool operator==(const AlignmentPair&) const = default;
};

// Word substitutions from a minimal edit alignment of each ref/hyp pair,
// aggregated, filtered at min_count, sorted by count then words.
std::vector<AlignmentPair> MineVariants(const std::vector<std::string>& refs,
                                        const std::vector<std::string>& hyps,
                                        long min_count);

enum class EditOp { kMatch, kSubstitute, kInsert, kDelete };

// Minimal unit-cost word alignment. Among minimal alignments, the one with
// the most substitutions (fewest insertions + deletions) is returned.
std::vector<EditOp> AlignWords(const std::vector<std::string>& ref,
                               const std::vector<std::string>& hyp);

}  // namespace plkit

#endif  // PLKIT_TEXT_NORM_H_
