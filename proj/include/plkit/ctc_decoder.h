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

#ifndef PLKIT_CTC_DECODER_H_
#define PLKIT_CTC_DECODER_H_

#include <limits>
#include <string>
#include <vector>

#include "plkit/emissions.h"
#include "plkit/lexicon.h"
#include "plkit/manifest.h"
#include "plkit/ngram_lm.h"

namespace plkit {

struct DecoderConfig {
  int beam_size = 100;
  double lm_weight = 0.5;   // alpha, applied to natural-log LM scores
  double word_bonus = 1.0;  // beta, added per completed word
  bool use_lexicon = false;
  // Tokens whose per-frame log-probability falls below this are not expanded.
  double prune_log_threshold = -std::numeric_limits<double>::infinity();
  int nbest = 1;

  void Validate() const;
};

struct Hypothesis {
  std::string text;
  std::vector<int> tokens;  // collapsed label sequence, blanks removed
  double acoustic_logprob = 0.0;  // natural log, summed over alignments
  double lm_log10prob = 0.0;
  double combined_score = 0.0;
  int token_count = 0;
  int word_count = 0;  // LM-scored words; tag tokens excluded
  double confidence = 0.0;
};

// Renders a collapsed token sequence as text. "▁", " " and "|" separate
// words, a leading "▁" on a token starts a new word, and <|xx|> tag tokens
// stand as words of their own.
std::string TokensToText(const std::vector<std::string>& vocab,
                         const std::vector<int>& tokens);

// Per-frame argmax, collapse repeats, drop blanks.
std::string GreedyDecode(const EmissionMatrix& em);
std::vector<int> GreedyTokens(const EmissionMatrix& em);

// CTC prefix beam search with optional lexicon constraint and word-level
// N-gram shallow fusion:
//   combined = acoustic + lm_weight * ln(10) * lm_log10 + word_bonus * words
// The LM scores each word as it completes and adds </s> at the end. Returns
// up to cfg.nbest hypotheses with distinct texts, best first, ties broken by
// text.
std::vector<Hypothesis> BeamSearch(const EmissionMatrix& em, const DecoderConfig& cfg,
                                   const ArpaLm* lm, const Lexicon* lexicon);

struct LanguageSelection {
  Hypothesis hypothesis;
  bool fallback = false;  // no hypothesis carried the wanted tag
};

// Highest-ranked hypothesis whose leading tag is `want`; else the top-1 with
// fallback set. Throws ValidationError on an empty list.
LanguageSelection SelectLanguageHypothesis(const std::vector<Hypothesis>& nbest,
                                           LanguageTag want);

}  // namespace plkit

#endif  // PLKIT_CTC_DECODER_H_
