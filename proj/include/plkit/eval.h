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

#ifndef PLKIT_EVAL_H_
#define PLKIT_EVAL_H_

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plkit/audio.h"
#include "plkit/manifest.h"

namespace plkit {

struct WerBreakdown {
  long substitutions = 0;
  long insertions = 0;
  long deletions = 0;
  long ref_words = 0;

  long errors() const { return substitutions + insertions + deletions; }
  double wer() const { return static_cast<double>(errors()) / static_cast<double>(ref_words); }
  WerBreakdown& operator+=(const WerBreakdown& other);
  std::string ToJson() const;
  bool operator==(const WerBreakdown&) const = default;
};

using TextPair = std::pair<std::string, std::string>;  // (ref, hyp)

// Words are Preprocess(text, spell_digits=true) split on spaces, unless
// normalize is false, in which case the raw text is split on whitespace.
// Throws ValidationError on an empty reference.
WerBreakdown Wer(std::string_view ref, std::string_view hyp, bool normalize = true);
WerBreakdown CorpusWer(const std::vector<TextPair>& pairs, bool normalize = true);
double MeanUtteranceWer(const std::vector<TextPair>& pairs, bool normalize = true);

double MacroAverage(const std::vector<double>& values);
std::string FormatFixed(double value, int decimals = 2);

struct DiacriticWer {
  WerBreakdown retained;
  WerBreakdown stripped;
};
DiacriticWer WerDiacriticModes(const std::vector<TextPair>& pairs, bool normalize = true);

struct LidCounts {
  long tp = 0;
  long fp = 0;
  long fn = 0;
  // 100 * 2tp / (2tp + fp + fn); nullopt when the denominator is 0.
  std::optional<double> f1() const;
};

struct LidReport {
  std::array<LidCounts, kAllLanguages.size()> per_language{};

  const LidCounts& operator[](LanguageTag lang) const {
    return per_language[static_cast<int>(lang)];
  }
  // "lang,f1" then one row per language, "NA" when not applicable.
  std::string ToCsv() const;
};

struct LidExample {
  std::optional<LanguageTag> predicted;
  LanguageTag truth;
};

// A missing prediction counts as a false negative only.
LidReport LidF1(const std::vector<LidExample>& examples);

// ---------------------------------------------------------------------------
// Speed sweep

inline const std::vector<double> kSweepFactors = {0.8, 1.0, 1.2, 1.4, 1.6, 1.8, 2.0};

// Returns the hypothesis text for one utterance at one rate. Called
// concurrently when jobs > 1.
using DecodeFn =
    std::function<std::string(const Waveform& audio, const ManifestEntry& entry, double factor)>;

struct SweepOptions {
  std::filesystem::path audio_root;  // relative audio paths resolve here
  bool load_audio = true;            // false: decode_fn gets an empty waveform
  bool normalize = true;
  int jobs = 1;
};

struct SweepRow {
  double factor = 1.0;
  WerBreakdown wer;
  double mean_utterance_wer = 0.0;
};

// For each factor, stretch every utterance (factor 1.0 uses the original
// audio), decode, and pool WER against entry.text. Throws IoError listing
// every missing audio file before decoding anything.
std::vector<SweepRow> SpeedSweep(const std::vector<ManifestEntry>& manifest,
                                 const std::vector<double>& factors, const DecodeFn& decode,
                                 const SweepOptions& options = {});

// "factor,wer" CSV.
std::string SweepCsv(const std::vector<SweepRow>& rows);

}  // namespace plkit

#endif  // PLKIT_EVAL_H_
