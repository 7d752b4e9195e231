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

#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "plkit/error.h"
#include "plkit/ngram_lm.h"
#include "plkit/text_norm.h"

namespace plkit {

namespace {

std::vector<std::string> WerWords(std::string_view text, bool normalize) {
  return normalize ? SplitWords(Preprocess(text, true)) : SplitWords(text);
}

WerBreakdown Score(const std::vector<std::string>& ref, const std::vector<std::string>& hyp) {
  if (ref.empty()) throw ValidationError("empty reference");
  WerBreakdown b;
  b.ref_words = static_cast<long>(ref.size());
  for (EditOp op : AlignWords(ref, hyp)) {
    switch (op) {
      case EditOp::kMatch: break;
      case EditOp::kSubstitute: ++b.substitutions; break;
      case EditOp::kInsert: ++b.insertions; break;
      case EditOp::kDelete: ++b.deletions; break;
    }
  }
  return b;
}

void RequirePairs(const std::vector<TextPair>& pairs) {
  if (pairs.empty()) throw ValidationError("no ref/hyp pairs");
}

}  // namespace

WerBreakdown& WerBreakdown::operator+=(const WerBreakdown& other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  ref_words += other.ref_words;
  return *this;
}

std::string WerBreakdown::ToJson() const {
  nlohmann::ordered_json j;
  j["substitutions"] = substitutions;
  j["insertions"] = insertions;
  j["deletions"] = deletions;
  j["ref_words"] = ref_words;
  j["wer"] = std::round(wer() * 1e6) / 1e6;
  return j.dump();
}

WerBreakdown Wer(std::string_view ref, std::string_view hyp, bool normalize) {
  return Score(WerWords(ref, normalize), WerWords(hyp, normalize));
}

WerBreakdown CorpusWer(const std::vector<TextPair>& pairs, bool normalize) {
  RequirePairs(pairs);
  WerBreakdown total;
  for (const auto& [ref, hyp] : pairs) total += Wer(ref, hyp, normalize);
  return total;
}

double MeanUtteranceWer(const std::vector<TextPair>& pairs, bool normalize) {
  RequirePairs(pairs);
  double sum = 0.0;
  for (const auto& [ref, hyp] : pairs) sum += Wer(ref, hyp, normalize).wer();
  return sum / static_cast<double>(pairs.size());
}

double MacroAverage(const std::vector<double>& values) {
  if (values.empty()) throw ValidationError("macro average of nothing");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::string FormatFixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

DiacriticWer WerDiacriticModes(const std::vector<TextPair>& pairs, bool normalize) {
  RequirePairs(pairs);
  DiacriticWer out;
  for (const auto& [ref, hyp] : pairs) {
    out.retained += Wer(ref, hyp, normalize);
    out.stripped += Wer(StripDiacritics(ref), StripDiacritics(hyp), normalize);
  }
  return out;
}

std::optional<double> LidCounts::f1() const {
  const long denom = 2 * tp + fp + fn;
  if (denom == 0) return std::nullopt;
  return 100.0 * static_cast<double>(2 * tp) / static_cast<double>(denom);
}

std::string LidReport::ToCsv() const {
  std::string out = "lang,f1\n";
  for (LanguageTag lang : kAllLanguages) {
    const auto f1 = (*this)[lang].f1();
    out += std::string(LanguageCode(lang)) + "," + (f1 ? FormatFixed(*f1) : "NA") + "\n";
  }
  return out;
}

LidReport LidF1(const std::vector<LidExample>& examples) {
  if (examples.empty()) throw ValidationError("no LID examples");
  LidReport report;
  auto& c = report.per_language;
  for (const auto& ex : examples) {
    if (ex.predicted == ex.truth) {
      ++c[static_cast<int>(ex.truth)].tp;
      continue;
    }
    ++c[static_cast<int>(ex.truth)].fn;
    if (ex.predicted) ++c[static_cast<int>(*ex.predicted)].fp;
  }
  return report;
}

}  // namespace plkit
