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

#include "cli_common.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>

#include "plkit/error.h"

namespace plkit::cli {

void Emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(g.out, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + g.out);
}

std::vector<std::string> ReadLines(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
  }
  return lines;
}

std::string JoinLines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

std::map<std::string, std::string> ParseKeyValues(const std::vector<std::string>& items) {
  std::map<std::string, std::string> out;
  for (const auto& item : items) {
    std::size_t start = 0;
    while (start <= item.size()) {
      auto comma = item.find(',', start);
      if (comma == std::string::npos) comma = item.size();
      const std::string kv = item.substr(start, comma - start);
      start = comma + 1;
      if (kv.empty()) continue;
      const auto eq = kv.find('=');
      if (eq == std::string::npos || eq == 0) {
        throw ValidationError("expected key=value, got '" + kv + "'");
      }
      out[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
  }
  return out;
}

double ParseDouble(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError("bad " + what + " '" + s + "'");
  return v;
}

std::vector<double> ParseDoubleList(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    auto comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(ParseDouble(s.substr(start, comma - start), what));
    start = comma + 1;
  }
  return out;
}

void TextSource::Add(CLI::App* cmd) {
  auto* in_opt = cmd->add_option("--in", in, "Text file, one item per line");
  auto* m_opt = cmd->add_option("--manifest", manifest, "JSONL manifest; entry texts are processed");
  in_opt->excludes(m_opt);
  cmd->add_option("--lang", lang, "Only process manifest entries of this language")
      ->needs(m_opt);
}

void TextSource::Transform(const Globals& g,
                           const std::function<std::string(const std::string&)>& fn,
                           bool keep_tags) const {
  if (in.empty() == manifest.empty()) throw ValidationError("give exactly one of --in, --manifest");
  if (!in.empty()) {
    auto lines = ReadLines(in);
    for (auto& l : lines) l = fn(l);
    Emit(g, JoinLines(lines));
    return;
  }
  std::optional<LanguageTag> only;
  if (!lang.empty()) {
    only = ParseLanguageCode(lang);
    if (!only) throw ValidationError("unknown language '" + lang + "'");
  }
  std::string out;
  ForEachManifestEntry(manifest, [&](ManifestEntry&& e, long) {
    if (only && e.lang != *only) {
      out += FormatManifestLine(e);
      out += '\n';
      return true;
    }
    TaggedText tagged = keep_tags ? StripLanguageTag(e.text) : TaggedText{std::nullopt, e.text};
    e.text = fn(tagged.text);
    if (tagged.lang) e.text = PrependLanguageTag(e.text, *tagged.lang);
    out += FormatManifestLine(e);
    out += '\n';
    return true;
  });
  Emit(g, out);
}

void DecoderFlags::Add(CLI::App* cmd) {
  cmd->add_option("--beam-size", config.beam_size, "Beam width")->capture_default_str();
  cmd->add_option("--lm-weight", config.lm_weight, "LM weight alpha")->capture_default_str();
  cmd->add_option("--word-bonus", config.word_bonus, "Per-word bonus beta")->capture_default_str();
  cmd->add_option("--nbest", config.nbest, "Hypotheses kept for language selection")
      ->capture_default_str();
  cmd->add_option("--prune", config.prune_log_threshold,
                  "Skip tokens with frame log-prob below this")
      ->capture_default_str();
  cmd->add_option("--lm", lm_path, "ARPA language model for shallow fusion");
  cmd->add_option("--lexicon", lexicon_path, "Lexicon (word<TAB>tokens); constrains the search");
  cmd->add_flag("--select-language", select_language,
                "Prefer the best hypothesis tagged with the entry's language")
      ->capture_default_str();
}

DecoderSetup DecoderSetup::Load(const DecoderFlags& flags) {
  DecoderSetup s;
  s.config = flags.config;
  s.select_language = flags.select_language;
  if (!flags.lm_path.empty()) s.lm = ReadArpa(std::filesystem::path(flags.lm_path));
  if (!flags.lexicon_path.empty()) {
    s.lexicon_entries = ReadLexiconEntries(flags.lexicon_path);
    s.config.use_lexicon = true;
  }
  if (!s.lm) s.config.lm_weight = 0.0;
  s.config.Validate();
  return s;
}

Hypothesis DecoderSetup::Decode(const EmissionMatrix& em, std::optional<LanguageTag> lang) const {
  std::optional<Lexicon> lexicon;
  if (config.use_lexicon) lexicon.emplace(lexicon_entries, em.vocab());
  auto nbest = BeamSearch(em, config, lm ? &*lm : nullptr, lexicon ? &*lexicon : nullptr);
  if (nbest.empty()) return Hypothesis{};
  if (select_language && lang) return SelectLanguageHypothesis(nbest, *lang).hypothesis;
  return nbest.front();
}

Hypothesis GreedyHypothesis(const EmissionMatrix& em) {
  Hypothesis h;
  h.tokens = GreedyTokens(em);
  h.text = TokensToText(em.vocab(), h.tokens);
  for (std::size_t t = 0; t < em.frames(); ++t) {
    auto row = em.Row(t);
    h.acoustic_logprob += *std::max_element(row.begin(), row.end());
  }
  h.token_count = static_cast<int>(h.tokens.size());
  h.combined_score = h.acoustic_logprob;
  h.confidence = std::exp(h.acoustic_logprob / std::max(1, h.token_count));
  return h;
}

double StorableConfidence(double c) { return std::clamp(c, 1e-6, 1.0); }

}  // namespace plkit::cli
