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

// Writes the synthetic end-to-end fixture: 20 utterances (4 per language) as
// character-level CTC emissions, with lexicon, toy LM, manifests, policy and
// two WAV files. Usage: make_e2e_fixture <out_dir>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "plkit/audio.h"
#include "plkit/emissions.h"
#include "plkit/manifest.h"
#include "plkit/ngram_lm.h"

namespace {

using namespace plkit;

constexpr double kFramesPerSecond = 50.0;

struct Utterance {
  LanguageTag lang;
  std::string reference;
  std::string spoken;  // what the emissions spell
  LanguageTag tag;     // tag token the emissions open with
  double peak;         // probability of the intended token per frame
};

std::vector<std::string> CodePoints(const std::string& s) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < s.size();) {
    const auto c = static_cast<unsigned char>(s[i]);
    const std::size_t len = c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

std::vector<std::string> Vocab() {
  std::vector<std::string> v = {"<b>", "|"};
  for (char c = 'a'; c <= 'z'; ++c) v.emplace_back(1, c);
  for (const char* s : {"'", "ọ", "ẹ", "ṣ"}) v.emplace_back(s);
  for (LanguageTag lang : kAllLanguages) v.emplace_back(TagToken(lang));
  return v;
}

std::size_t IndexOf(const std::vector<std::string>& vocab, const std::string& tok) {
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i] == tok) return i;
  }
  throw std::runtime_error("token not in vocabulary: " + tok);
}

// Each token holds two frames, then one blank frame. The rest of each frame's
// mass is spread over random other classes.
EmissionMatrix Emit(const Utterance& u, const std::vector<std::string>& vocab, Rng& rng) {
  std::vector<std::size_t> tokens = {IndexOf(vocab, TagToken(u.tag))};
  bool first = true;
  std::string word;
  for (const auto& cp : CodePoints(u.spoken + " ")) {
    if (cp == " ") {
      if (word.empty()) continue;
      if (!first) tokens.push_back(IndexOf(vocab, "|"));
      for (const auto& c : CodePoints(word)) tokens.push_back(IndexOf(vocab, c));
      word.clear();
      first = false;
    } else {
      word += cp;
    }
  }
  std::vector<std::size_t> frames;
  for (std::size_t tok : tokens) {
    frames.push_back(tok);
    frames.push_back(tok);
    frames.push_back(0);
  }
  const std::size_t V = vocab.size();
  std::vector<float> data;
  for (std::size_t target : frames) {
    std::vector<double> p(V, 0.0);
    double rest = 0.0;
    for (std::size_t v = 0; v < V; ++v) {
      if (v == target) continue;
      p[v] = 0.02 + rng.Uniform();
      rest += p[v];
    }
    const double peak = target == 0 ? 0.9 : u.peak;
    for (std::size_t v = 0; v < V; ++v) p[v] = v == target ? peak : (1.0 - peak) * p[v] / rest;
    for (double x : p) data.push_back(static_cast<float>(std::log(x)));
  }
  return EmissionMatrix(frames.size(), vocab, 0, std::move(data));
}

void WriteText(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_e2e_fixture <out_dir>\n";
    return 64;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir / "em");

  using L = LanguageTag;
  const std::vector<Utterance> utts = {
      {L::kEn, "the market is open", "the market is open", L::kEn, 0.85},
      {L::kEn, "we go to school", "we go to school", L::kEn, 0.85},
      {L::kEn, "good morning to you", "good morning to you", L::kEn, 0.85},
      // Tagged as Pidgin by the "model": dropped as a language mismatch.
      {L::kEn, "the rain fall today", "the rain fall today", L::kPd, 0.85},
      {L::kIg, "kedu ka i mere", "kedu ka i mere", L::kIg, 0.85},
      {L::kIg, "biko nye m mmiri", "biko nye m mmiri", L::kIg, 0.85},
      {L::kIg, "nna anyi no ebe a", "nna anyi no ebe a", L::kIg, 0.85},
      // Weak emissions: low confidence.
      {L::kIg, "ututu oma", "ututu oma", L::kIg, 0.3},
      {L::kYo, "ọmọ mi wa nibi", "ọmọ mi wa nibi", L::kYo, 0.85},
      {L::kYo, "ṣe daadaa ni", "ṣe daadaa ni", L::kYo, 0.85},
      {L::kYo, "ẹ ku ile", "ẹ ku ile", L::kYo, 0.85},
      // Spoken without the dot below: an error only while diacritics count.
      {L::kYo, "owo ọja po", "owo oja po", L::kYo, 0.85},
      {L::kPd, "wetin dey hapun", "wetin dey happen", L::kPd, 0.85},
      {L::kPd, "how you dey", "how you day", L::kPd, 0.85},
      {L::kPd, "plenti pipo dey market", "plenty people dey market", L::kPd, 0.85},
      {L::kPd, "i wan chop", "i wan chop", L::kPd, 0.85},
      {L::kHa, "sannu da zuwa", "sannu da zuwa", L::kHa, 0.85},
      {L::kHa, "ina kwana", "ina kwana", L::kHa, 0.85},
      {L::kHa, "yaya aiki", "yaya aiki", L::kHa, 0.85},
      {L::kHa, "na gode sosai", "na gode sosai", L::kHa, 0.85},
  };

  const auto vocab = Vocab();
  Rng rng(2024);
  std::string manifest, reference;
  std::vector<std::string> words;
  auto add_words = [&](const std::string& text) {
    for (const auto& w : SplitWords(text)) {
      if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
    }
  };
  std::vector<std::string> lm_lines;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const auto& u = utts[i];
    char stem[32];
    std::snprintf(stem, sizeof stem, "u%02zu_%s", i, std::string(LanguageCode(u.lang)).c_str());
    const EmissionMatrix em = Emit(u, vocab, rng);
    WriteEmissions(em, dir / "em" / (std::string(stem) + ".ctce"));
    ManifestEntry e{std::string(stem) + ".wav", em.frames() / kFramesPerSecond, "", u.lang,
                    std::nullopt, std::string("e2e")};
    manifest += FormatManifestLine(e) + "\n";
    e.text = u.reference;
    reference += FormatManifestLine(e) + "\n";
    add_words(u.spoken);
    add_words(u.reference);
    lm_lines.push_back(u.reference);
  }
  for (const char* extra : {"how you dey", "how una dey", "i dey come", "wetin you wan chop",
                            "we dey market", "the market is big", "na so e dey"}) {
    lm_lines.push_back(extra);
    add_words(extra);
  }
  WriteText(dir / "manifest.jsonl", manifest);
  WriteText(dir / "reference.jsonl", reference);

  std::string lexicon;
  for (const auto& w : words) {
    lexicon += w + "\t";
    const auto cps = CodePoints(w);
    for (std::size_t k = 0; k < cps.size(); ++k) lexicon += (k ? " " : "") + cps[k];
    lexicon += "\n";
  }
  WriteText(dir / "lexicon.tsv", lexicon);

  WriteText(dir / "lm_corpus.txt", [&] {
    std::string s;
    for (const auto& l : lm_lines) s += l + "\n";
    return s;
  }());
  WriteArpa(TrainLm(TokenizedCorpus::FromLines(lm_lines), {3, {}, false}), dir / "lm.arpa");

  WriteText(dir / "policy.txt", "# e2e thresholds\nen=0.5\nig=0.5\nyo=0.5\npd=0.5\nha=0.5\n");

  Waveform clean;
  clean.samples.resize(16000);
  for (std::size_t i = 0; i < clean.samples.size(); ++i) {
    clean.samples[i] = static_cast<float>(0.3 * std::sin(2.0 * 3.141592653589793 * 220.0 * i / 16000.0));
  }
  WriteWav(clean, dir / "clean.wav");
  Waveform noise;
  noise.samples.resize(8000);
  Rng noise_rng(99);
  for (auto& s : noise.samples) s = static_cast<float>(0.5 * (2.0 * noise_rng.Uniform() - 1.0));
  WriteWav(noise, dir / "noise.wav");
  return 0;
}
