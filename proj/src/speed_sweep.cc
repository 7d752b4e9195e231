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

#include <cstdio>

#include "plkit/error.h"
#include "plkit/eval.h"
#include "plkit/parallel.h"

namespace plkit {

namespace {

std::filesystem::path Resolve(const std::filesystem::path& root, const std::string& audio) {
  std::filesystem::path p(audio);
  return p.is_absolute() || root.empty() ? p : root / p;
}

}  // namespace

std::vector<SweepRow> SpeedSweep(const std::vector<ManifestEntry>& manifest,
                                 const std::vector<double>& factors, const DecodeFn& decode,
                                 const SweepOptions& options) {
  if (manifest.empty()) throw ValidationError("empty manifest");
  if (factors.empty()) throw ValidationError("no sweep factors");
  for (double f : factors) {
    if (!(f >= kMinStretch && f <= kMaxStretch)) {
      throw ValidationError("stretch factor outside [0.5, 2.5]");
    }
  }
  if (options.load_audio) {
    std::string missing;
    for (const auto& e : manifest) {
      const auto path = Resolve(options.audio_root, e.audio_path);
      if (!std::filesystem::exists(path)) missing += "\n  " + path.string();
    }
    if (!missing.empty()) throw IoError("missing audio:" + missing);
  }

  const std::size_t n = manifest.size();
  // hyps[f * n + u]
  std::vector<std::string> hyps(factors.size() * n);
  ParallelFor(n, options.jobs, [&](std::size_t u) {
    const ManifestEntry& entry = manifest[u];
    Waveform original;
    if (options.load_audio) original = ReadWav(Resolve(options.audio_root, entry.audio_path), 0);
    for (std::size_t f = 0; f < factors.size(); ++f) {
      if (!options.load_audio || factors[f] == 1.0) {
        hyps[f * n + u] = decode(original, entry, factors[f]);
      } else {
        hyps[f * n + u] = decode(WsolaStretch(original, factors[f]), entry, factors[f]);
      }
    }
  });

  std::vector<SweepRow> rows;
  for (std::size_t f = 0; f < factors.size(); ++f) {
    std::vector<TextPair> pairs;
    pairs.reserve(n);
    for (std::size_t u = 0; u < n; ++u) pairs.emplace_back(manifest[u].text, hyps[f * n + u]);
    SweepRow row;
    row.factor = factors[f];
    row.wer = CorpusWer(pairs, options.normalize);
    row.mean_utterance_wer = MeanUtteranceWer(pairs, options.normalize);
    rows.push_back(row);
  }
  return rows;
}

std::string SweepCsv(const std::vector<SweepRow>& rows) {
  std::string out = "factor,wer\n";
  char buf[64];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.2f,%.6f\n", row.factor, row.wer.wer());
    out += buf;
  }
  return out;
}

}  // namespace plkit
