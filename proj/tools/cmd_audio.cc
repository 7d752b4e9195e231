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
#include <fstream>

#include "cli_common.h"
#include "json.hpp"
#include "plkit/audio.h"
#include "plkit/error.h"
#include "plkit/parallel.h"

namespace plkit::cli {

namespace {

std::string SegmentLines(const std::vector<Segment>& segments) {
  std::string out;
  for (const auto& s : segments) {
    nlohmann::ordered_json j;
    j["start_s"] = std::round(s.start_s * 1e6) / 1e6;
    j["end_s"] = std::round(s.end_s * 1e6) / 1e6;
    out += j.dump() + "\n";
  }
  return out;
}

double Round6(double v) { return std::round(v * 1e6) / 1e6; }

// Per-entry stream so results do not depend on --jobs.
std::uint64_t EntrySeed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void RegisterAudio(CLI::App& app, Globals& g) {
  auto* audio = app.add_subcommand("audio", "Segmentation and augmentation");
  audio->require_subcommand(1);

  struct SilenceArgs {
    std::string in;
    SilenceOptions options;
  };
  auto sil = std::make_shared<SilenceArgs>();
  auto* silence = audio->add_subcommand("silence", "Silent stretches as JSONL segments");
  silence->add_option("--in", sil->in, "16-bit PCM mono WAV")->required();
  silence->add_option("--threshold-db", sil->options.threshold_db, "dBFS RMS threshold")
      ->capture_default_str();
  silence->add_option("--frame-ms", sil->options.frame_ms, "Frame length")->capture_default_str();
  silence->add_option("--hop-ms", sil->options.hop_ms, "Frame hop")->capture_default_str();
  silence->add_option("--min-silence", sil->options.min_silence_s, "Shortest run, seconds")
      ->capture_default_str();
  silence->callback([&g, sil] {
    Emit(g, SegmentLines(DetectSilence(ReadWav(sil->in, 0), sil->options)));
  });

  struct MergeArgs {
    std::string segments;
    std::string embeddings;
    double max_gap = 1.5;
    double similarity = 0.7;
  };
  auto mrg = std::make_shared<MergeArgs>();
  auto* merge = audio->add_subcommand(
      "merge", "Merge VAD segments across short gaps, or by speaker-embedding similarity");
  merge->add_option("--segments", mrg->segments, "JSONL segments, sorted")->required();
  merge->add_option("--embeddings", mrg->embeddings,
                    "float32 embeddings, one row per segment (dimension in <file>.dim); "
                    "switches to similarity merging");
  merge->add_option("--max-gap", mrg->max_gap, "Largest gap merged, seconds (exclusive)")
      ->capture_default_str();
  merge->add_option("--similarity", mrg->similarity, "Cosine threshold (exclusive)")
      ->capture_default_str();
  merge->callback([&g, mrg] {
    std::vector<Segment> segments = ReadSegments(mrg->segments);
    if (mrg->embeddings.empty()) {
      Emit(g, SegmentLines(MergeVadSegments(segments, mrg->max_gap)));
      return;
    }
    auto rows = ReadEmbeddings(mrg->embeddings);
    if (rows.size() != segments.size()) {
      throw ValidationError("embedding rows do not match segment count");
    }
    for (std::size_t i = 0; i < rows.size(); ++i) segments[i].embedding = std::move(rows[i]);
    std::vector<Segment> merged;
    for (const auto& group : MergeByEmbedding(segments, mrg->similarity)) {
      Segment s;
      s.start_s = group.front().start_s;
      s.end_s = group.back().end_s;
      merged.push_back(s);
    }
    Emit(g, SegmentLines(merged));
  });

  struct SplitArgs {
    std::string in;
    std::string segments;
    double max_len = 30.0;
    FrameOptions options;
  };
  auto spl = std::make_shared<SplitArgs>();
  auto* split = audio->add_subcommand("split", "Cut long segments at silences");
  split->add_option("--in", spl->in, "16-bit PCM mono WAV")->required();
  split->add_option("--segments", spl->segments, "JSONL segments (default: the whole file)");
  split->add_option("--max-len", spl->max_len, "Longest piece, seconds")->capture_default_str();
  split->add_option("--threshold-db", spl->options.threshold_db, "Silence threshold, dBFS")
      ->capture_default_str();
  split->callback([&g, spl] {
    const Waveform w = ReadWav(spl->in, 0);
    std::vector<Segment> segments;
    if (spl->segments.empty()) {
      if (w.samples.empty()) throw ValidationError("empty audio");
      segments.push_back({0.0, w.duration_s(), {}});
    } else {
      segments = ReadSegments(spl->segments);
    }
    std::vector<Segment> out;
    for (const auto& s : segments) {
      for (auto& piece : SplitLongSegment(w, s, spl->max_len, spl->options)) {
        out.push_back(std::move(piece));
      }
    }
    Emit(g, SegmentLines(out));
  });

  struct StretchArgs {
    std::string in;
    double factor = 1.0;
    std::string factors;
    std::string out_dir;
  };
  auto str = std::make_shared<StretchArgs>();
  auto* stretch = audio->add_subcommand("stretch", "WSOLA time-scale modification");
  stretch->add_option("--in", str->in, "16-bit PCM mono WAV")->required();
  stretch->add_option("--factor", str->factor, "Speed factor (>1 is faster)")
      ->capture_default_str();
  stretch->add_option("--factors", str->factors,
                      "Batch mode: comma separated factors, e.g. 0.9,1.0,1.1,1.2");
  stretch->add_option("--out-dir", str->out_dir, "Batch mode output directory");
  stretch->callback([&g, str] {
    const Waveform w = ReadWav(str->in, 0);
    if (str->factors.empty()) {
      if (g.out.empty()) throw ValidationError("stretch needs --out");
      WriteWav(WsolaStretch(w, str->factor), g.out);
      return;
    }
    if (str->out_dir.empty()) throw ValidationError("batch mode needs --out-dir");
    std::filesystem::create_directories(str->out_dir);
    const auto factors = ParseDoubleList(str->factors, "factor");
    const auto stem = std::filesystem::path(str->in).stem().string();
    std::string listing;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      char name[64];
      std::snprintf(name, sizeof name, "_x%.2f.wav", factors[i]);
      const auto path = std::filesystem::path(str->out_dir) / (stem + name);
      WriteWav(WsolaStretch(w, factors[i]), path);
      listing += path.string() + "\n";
    }
    std::fputs(listing.c_str(), stdout);
  });

  struct NoiseArgs {
    std::string in;
    std::string noise;
    std::optional<double> snr;
    std::string manifest;
    std::vector<std::string> noise_files;
    std::string out_dir;
    AugmentOptions augment;
  };
  auto nz = std::make_shared<NoiseArgs>();
  auto* mix = audio->add_subcommand(
      "mix-noise", "Add noise at a target SNR; with --manifest, seeded noise/stretch augmentation");
  mix->add_option("--in", nz->in, "Clean WAV");
  mix->add_option("--noise", nz->noise, "Noise WAV (looped or truncated)");
  mix->add_option("--snr", nz->snr, "Target SNR in dB; inf disables noise (default: drawn from [snr-min, snr-max])");
  mix->add_option("--manifest", nz->manifest, "Batch mode: augment every entry");
  mix->add_option("--noise-file", nz->noise_files, "Batch mode noise pool (repeatable)");
  mix->add_option("--out-dir", nz->out_dir, "Batch mode output directory");
  mix->add_option("--snr-min", nz->augment.snr_min_db, "Lowest drawn SNR, dB")
      ->capture_default_str();
  mix->add_option("--snr-max", nz->augment.snr_max_db, "Highest drawn SNR, dB")
      ->capture_default_str();
  mix->add_option("--noise-prob", nz->augment.noise_prob, "Batch mode noise probability")
      ->capture_default_str();
  mix->add_option("--stretch-prob", nz->augment.stretch_prob, "Batch mode stretch probability")
      ->capture_default_str();
  mix->callback([&g, nz] {
    nz->augment.Validate();
    if (nz->manifest.empty()) {
      if (nz->in.empty() || nz->noise.empty()) throw ValidationError("need --in and --noise");
      if (g.out.empty()) throw ValidationError("mix-noise needs --out");
      double snr = 0.0;
      if (nz->snr) {
        snr = *nz->snr;
      } else {
        Rng rng(g.seed);
        snr = rng.Uniform(nz->augment.snr_min_db, nz->augment.snr_max_db);
      }
      MixResult r = MixNoise(ReadWav(nz->in, 0), ReadWav(nz->noise, 0), snr);
      WriteWav(r.audio, g.out);
      nlohmann::ordered_json j;
      j["schema_version"] = kSchemaVersion;
      j["seed"] = g.seed;
      if (std::isfinite(snr)) j["snr_db"] = Round6(snr);
      if (std::isfinite(r.achieved_snr_db)) j["achieved_snr_db"] = Round6(r.achieved_snr_db);
      j["clipped"] = r.clipped;
      std::fputs((j.dump() + "\n").c_str(), stdout);
      return;
    }
    if (nz->out_dir.empty()) throw ValidationError("batch mode needs --out-dir");
    std::vector<Waveform> noises;
    for (const auto& f : nz->noise_files) noises.push_back(ReadWav(f, 0));
    std::vector<ManifestEntry> entries = ReadManifest(nz->manifest);
    const auto root = std::filesystem::path(nz->manifest).parent_path();
    std::filesystem::create_directories(nz->out_dir);
    std::vector<AugmentRecord> records(entries.size());
    ParallelFor(entries.size(), g.jobs, [&](std::size_t i) {
      ManifestEntry& e = entries[i];
      std::filesystem::path src(e.audio_path);
      if (src.is_relative()) src = root / src;
      Augmenter augmenter(nz->augment, EntrySeed(g.seed, i));
      Waveform w = augmenter.Apply(ReadWav(src, 0), noises, &records[i]);
      const auto dst = std::filesystem::path(nz->out_dir) / src.filename();
      WriteWav(w, dst);
      e.audio_path = dst.string();
      e.duration_s = Round6(w.duration_s());
    });
    std::string manifest;
    for (const auto& e : entries) manifest += FormatManifestLine(e) + "\n";
    Emit(g, manifest);
    nlohmann::ordered_json report;
    report["schema_version"] = kSchemaVersion;
    report["seed"] = g.seed;
    report["entries"] = nlohmann::ordered_json::array();
    for (const auto& r : records) {
      nlohmann::ordered_json j;
      j["noise"] = r.noise;
      if (r.noise) {
        j["noise_index"] = r.noise_index;
        j["snr_db"] = Round6(r.snr_db);
        j["clipped"] = r.clipped;
      }
      j["stretch"] = r.stretch;
      if (r.stretch) j["factor"] = r.factor;
      report["entries"].push_back(j);
    }
    std::ofstream(std::filesystem::path(nz->out_dir) / "augment_report.json")
        << report.dump(2) << "\n";
  });
}

}  // namespace plkit::cli
