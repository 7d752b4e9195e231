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

#ifndef PLKIT_AUDIO_H_
#define PLKIT_AUDIO_H_

#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <vector>

namespace plkit {

inline constexpr int kDefaultSampleRate = 16000;

struct Waveform {
  std::vector<float> samples;  // [-1, 1]
  int sample_rate = kDefaultSampleRate;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate;
  }
  void Validate() const;
};

// 16-bit PCM mono RIFF/WAVE. With expected_rate > 0 a different rate is an
// error (there is no resampler).
Waveform ReadWav(const std::filesystem::path& path, int expected_rate = kDefaultSampleRate);
void WriteWav(const Waveform& w, const std::filesystem::path& path);

// Mean power and RMS level in dBFS (full-scale sine is about -3 dB).
double MeanPower(const float* x, std::size_t n);
double RmsDb(const float* x, std::size_t n);

// ---------------------------------------------------------------------------
// Segmentation

struct Segment {
  double start_s = 0.0;
  double end_s = 0.0;
  std::vector<float> embedding;

  double length() const { return end_s - start_s; }
};

std::vector<Segment> ReadSegments(const std::filesystem::path& path);  // JSONL
void WriteSegments(const std::vector<Segment>& segments, const std::filesystem::path& path);

// Raw little-endian float32 rows; the dimension lives in "<path>.dim".
std::vector<std::vector<float>> ReadEmbeddings(const std::filesystem::path& path);
void WriteEmbeddings(const std::vector<std::vector<float>>& rows,
                     const std::filesystem::path& path);

struct FrameOptions {
  double threshold_db = -50.0;
  double frame_ms = 25.0;
  double hop_ms = 10.0;
};

struct SilenceOptions : FrameOptions {
  double min_silence_s = 0.3;
};

// Runs of frames quieter than threshold_db, at least min_silence_s long.
std::vector<Segment> DetectSilence(const Waveform& w, const SilenceOptions& options = {});

// Joins neighbours separated by less than max_gap_s. Input must be sorted
// and non-overlapping.
std::vector<Segment> MergeVadSegments(const std::vector<Segment>& speech,
                                      double max_gap_s = 1.5);

double CosineSimilarity(const std::vector<float>& a, const std::vector<float>& b);

// Maximal runs of temporally adjacent segments whose consecutive embeddings
// have cosine similarity strictly above threshold.
std::vector<std::vector<Segment>> MergeByEmbedding(const std::vector<Segment>& segments,
                                                   double threshold = 0.7);

// Cuts segments longer than max_len_s. Each cut goes at the quietest frame of
// the last silent run before the max_len_s boundary, or at the boundary
// itself when the window has no silence. Pieces tile seg exactly.
std::vector<Segment> SplitLongSegment(const Waveform& w, const Segment& seg,
                                      double max_len_s = 30.0,
                                      const FrameOptions& options = {});

// ---------------------------------------------------------------------------
// Time-scale modification

struct WsolaOptions {
  int synthesis_hop = 256;
  int window = 512;
  int tolerance = 128;
};

inline constexpr double kMinStretch = 0.5;
inline constexpr double kMaxStretch = 2.5;

// factor > 1 speeds up: output has round(N / factor) samples, same pitch.
Waveform WsolaStretch(const Waveform& w, double factor, const WsolaOptions& options = {});
std::vector<Waveform> WsolaStretchBatch(const Waveform& w, const std::vector<double>& factors,
                                        const WsolaOptions& options = {});

// ---------------------------------------------------------------------------
// Noise

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct MixResult {
  Waveform audio;
  double noise_scale = 0.0;
  double achieved_snr_db = kNoNoise;  // measured before clipping
  long clipped = 0;
};

// Loops or truncates noise to the signal length and scales it to snr_db.
// snr_db = +inf returns the input untouched.
MixResult MixNoise(const Waveform& w, const Waveform& noise, double snr_db);

// Uniform draws from a 64-bit Mersenne Twister, identical on every platform
// (std::uniform_*_distribution is implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double Uniform();  // [0, 1)
  double Uniform(double lo, double hi);
  std::size_t Index(std::size_t n);
  bool Bernoulli(double p) { return Uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

struct AugmentOptions {
  double noise_prob = 0.4;  // 0.25 in the second stage
  double stretch_prob = 0.4;
  double snr_min_db = 5.0;
  double snr_max_db = 30.0;
  std::vector<double> stretch_factors = {0.9, 1.0, 1.1, 1.2};

  void Validate() const;
};

struct AugmentRecord {
  bool noise = false;
  std::size_t noise_index = 0;
  double snr_db = kNoNoise;
  long clipped = 0;
  bool stretch = false;
  double factor = 1.0;
};

// Seeded noise + stretch augmentation. Draw order per call: noise coin,
// noise file, SNR, stretch coin, factor.
class Augmenter {
 public:
  Augmenter(AugmentOptions options, std::uint64_t seed);

  Waveform Apply(const Waveform& w, const std::vector<Waveform>& noises,
                 AugmentRecord* record = nullptr);

 private:
  AugmentOptions options_;
  Rng rng_;
};

}  // namespace plkit

#endif  // PLKIT_AUDIO_H_
