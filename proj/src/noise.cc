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

#include <algorithm>
#include <cmath>
#include <string>

#include "plkit/audio.h"
#include "plkit/error.h"

namespace plkit {

MixResult MixNoise(const Waveform& w, const Waveform& noise, double snr_db) {
  w.Validate();
  MixResult result;
  if (snr_db == kNoNoise) {
    result.audio = w;
    return result;
  }
  if (std::isnan(snr_db)) throw ValidationError("SNR is NaN");
  noise.Validate();
  if (w.sample_rate != noise.sample_rate) throw ValidationError("sample rates differ");
  const double signal_power = MeanPower(w.samples.data(), w.samples.size());
  if (!(signal_power > 0.0)) throw ValidationError("signal has zero power");

  const std::size_t n = w.samples.size();
  std::vector<float> fitted(n);
  for (std::size_t i = 0; i < n; ++i) fitted[i] = noise.samples[i % noise.samples.size()];
  const double noise_power = MeanPower(fitted.data(), n);
  if (!(noise_power > 0.0)) throw ValidationError("noise has zero power");

  result.noise_scale = std::sqrt(signal_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
  double scaled_power = 0.0;
  result.audio.sample_rate = w.sample_rate;
  result.audio.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = result.noise_scale * fitted[i];
    scaled_power += v * v;
    const double mixed = w.samples[i] + v;
    if (mixed > 1.0 || mixed < -1.0) ++result.clipped;
    result.audio.samples[i] = static_cast<float>(std::clamp(mixed, -1.0, 1.0));
  }
  scaled_power /= static_cast<double>(n);
  result.achieved_snr_db = 10.0 * std::log10(signal_power / scaled_power);
  return result;
}

double Rng::Uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

std::size_t Rng::Index(std::size_t n) {
  if (n == 0) throw ValidationError("cannot pick from an empty set");
  return std::min(n - 1, static_cast<std::size_t>(Uniform() * static_cast<double>(n)));
}

void AugmentOptions::Validate() const {
  auto prob = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(name) + " outside [0,1]");
  };
  prob(noise_prob, "noise_prob");
  prob(stretch_prob, "stretch_prob");
  if (!(snr_min_db <= snr_max_db)) throw ValidationError("snr_min_db > snr_max_db");
  if (stretch_prob > 0.0 && stretch_factors.empty()) {
    throw ValidationError("no stretch factors");
  }
  for (double f : stretch_factors) {
    if (!(f >= kMinStretch && f <= kMaxStretch)) {
      throw ValidationError("stretch factor outside [0.5, 2.5]");
    }
  }
}

Augmenter::Augmenter(AugmentOptions options, std::uint64_t seed)
    : options_(std::move(options)), rng_(seed) {
  options_.Validate();
}

Waveform Augmenter::Apply(const Waveform& w, const std::vector<Waveform>& noises,
                          AugmentRecord* record) {
  AugmentRecord rec;
  Waveform out = w;
  if (rng_.Bernoulli(options_.noise_prob) && !noises.empty()) {
    rec.noise = true;
    rec.noise_index = rng_.Index(noises.size());
    rec.snr_db = rng_.Uniform(options_.snr_min_db, options_.snr_max_db);
    MixResult mixed = MixNoise(out, noises[rec.noise_index], rec.snr_db);
    rec.clipped = mixed.clipped;
    out = std::move(mixed.audio);
  }
  if (rng_.Bernoulli(options_.stretch_prob)) {
    rec.stretch = true;
    rec.factor = options_.stretch_factors[rng_.Index(options_.stretch_factors.size())];
    if (rec.factor != 1.0) out = WsolaStretch(out, rec.factor);
  }
  if (record) *record = rec;
  return out;
}

}  // namespace plkit
