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

// WSOLA: each synthesis frame is taken from near its nominal input position,
// shifted within the tolerance to best continue the previous frame, then
// Hann-windowed and overlap-added.

#include <cmath>
#include <numbers>
#include <string>

#include "plkit/audio.h"
#include "plkit/error.h"

namespace plkit {

Waveform WsolaStretch(const Waveform& w, double factor, const WsolaOptions& options) {
  w.Validate();
  if (!(factor >= kMinStretch && factor <= kMaxStretch)) {
    throw ValidationError("stretch factor " + std::to_string(factor) + " outside [0.5, 2.5]");
  }
  const long n = options.window, hop = options.synthesis_hop, tol = options.tolerance;
  if (n <= 0 || hop <= 0 || hop > n || tol < 0) throw ValidationError("bad WSOLA options");

  const long in_len = static_cast<long>(w.samples.size());
  const long out_len = std::lround(in_len / factor);
  const float* x = w.samples.data();
  auto at = [&](long i) { return i >= 0 && i < in_len ? x[i] : 0.0f; };

  std::vector<double> win(n);
  for (long i = 0; i < n; ++i) win[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);

  std::vector<double> out(out_len + n, 0.0), norm(out_len + n, 0.0);
  long prev = 0;
  for (long k = 0; k * hop < out_len; ++k) {
    const long nominal = std::lround(static_cast<double>(k * hop) * factor);
    long pos = nominal;
    if (k > 0) {
      const long natural = prev + hop;
      double best = -std::numeric_limits<double>::infinity();
      // Nearest shift wins ties: try 0, -1, +1, -2, +2, ...
      for (long step = 0; step <= 2 * tol; ++step) {
        const long delta = (step % 2 == 0) ? step / 2 : -(step + 1) / 2;
        const long cand = nominal + delta;
        double corr = 0.0;
        for (long i = 0; i < n; ++i) corr += static_cast<double>(at(cand + i)) * at(natural + i);
        if (corr > best) {
          best = corr;
          pos = cand;
        }
      }
    }
    const long base = k * hop;
    for (long i = 0; i < n; ++i) {
      out[base + i] += at(pos + i) * win[i];
      norm[base + i] += win[i];
    }
    prev = pos;
  }

  Waveform result;
  result.sample_rate = w.sample_rate;
  result.samples.resize(out_len);
  for (long i = 0; i < out_len; ++i) {
    result.samples[i] = norm[i] > 1e-3 ? static_cast<float>(out[i] / norm[i]) : 0.0f;
  }
  return result;
}

std::vector<Waveform> WsolaStretchBatch(const Waveform& w, const std::vector<double>& factors,
                                        const WsolaOptions& options) {
  std::vector<Waveform> out;
  out.reserve(factors.size());
  for (double f : factors) out.push_back(WsolaStretch(w, f, options));
  return out;
}

}  // namespace plkit
