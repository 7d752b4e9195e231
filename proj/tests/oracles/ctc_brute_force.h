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

// Exhaustive CTC marginalization: enumerate all V^T frame alignments,
// collapse each (merge repeats, drop blanks) and sum path probabilities per
// label sequence. Exponential; meant for T <= 6, V <= 4.

#ifndef PLKIT_TESTS_ORACLES_CTC_BRUTE_FORCE_H_
#define PLKIT_TESTS_ORACLES_CTC_BRUTE_FORCE_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "plkit/emissions.h"

namespace plkit::oracle {

// label sequence -> total probability (linear domain, double).
inline std::map<std::vector<int>, double> CtcMarginals(const EmissionMatrix& em) {
  const std::size_t T = em.frames(), V = em.classes();
  std::map<std::vector<int>, double> out;
  std::vector<std::size_t> path(T, 0);
  while (true) {
    double p = 1.0;
    std::vector<int> labels;
    int prev = -1;
    for (std::size_t t = 0; t < T; ++t) {
      p *= std::exp(static_cast<double>(em.At(t, path[t])));
      const int s = static_cast<int>(path[t]);
      if (s != prev && s != static_cast<int>(em.blank())) labels.push_back(s);
      prev = s;
    }
    out[labels] += p;
    std::size_t t = 0;
    while (t < T && ++path[t] == V) path[t++] = 0;
    if (t == T) break;
  }
  return out;
}

// Argmax label sequence and its probability.
inline std::pair<std::vector<int>, double> CtcBest(const EmissionMatrix& em) {
  std::pair<std::vector<int>, double> best{{}, -1.0};
  for (const auto& [labels, p] : CtcMarginals(em)) {
    if (p > best.second) best = {labels, p};
  }
  return best;
}

// log P(labels | em) by the standard CTC forward recursion over the
// blank-interleaved label sequence. Polynomial; any T.
inline double CtcSequenceLogProb(const EmissionMatrix& em, const std::vector<int>& labels) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  auto log_add = [&](double a, double b) {
    if (a == neg_inf) return b;
    if (b == neg_inf) return a;
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
  };
  const int blank = static_cast<int>(em.blank());
  std::vector<int> ext = {blank};
  for (int l : labels) {
    ext.push_back(l);
    ext.push_back(blank);
  }
  const std::size_t S = ext.size();
  std::vector<double> alpha(S, neg_inf), next(S);
  alpha[0] = em.At(0, ext[0]);
  if (S > 1) alpha[1] = em.At(0, ext[1]);
  for (std::size_t t = 1; t < em.frames(); ++t) {
    for (std::size_t s = 0; s < S; ++s) {
      double a = alpha[s];
      if (s >= 1) a = log_add(a, alpha[s - 1]);
      if (s >= 2 && ext[s] != blank && ext[s] != ext[s - 2]) a = log_add(a, alpha[s - 2]);
      next[s] = a + em.At(t, ext[s]);
    }
    alpha.swap(next);
  }
  return S > 1 ? log_add(alpha[S - 1], alpha[S - 2]) : alpha[0];
}

}  // namespace plkit::oracle

#endif  // PLKIT_TESTS_ORACLES_CTC_BRUTE_FORCE_H_
