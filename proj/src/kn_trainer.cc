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

// Interpolated modified Kneser-Ney estimation.
//
// Adjusted counts: the highest order and any n-gram starting with <s> keep
// their raw counts; every other n-gram is counted by its number of distinct
// left extensions. Each order gets three discounts D1, D2, D3+ from the
// count-of-counts of its adjusted counts. When those statistics are too thin
// to give discounts in (0, k] the order falls back to 0.5 / 1.0 / 1.5.
//
// The unigram level interpolates with the uniform distribution over every
// predictable event (vocabulary, </s> and, in open-vocabulary mode, <unk>).
// The result is stored in backoff form: each stored n-gram carries its
// interpolated probability and each context carries log10 of its
// interpolation weight, so ARPA queries reproduce the interpolated model.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "plkit/error.h"
#include "plkit/ngram_lm.h"

namespace plkit {

namespace {

using Key = std::vector<WordId>;
using CountMap = std::map<Key, long>;

constexpr WordId kUnkId = 0;
constexpr WordId kBosId = 1;
constexpr WordId kEosId = 2;

struct Discounts {
  std::array<double, 4> d{0.0, 0.5, 1.0, 1.5};  // indexed by min(count, 3)
  double For(long count) const { return d[std::min<long>(count, 3)]; }
};

Discounts EstimateDiscounts(const CountMap& adjusted, bool skip_bos) {
  std::array<double, 5> n{};  // n[j] = number of n-grams with count j
  for (const auto& [key, c] : adjusted) {
    if (skip_bos && key.size() == 1 && key[0] == kBosId) continue;
    if (c >= 1 && c <= 4) n[c] += 1.0;
  }
  Discounts out;
  if (n[1] <= 0 || n[2] <= 0 || n[3] <= 0) return out;
  const double y = n[1] / (n[1] + 2.0 * n[2]);
  Discounts est;
  est.d[1] = 1.0 - 2.0 * y * n[2] / n[1];
  est.d[2] = 2.0 - 3.0 * y * n[3] / n[2];
  est.d[3] = 3.0 - 4.0 * y * n[4] / n[3];
  for (int i = 1; i <= 3; ++i) {
    if (!(est.d[i] > 0.0 && est.d[i] <= i)) return out;
  }
  return est;
}

struct ContextStats {
  double total = 0.0;     // sum of adjusted counts of extensions
  double discount = 0.0;  // sum of discounts over extensions
};

}  // namespace

ArpaLm TrainLm(const TokenizedCorpus& corpus, const TrainOptions& options) {
  const int order = options.order;
  if (order < 1) throw ValidationError("order must be >= 1");
  if (corpus.sentences.empty()) throw ValidationError("corpus has no sentences");

  // Vocabulary: <unk>, <s>, </s>, then corpus words in sorted order.
  std::vector<std::string> words = {std::string(kUnk), std::string(kBos),
                                    std::string(kEos)};
  std::map<std::string, WordId> index = {
      {std::string(kUnk), kUnkId}, {std::string(kBos), kBosId}, {std::string(kEos), kEosId}};
  for (const auto& w : corpus.Vocabulary()) {
    if (w == kBos || w == kEos) {
      throw ValidationError("corpus contains reserved token " + w);
    }
    if (w == kUnk) continue;
    index.emplace(w, static_cast<WordId>(words.size()));
    words.push_back(w);
  }

  // Raw counts for every order.
  std::vector<CountMap> raw(order);
  for (const auto& sentence : corpus.sentences) {
    std::vector<WordId> ids;
    ids.reserve(sentence.size() + 2);
    ids.push_back(kBosId);
    for (const auto& w : sentence) ids.push_back(index.at(w));
    ids.push_back(kEosId);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (int k = 1; k <= order && i + k <= ids.size(); ++k) {
        ++raw[k - 1][Key(ids.begin() + i, ids.begin() + i + k)];
      }
    }
  }

  // Adjusted counts.
  std::vector<CountMap> adjusted(order);
  adjusted[order - 1] = raw[order - 1];
  for (int k = order - 1; k >= 1; --k) {
    CountMap continuation;
    for (const auto& [key, c] : raw[k]) {
      ++continuation[Key(key.begin() + 1, key.end())];
    }
    for (const auto& [key, c] : raw[k - 1]) {
      adjusted[k - 1][key] = key[0] == kBosId ? c : continuation[key];
    }
  }

  std::vector<Discounts> discounts(order);
  for (int k = 1; k <= order; ++k) {
    discounts[k - 1] = EstimateDiscounts(adjusted[k - 1], k == 1);
  }

  // Pruning, keeping every surviving n-gram's context present.
  for (int k = 2; k <= order; ++k) {
    const long min_count =
        static_cast<std::size_t>(k - 1) < options.min_counts.size()
            ? options.min_counts[k - 1]
            : 1;
    auto& table = adjusted[k - 1];
    for (auto it = table.begin(); it != table.end();) {
      Key context(it->first.begin(), it->first.end() - 1);
      if (it->second < min_count || !adjusted[k - 2].contains(context)) {
        it = table.erase(it);
      } else {
        ++it;
      }
    }
  }

  // Interpolation weight per context: gamma(c) = sum_w D(a(c w)) / sum_w a(c w).
  std::vector<std::map<Key, ContextStats>> contexts(order);
  for (int k = 1; k <= order; ++k) {
    for (const auto& [key, c] : adjusted[k - 1]) {
      if (k == 1 && key[0] == kBosId) continue;
      auto& stats = contexts[k - 1][Key(key.begin(), key.end() - 1)];
      stats.total += static_cast<double>(c);
      stats.discount += discounts[k - 1].For(c);
    }
  }
  auto gamma = [&](int k, const Key& context) -> double {
    const auto& stats = contexts[k - 1].at(context);
    return stats.discount / stats.total;
  };

  std::vector<NGramTable> tables(order);

  // Unigrams, interpolated with the uniform distribution.
  {
    const auto& stats = contexts[0].at(Key{});
    double events = 0.0;
    for (const auto& [key, c] : adjusted[0]) {
      if (key[0] != kBosId) events += 1.0;
    }
    if (!options.closed_vocabulary) events += 1.0;  // <unk>
    const double uniform = gamma(1, Key{}) / events;
    for (const auto& [key, c] : adjusted[0]) {
      NGramEntry e;
      if (key[0] == kBosId) {
        e.log10_prob = kBosLog10Prob;
      } else {
        const double p = (static_cast<double>(c) - discounts[0].For(c)) / stats.total + uniform;
        e.log10_prob = std::log10(p);
      }
      tables[0].emplace(key, e);
    }
    tables[0].emplace(Key{kUnkId},
                      NGramEntry{options.closed_vocabulary ? kClosedUnkLog10Prob
                                                           : std::log10(uniform),
                                 0.0});
  }

  // Lower-order interpolated probability of w after context, read from the
  // tables already built (the same backoff walk ArpaLm::Score performs).
  auto lower_prob = [&](Key context, WordId w) -> double {
    double backoff = 0.0;
    while (true) {
      Key key = context;
      key.push_back(w);
      auto& table = tables[key.size() - 1];
      if (auto it = table.find(key); it != table.end()) {
        return std::pow(10.0, it->second.log10_prob + backoff);
      }
      auto ctx_it = tables[context.size() - 1].find(context);
      if (ctx_it != tables[context.size() - 1].end()) {
        backoff += ctx_it->second.log10_backoff;
      }
      context.erase(context.begin());
    }
  };

  for (int k = 2; k <= order; ++k) {
    // Backoff weights of the order-(k-1) entries that act as contexts.
    for (auto& [key, entry] : tables[k - 2]) {
      if (contexts[k - 1].contains(key)) entry.log10_backoff = std::log10(gamma(k, key));
    }
    for (const auto& [key, c] : adjusted[k - 1]) {
      Key context(key.begin(), key.end() - 1);
      const auto& stats = contexts[k - 1].at(context);
      const double lower = lower_prob(Key(context.begin() + 1, context.end()), key.back());
      const double p = (static_cast<double>(c) - discounts[k - 1].For(c)) / stats.total +
                       gamma(k, context) * lower;
      tables[k - 1].emplace(key, NGramEntry{std::log10(p), 0.0});
    }
  }

  return ArpaLm(std::move(words), std::move(tables));
}

}  // namespace plkit
