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

#include "plkit/ctc_decoder.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <set>
#include <unordered_map>

#include "plkit/error.h"

namespace plkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::string_view kWordMarker = "\xE2\x96\x81";  // U+2581

double LogAdd(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

enum class TokenKind { kBlank, kSeparator, kTag, kWordStart, kPlain };

struct TokenInfo {
  TokenKind kind;
  std::string text;  // characters appended to the current word
};

std::vector<TokenInfo> ClassifyVocab(const std::vector<std::string>& vocab,
                                     std::size_t blank) {
  std::vector<TokenInfo> out(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const std::string& tok = vocab[i];
    if (i == blank) {
      out[i] = {TokenKind::kBlank, ""};
    } else if (tok == kWordMarker || tok == " " || tok == "|") {
      out[i] = {TokenKind::kSeparator, ""};
    } else if (ParseTagToken(tok)) {
      out[i] = {TokenKind::kTag, tok};
    } else if (tok.starts_with(kWordMarker)) {
      out[i] = {TokenKind::kWordStart, tok.substr(kWordMarker.size())};
    } else {
      out[i] = {TokenKind::kPlain, tok};
    }
  }
  return out;
}

std::string JoinWords(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (w.empty()) continue;
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// Word-level state of one prefix. Built lazily from the parent's.
struct PrefixInfo {
  bool valid = true;
  int lex_node = Lexicon::kRoot;
  std::string pending;               // partial word
  std::vector<std::string> emitted;  // words completed by this node's token
  LmState lm_state;
  double lm_log10 = 0.0;
  int word_count = 0;
  int token_count = 0;
};

class PrefixSearch {
 public:
  PrefixSearch(const EmissionMatrix& em, const DecoderConfig& cfg, const ArpaLm* lm,
               const Lexicon* lexicon)
      : em_(em),
        cfg_(cfg),
        lm_(lm),
        lexicon_(cfg.use_lexicon ? lexicon : nullptr),
        tokens_(ClassifyVocab(em.vocab(), em.blank())),
        lm_scale_(cfg.lm_weight * std::numbers::ln10) {
    nodes_.push_back({-1, -1});
    auto root = std::make_unique<PrefixInfo>();
    if (lm_) root->lm_state = lm_->BeginSentenceState();
    info_.push_back(std::move(root));
  }

  std::vector<Hypothesis> Run();

 private:
  struct Node {
    int parent;
    int token;
  };
  struct Beam {
    int node;
    double pb;   // ending in blank
    double pnb;  // ending in a non-blank
    double Total() const { return LogAdd(pb, pnb); }
  };
  struct Candidate {
    int node;
    double pb = kNegInf;
    double pnb = kNegInf;
    double score = kNegInf;
  };

  int Child(int node, int token) {
    const std::uint64_t key = (static_cast<std::uint64_t>(node) << 32) |
                              static_cast<std::uint32_t>(token);
    auto [it, inserted] = children_.emplace(key, static_cast<int>(nodes_.size()));
    if (inserted) {
      nodes_.push_back({node, token});
      info_.emplace_back();
    }
    return it->second;
  }

  double Extra(const PrefixInfo& info) const {
    return lm_scale_ * info.lm_log10 + cfg_.word_bonus * info.word_count;
  }

  // Upper bound on Extra() for a node whose info is not built yet.
  double ExtraBound(int node) const {
    if (info_[node]) return Extra(*info_[node]);
    const PrefixInfo& parent = *info_[nodes_[node].parent];
    const TokenKind kind = tokens_[nodes_[node].token].kind;
    const bool may_complete = !parent.pending.empty() && kind != TokenKind::kPlain;
    return Extra(parent) + (may_complete ? std::max(0.0, cfg_.word_bonus) : 0.0);
  }

  // Finishes the pending word; false when the lexicon rejects it.
  bool CompleteWord(PrefixInfo& info) const {
    if (info.pending.empty()) return true;
    std::string word;
    if (lexicon_) {
      const std::string* w = lexicon_->WordAt(info.lex_node);
      if (!w) return false;
      word = *w;
    } else {
      word = info.pending;
    }
    if (lm_) {
      auto scored = lm_->Score(info.lm_state, word);
      info.lm_log10 += scored.log10_prob;
      info.lm_state = std::move(scored.next);
    }
    ++info.word_count;
    info.emitted.push_back(std::move(word));
    info.pending.clear();
    info.lex_node = Lexicon::kRoot;
    return true;
  }

  const PrefixInfo& Info(int node) {
    if (info_[node]) return *info_[node];
    const PrefixInfo& parent = Info(nodes_[node].parent);
    auto info = std::make_unique<PrefixInfo>();
    info->lex_node = parent.lex_node;
    info->pending = parent.pending;
    info->lm_state = parent.lm_state;
    info->lm_log10 = parent.lm_log10;
    info->word_count = parent.word_count;
    info->token_count = parent.token_count + 1;
    info->valid = parent.valid;

    const int token = nodes_[node].token;
    const TokenInfo& tok = tokens_[token];
    auto walk = [&](int from) {
      if (!lexicon_) return;
      info->lex_node = lexicon_->Child(from, static_cast<std::size_t>(token));
      if (info->lex_node == Lexicon::kNone) info->valid = false;
    };
    switch (tok.kind) {
      case TokenKind::kBlank:
        break;
      case TokenKind::kSeparator:
        info->valid = info->valid && CompleteWord(*info);
        break;
      case TokenKind::kTag:
        info->valid = info->valid && CompleteWord(*info);
        info->emitted.push_back(tok.text);
        break;
      case TokenKind::kWordStart:
        info->valid = info->valid && CompleteWord(*info);
        walk(Lexicon::kRoot);
        info->pending = tok.text;
        break;
      case TokenKind::kPlain:
        walk(info->pending.empty() ? Lexicon::kRoot : info->lex_node);
        info->pending += tok.text;
        break;
    }
    info_[node] = std::move(info);
    return *info_[node];
  }

  std::vector<int> Tokens(int node) const {
    std::vector<int> out;
    for (; node > 0; node = nodes_[node].parent) out.push_back(nodes_[node].token);
    std::reverse(out.begin(), out.end());
    return out;
  }

  std::vector<std::string> Words(int node) const {
    std::vector<std::vector<const std::string*>> chunks;
    for (; node > 0; node = nodes_[node].parent) {
      std::vector<const std::string*> chunk;
      for (const auto& w : info_[node]->emitted) chunk.push_back(&w);
      chunks.push_back(std::move(chunk));
    }
    std::vector<std::string> words;
    for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) {
      for (const auto* w : *it) words.push_back(*w);
    }
    return words;
  }

  const EmissionMatrix& em_;
  const DecoderConfig& cfg_;
  const ArpaLm* lm_;
  const Lexicon* lexicon_;
  std::vector<TokenInfo> tokens_;
  double lm_scale_;
  std::vector<Node> nodes_;
  std::vector<std::unique_ptr<PrefixInfo>> info_;
  std::unordered_map<std::uint64_t, int> children_;
};

std::vector<Hypothesis> PrefixSearch::Run() {
  const int blank = static_cast<int>(em_.blank());
  const int classes = static_cast<int>(em_.classes());
  const std::size_t beam_size = static_cast<std::size_t>(cfg_.beam_size);

  std::vector<Beam> beam = {{0, 0.0, kNegInf}};
  std::vector<Candidate> cands;
  std::unordered_map<int, std::size_t> slot;

  for (std::size_t t = 0; t < em_.frames(); ++t) {
    auto row = em_.Row(t);
    cands.clear();
    slot.clear();
    auto cand = [&](int node) -> Candidate& {
      auto [it, inserted] = slot.emplace(node, cands.size());
      if (inserted) cands.push_back({node});
      return cands[it->second];
    };

    for (const Beam& b : beam) {
      const double total = b.Total();
      const int last = b.node > 0 ? nodes_[b.node].token : -1;
      {
        Candidate& stay = cand(b.node);
        stay.pb = LogAdd(stay.pb, total + row[blank]);
        if (last >= 0 && row[last] >= cfg_.prune_log_threshold) {
          stay.pnb = LogAdd(stay.pnb, b.pnb + row[last]);
        }
      }
      for (int c = 0; c < classes; ++c) {
        if (c == blank || row[c] < cfg_.prune_log_threshold) continue;
        const int child = Child(b.node, c);
        Candidate& ext = cand(child);
        const double from = c == last ? b.pb : total;
        ext.pnb = LogAdd(ext.pnb, from + row[c]);
      }
    }

    // Rank by an optimistic bound, then score exactly only as far as needed
    // to fill the beam.
    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(cands.size());
    for (std::size_t i = 0; i < cands.size(); ++i) {
      const double acoustic = LogAdd(cands[i].pb, cands[i].pnb);
      if (acoustic == kNegInf) continue;
      order.emplace_back(acoustic + ExtraBound(cands[i].node), i);
    }
    std::sort(order.begin(), order.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return cands[a.second].node < cands[b.second].node;
    });

    std::vector<std::size_t> scored;
    std::vector<double> best;  // min-heap of exact scores, size <= beam_size
    for (const auto& [bound, i] : order) {
      if (best.size() == beam_size && bound < best.front()) break;
      Candidate& c = cands[i];
      const PrefixInfo& info = Info(c.node);
      if (!info.valid) continue;
      c.score = LogAdd(c.pb, c.pnb) + Extra(info);
      scored.push_back(i);
      best.push_back(c.score);
      std::push_heap(best.begin(), best.end(), std::greater<>());
      if (best.size() > beam_size) {
        std::pop_heap(best.begin(), best.end(), std::greater<>());
        best.pop_back();
      }
    }
    std::sort(scored.begin(), scored.end(), [&](std::size_t a, std::size_t b) {
      if (cands[a].score != cands[b].score) return cands[a].score > cands[b].score;
      return cands[a].node < cands[b].node;
    });
    if (scored.size() > beam_size) scored.resize(beam_size);

    beam.clear();
    for (std::size_t i : scored) beam.push_back({cands[i].node, cands[i].pb, cands[i].pnb});
    if (beam.empty()) return {};
  }

  std::vector<Hypothesis> hyps;
  for (const Beam& b : beam) {
    PrefixInfo final_info = Info(b.node);
    final_info.emitted.clear();
    if (!CompleteWord(final_info)) continue;
    if (lm_) final_info.lm_log10 += lm_->EndSentence(final_info.lm_state);

    Hypothesis h;
    h.tokens = Tokens(b.node);
    auto words = Words(b.node);
    for (auto& w : final_info.emitted) words.push_back(std::move(w));
    h.text = JoinWords(words);
    h.acoustic_logprob = b.Total();
    h.lm_log10prob = final_info.lm_log10;
    h.word_count = final_info.word_count;
    h.token_count = final_info.token_count;
    h.combined_score = h.acoustic_logprob + Extra(final_info);
    h.confidence = std::exp(h.acoustic_logprob / std::max(1, h.token_count));
    hyps.push_back(std::move(h));
  }
  std::sort(hyps.begin(), hyps.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.combined_score != b.combined_score) return a.combined_score > b.combined_score;
    return a.text < b.text;
  });

  std::vector<Hypothesis> out;
  std::set<std::string> seen;
  for (auto& h : hyps) {
    if (!seen.insert(h.text).second) continue;
    out.push_back(std::move(h));
    if (out.size() == static_cast<std::size_t>(cfg_.nbest)) break;
  }
  return out;
}

}  // namespace

void DecoderConfig::Validate() const {
  if (beam_size < 1) throw ValidationError("beam_size must be >= 1");
  if (nbest < 1 || nbest > beam_size) {
    throw ValidationError("nbest must lie in [1, beam_size]");
  }
  if (!(lm_weight >= 0.0)) throw ValidationError("lm_weight must be >= 0");
  if (!std::isfinite(word_bonus)) throw ValidationError("word_bonus must be finite");
}

std::string TokensToText(const std::vector<std::string>& vocab,
                         const std::vector<int>& tokens) {
  // Blank index is irrelevant here: collapsed sequences carry no blanks.
  auto kinds = ClassifyVocab(vocab, vocab.size());
  std::vector<std::string> words;
  std::string pending;
  auto flush = [&] {
    if (!pending.empty()) words.push_back(std::move(pending));
    pending.clear();
  };
  for (int t : tokens) {
    const TokenInfo& tok = kinds.at(static_cast<std::size_t>(t));
    switch (tok.kind) {
      case TokenKind::kBlank:
        break;
      case TokenKind::kSeparator:
        flush();
        break;
      case TokenKind::kTag:
        flush();
        words.push_back(tok.text);
        break;
      case TokenKind::kWordStart:
        flush();
        pending = tok.text;
        break;
      case TokenKind::kPlain:
        pending += tok.text;
        break;
    }
  }
  flush();
  return JoinWords(words);
}

std::vector<int> GreedyTokens(const EmissionMatrix& em) {
  std::vector<int> out;
  int prev = -1;
  for (std::size_t t = 0; t < em.frames(); ++t) {
    auto row = em.Row(t);
    const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
    if (best != prev && best != static_cast<int>(em.blank())) out.push_back(best);
    prev = best;
  }
  return out;
}

std::string GreedyDecode(const EmissionMatrix& em) {
  return TokensToText(em.vocab(), GreedyTokens(em));
}

std::vector<Hypothesis> BeamSearch(const EmissionMatrix& em, const DecoderConfig& cfg,
                                   const ArpaLm* lm, const Lexicon* lexicon) {
  cfg.Validate();
  if (cfg.use_lexicon && !lexicon) throw ValidationError("lexicon mode needs a lexicon");
  if (cfg.lm_weight > 0.0 && !lm) throw ValidationError("lm_weight > 0 needs a language model");
  em.CheckNormalized();
  return PrefixSearch(em, cfg, lm, lexicon).Run();
}

LanguageSelection SelectLanguageHypothesis(const std::vector<Hypothesis>& nbest,
                                           LanguageTag want) {
  if (nbest.empty()) throw ValidationError("empty n-best list");
  for (const auto& h : nbest) {
    if (StripLanguageTag(h.text).lang == want) return {h, false};
  }
  return {nbest.front(), true};
}

}  // namespace plkit
