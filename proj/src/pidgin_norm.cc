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

// Pidgin orthography normalization: variant replacement, LM-based homophone
// choice, and variant mining from hypothesis/reference alignments.

#include <algorithm>
#include <fstream>
#include <map>

#include "plkit/error.h"
#include "plkit/text_norm.h"

namespace plkit {

namespace {

std::string Join(const std::vector<std::string>& words, std::size_t begin,
                 std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += words[i];
  }
  return out;
}

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

VariantTable::VariantTable(std::vector<std::pair<std::string, std::string>> entries) {
  for (auto& [source, replacement] : entries) {
    auto src_words = SplitWords(source);
    auto rep_words = SplitWords(replacement);
    if (src_words.empty() || rep_words.empty()) {
      throw ValidationError("empty variant entry");
    }
    std::string key = Join(src_words, 0, src_words.size());
    if (!index_.emplace(key, entries_.size()).second) {
      throw ValidationError("duplicate variant source '" + key + "'");
    }
    max_words_ = std::max(max_words_, src_words.size());
    entries_.emplace_back(std::move(key), Join(rep_words, 0, rep_words.size()));
  }
  // Closure: no replacement may contain a source phrase, so one pass is final.
  for (const auto& [source, replacement] : entries_) {
    auto words = SplitWords(replacement);
    for (std::size_t i = 0; i < words.size(); ++i) {
      for (std::size_t j = i + 1; j <= words.size() && j - i <= max_words_; ++j) {
        if (index_.contains(Join(words, i, j))) {
          throw ValidationError("variant table is not closed: '" + source + "' -> '" +
                                replacement + "'");
        }
      }
    }
  }
}

VariantTable VariantTable::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open variant table " + path.string());
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected source<TAB>replacement", line_no);
    entries.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return VariantTable(std::move(entries));
}

std::string VariantTable::Apply(std::string_view text) const {
  auto words = SplitWords(text);
  std::vector<std::string> out;
  out.reserve(words.size());
  for (std::size_t i = 0; i < words.size();) {
    bool replaced = false;
    for (std::size_t len = std::min(max_words_, words.size() - i); len >= 1; --len) {
      auto it = index_.find(Join(words, i, i + len));
      if (it != index_.end()) {
        out.push_back(entries_[it->second].second);
        i += len;
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(words[i++]);
  }
  return Join(out, 0, out.size());
}

HomophoneSets::HomophoneSets(std::vector<std::vector<std::string>> sets)
    : sets_(std::move(sets)) {
  for (auto& set : sets_) {
    if (set.size() < 2) throw ValidationError("homophone set needs >= 2 members");
    for (auto& member : set) member = Preprocess(member, false);
    for (const auto& member : set) {
      if (member.find(' ') != std::string::npos) continue;
      auto& cands = candidates_[member];
      if (cands.empty()) cands.push_back(member);
      for (const auto& other : set) {
        if (other.find(' ') != std::string::npos) continue;
        if (std::find(cands.begin(), cands.end(), other) == cands.end()) {
          cands.push_back(other);
        }
      }
    }
  }
}

HomophoneSets HomophoneSets::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open homophone sets " + path.string());
  std::vector<std::vector<std::string>> sets;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    std::vector<std::string> set;
    std::size_t start = 0;
    while (start <= trimmed.size()) {
      auto bar = trimmed.find('|', start);
      if (bar == std::string::npos) bar = trimmed.size();
      std::string member = Trim(std::string_view(trimmed).substr(start, bar - start));
      if (member.empty()) throw ParseError("empty homophone member", line_no);
      set.push_back(std::move(member));
      start = bar + 1;
    }
    if (set.size() < 2) throw ParseError("homophone set needs >= 2 members", line_no);
    sets.push_back(std::move(set));
  }
  return HomophoneSets(std::move(sets));
}

const std::vector<std::string>& HomophoneSets::Candidates(std::string_view word) const {
  static const std::vector<std::string> kEmpty;
  auto it = candidates_.find(std::string(word));
  if (it == candidates_.end() || it->second.size() < 2) return kEmpty;
  return it->second;
}

namespace {

// log10 probability of the words whose LM history can see position i.
double ContextScore(const ArpaLm& lm, const std::vector<std::string>& words,
                    std::size_t i, const HomophoneOptions& options) {
  if (options.full_sentence) return SentenceLogProb(lm, words);
  const std::size_t window = static_cast<std::size_t>(std::max(0, options.window));
  const std::size_t lo = i > window ? i - window : 0;
  const std::size_t hi = std::min(words.size() - 1, i + window);
  LmState state = lo == 0 ? lm.BeginSentenceState() : lm.NullState();
  for (std::size_t j = lo; j < i; ++j) state = lm.Score(state, words[j]).next;
  double total = 0.0;
  for (std::size_t j = i; j <= hi; ++j) {
    auto scored = lm.Score(state, words[j]);
    total += scored.log10_prob;
    state = std::move(scored.next);
  }
  if (hi == words.size() - 1) total += lm.EndSentence(state);
  return total;
}

}  // namespace

std::string DisambiguateHomophones(std::string_view text, const HomophoneSets& sets,
                                   const ArpaLm& lm, const HomophoneOptions& options) {
  auto words = SplitWords(text);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& cands = sets.Candidates(words[i]);
    if (cands.empty()) continue;
    const std::string original = words[i];
    std::string best = original;
    double best_score = ContextScore(lm, words, i, options);
    for (const auto& cand : cands) {
      if (cand == original) continue;
      words[i] = cand;
      const double score = ContextScore(lm, words, i, options);
      if (score > best_score) {
        best_score = score;
        best = cand;
      }
    }
    words[i] = best;
  }
  return Join(words, 0, words.size());
}

std::vector<EditOp> AlignWords(const std::vector<std::string>& ref,
                               const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  // cost = (edits, insertions + deletions), compared lexicographically.
  using Cost = std::pair<std::size_t, std::size_t>;
  std::vector<std::vector<Cost>> dp(n + 1, std::vector<Cost>(m + 1));
  for (std::size_t i = 1; i <= n; ++i) dp[i][0] = {i, i};
  for (std::size_t j = 1; j <= m; ++j) dp[0][j] = {j, j};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const bool same = ref[i - 1] == hyp[j - 1];
      Cost diag = {dp[i - 1][j - 1].first + (same ? 0 : 1), dp[i - 1][j - 1].second};
      Cost del = {dp[i - 1][j].first + 1, dp[i - 1][j].second + 1};
      Cost ins = {dp[i][j - 1].first + 1, dp[i][j - 1].second + 1};
      dp[i][j] = std::min({diag, del, ins});
    }
  }
  std::vector<EditOp> ops;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      const bool same = ref[i - 1] == hyp[j - 1];
      Cost diag = {dp[i - 1][j - 1].first + (same ? 0 : 1), dp[i - 1][j - 1].second};
      if (diag == dp[i][j]) {
        ops.push_back(same ? EditOp::kMatch : EditOp::kSubstitute);
        --i;
        --j;
        continue;
      }
    }
    if (i > 0 && Cost{dp[i - 1][j].first + 1, dp[i - 1][j].second + 1} == dp[i][j]) {
      ops.push_back(EditOp::kDelete);
      --i;
    } else {
      ops.push_back(EditOp::kInsert);
      --j;
    }
  }
  std::reverse(ops.begin(), ops.end());
  return ops;
}

std::vector<AlignmentPair> MineVariants(const std::vector<std::string>& refs,
                                        const std::vector<std::string>& hyps,
                                        long min_count) {
  if (refs.size() != hyps.size()) {
    throw ValidationError("refs and hyps differ in length");
  }
  std::map<std::pair<std::string, std::string>, long> counts;
  for (std::size_t u = 0; u < refs.size(); ++u) {
    auto ref = SplitWords(refs[u]);
    auto hyp = SplitWords(hyps[u]);
    std::size_t i = 0, j = 0;
    for (EditOp op : AlignWords(ref, hyp)) {
      switch (op) {
        case EditOp::kMatch: ++i; ++j; break;
        case EditOp::kSubstitute: ++counts[{ref[i++], hyp[j++]}]; break;
        case EditOp::kDelete: ++i; break;
        case EditOp::kInsert: ++j; break;
      }
    }
  }
  std::vector<AlignmentPair> out;
  for (const auto& [key, count] : counts) {
    if (count >= min_count) out.push_back({key.first, key.second, count});
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.count > b.count;
  });
  return out;
}

}  // namespace plkit
