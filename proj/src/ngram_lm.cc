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

#include "plkit/ngram_lm.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "plkit/error.h"

namespace plkit {

std::vector<std::string> SplitWords(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
           c == '\f';
  };
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) words.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return words;
}

TokenizedCorpus TokenizedCorpus::FromLines(const std::vector<std::string>& lines) {
  TokenizedCorpus corpus;
  for (const auto& line : lines) {
    auto words = SplitWords(line);
    if (!words.empty()) corpus.sentences.push_back(std::move(words));
  }
  return corpus;
}

TokenizedCorpus TokenizedCorpus::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return FromLines(lines);
}

std::set<std::string> TokenizedCorpus::Vocabulary() const {
  std::set<std::string> vocab;
  for (const auto& s : sentences) vocab.insert(s.begin(), s.end());
  return vocab;
}

std::size_t NGramKeyHash::operator()(const std::vector<WordId>& key) const noexcept {
  std::size_t h = 0xcbf29ce484222325ULL;
  for (WordId w : key) {
    h ^= w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  }
  return h;
}

ArpaLm::ArpaLm(std::vector<std::string> words, std::vector<NGramTable> tables)
    : words_(std::move(words)), tables_(std::move(tables)) {
  if (tables_.empty()) throw ValidationError("language model needs order >= 1");
  for (WordId i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], i).second) {
      throw ValidationError("duplicate vocabulary word '" + words_[i] + "'");
    }
  }
  auto require = [&](std::string_view w) {
    auto it = index_.find(std::string(w));
    if (it == index_.end() || !tables_[0].contains({it->second})) {
      throw ValidationError("language model lacks " + std::string(w));
    }
    return it->second;
  };
  bos_ = require(kBos);
  eos_ = require(kEos);
  unk_ = require(kUnk);
}

WordId ArpaLm::Index(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? unk_ : it->second;
}

bool ArpaLm::Contains(std::string_view word) const {
  return index_.contains(std::string(word));
}

double ArpaLm::unk_log10_prob() const {
  return tables_[0].at({unk_}).log10_prob;
}

LmState ArpaLm::BeginSentenceState() const {
  if (order() == 1) return {};
  return LmState{{bos_}};
}

const NGramEntry* ArpaLm::Find(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > tables_.size()) return nullptr;
  const auto& table = tables_[ngram.size() - 1];
  auto it = table.find(std::vector<WordId>(ngram.begin(), ngram.end()));
  return it == table.end() ? nullptr : &it->second;
}

ScoredWord ArpaLm::Score(const LmState& state, WordId word) const {
  if (word >= words_.size()) word = unk_;
  const auto& ctx = state.context;
  std::vector<WordId> key;
  key.reserve(ctx.size() + 1);
  double backoff = 0.0;
  double prob = 0.0;
  for (std::size_t j = ctx.size();; --j) {
    key.assign(ctx.end() - static_cast<std::ptrdiff_t>(j), ctx.end());
    key.push_back(word);
    if (const NGramEntry* e = Find(key)) {
      prob = e->log10_prob + backoff;
      break;
    }
    if (j == 0) {
      // Word absent from the unigram table: score as <unk>.
      prob = unk_log10_prob() + backoff;
      break;
    }
    key.pop_back();
    if (const NGramEntry* c = Find(key)) backoff += c->log10_backoff;
  }

  LmState next;
  const std::size_t keep = static_cast<std::size_t>(order() - 1);
  if (keep > 0) {
    next.context = ctx;
    next.context.push_back(word);
    if (next.context.size() > keep) {
      next.context.erase(next.context.begin(),
                         next.context.end() - static_cast<std::ptrdiff_t>(keep));
    }
  }
  return {prob, std::move(next)};
}

double ArpaLm::EndSentence(const LmState& state) const {
  return Score(state, eos_).log10_prob;
}

double SentenceLogProb(const ArpaLm& lm, const std::vector<std::string>& words) {
  LmState state = lm.BeginSentenceState();
  double total = 0.0;
  for (const auto& w : words) {
    auto scored = lm.Score(state, w);
    total += scored.log10_prob;
    state = std::move(scored.next);
  }
  return total + lm.EndSentence(state);
}

double Perplexity(const ArpaLm& lm, const TokenizedCorpus& corpus) {
  if (corpus.sentences.empty()) throw ValidationError("perplexity of an empty corpus");
  double total = 0.0;
  std::size_t tokens = 0;
  for (const auto& s : corpus.sentences) {
    total += SentenceLogProb(lm, s);
    tokens += s.size() + 1;
  }
  return std::pow(10.0, -total / static_cast<double>(tokens));
}

namespace {

std::string FormatLogProb(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.7g", v);
  return buf;
}

bool ParseDouble(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  *out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(*out);
}

}  // namespace

void WriteArpa(const ArpaLm& lm, std::ostream& out) {
  out << "\\data\\\n";
  for (int k = 1; k <= lm.order(); ++k) {
    out << "ngram " << k << '=' << lm.table(k).size() << '\n';
  }
  for (int k = 1; k <= lm.order(); ++k) {
    out << "\n\\" << k << "-grams:\n";
    const auto& table = lm.table(k);
    std::vector<const std::pair<const std::vector<WordId>, NGramEntry>*> rows;
    rows.reserve(table.size());
    for (const auto& kv : table) rows.push_back(&kv);
    std::sort(rows.begin(), rows.end(),
              [](auto* a, auto* b) { return a->first < b->first; });
    for (const auto* row : rows) {
      out << FormatLogProb(row->second.log10_prob) << '\t';
      for (std::size_t i = 0; i < row->first.size(); ++i) {
        if (i) out << ' ';
        out << lm.Word(row->first[i]);
      }
      if (k < lm.order()) out << '\t' << FormatLogProb(row->second.log10_backoff);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

void WriteArpa(const ArpaLm& lm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  WriteArpa(lm, out);
  if (!out) throw IoError("write failed for " + path.string());
}

ArpaLm ReadArpa(std::istream& in) {
  std::string line;
  long line_no = 0;
  auto next_nonblank = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_nonblank() || line != "\\data\\") {
    throw ParseError("expected \\data\\ header", line_no);
  }
  std::vector<std::size_t> counts;
  bool have_line = next_nonblank();
  while (have_line && line.rfind("ngram ", 0) == 0) {
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("malformed ngram count", line_no);
    int k = std::atoi(line.substr(6, eq - 6).c_str());
    long n = std::atol(line.substr(eq + 1).c_str());
    if (k != static_cast<int>(counts.size()) + 1 || n < 0) {
      throw ParseError("malformed ngram count", line_no);
    }
    counts.push_back(static_cast<std::size_t>(n));
    have_line = next_nonblank();
  }
  if (counts.empty()) throw ParseError("no ngram counts in \\data\\", line_no);

  std::vector<std::string> words;
  std::unordered_map<std::string, WordId> index;
  std::vector<NGramTable> tables(counts.size());

  for (std::size_t k = 1; k <= counts.size(); ++k) {
    std::string header = "\\" + std::to_string(k) + "-grams:";
    if (!have_line || line != header) throw ParseError("expected " + header, line_no);
    std::size_t seen = 0;
    while ((have_line = next_nonblank()) && line[0] != '\\') {
      std::istringstream fields(line);
      std::vector<std::string> tok;
      for (std::string t; fields >> t;) tok.push_back(t);
      if (tok.size() != k + 1 && tok.size() != k + 2) {
        throw ParseError("wrong field count in " + std::to_string(k) + "-gram",
                         line_no);
      }
      NGramEntry entry;
      if (!ParseDouble(tok[0], &entry.log10_prob) ||
          (tok.size() == k + 2 && !ParseDouble(tok[k + 1], &entry.log10_backoff))) {
        throw ParseError("bad number", line_no);
      }
      std::vector<WordId> key;
      for (std::size_t i = 1; i <= k; ++i) {
        auto it = index.find(tok[i]);
        if (k == 1) {
          if (it != index.end()) throw ParseError("duplicate unigram", line_no);
          it = index.emplace(tok[i], static_cast<WordId>(words.size())).first;
          words.push_back(tok[i]);
        } else if (it == index.end()) {
          throw ParseError("word '" + tok[i] + "' missing from unigrams", line_no);
        }
        key.push_back(it->second);
      }
      if (!tables[k - 1].emplace(std::move(key), entry).second) {
        throw ParseError("duplicate " + std::to_string(k) + "-gram", line_no);
      }
      ++seen;
    }
    if (seen != counts[k - 1]) {
      throw ParseError("expected " + std::to_string(counts[k - 1]) + " " +
                           std::to_string(k) + "-grams, found " +
                           std::to_string(seen),
                       line_no);
    }
  }
  if (!have_line || line != "\\end\\") throw ParseError("expected \\end\\", line_no);

  auto ensure = [&](std::string_view w, double log10_prob) {
    if (index.contains(std::string(w))) return;
    WordId id = static_cast<WordId>(words.size());
    index.emplace(std::string(w), id);
    words.emplace_back(w);
    tables[0].emplace(std::vector<WordId>{id}, NGramEntry{log10_prob, 0.0});
  };
  if (!index.contains(std::string(kEos))) throw ParseError("model lacks </s>");
  ensure(kBos, kBosLog10Prob);
  ensure(kUnk, kClosedUnkLog10Prob);
  return ArpaLm(std::move(words), std::move(tables));
}

ArpaLm ReadArpa(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return ReadArpa(in);
}

std::string FormatPerplexityTable(
    const std::vector<std::pair<std::string, double>>& columns) {
  std::ostringstream header, values;
  header << "| Language |";
  values << "| Perplexity |";
  for (const auto& [lang, ppl] : columns) {
    header << ' ' << lang << " |";
    values << ' ' << std::fixed << std::setprecision(2) << ppl << " |";
  }
  return header.str() + "\n" + values.str() + "\n";
}

}  // namespace plkit
