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

#include "plkit/lexicon.h"

#include <fstream>
#include <unordered_map>

#include "plkit/error.h"
#include "plkit/ngram_lm.h"

namespace plkit {

std::vector<LexiconEntry> ReadLexiconEntries(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::vector<LexiconEntry> entries;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError("expected word<TAB>tokens", line_no);
    }
    LexiconEntry e;
    e.word = line.substr(0, tab);
    e.spelling = SplitWords(std::string_view(line).substr(tab + 1));
    e.line = line_no;
    if (e.spelling.empty()) throw ParseError("empty spelling", line_no);
    entries.push_back(std::move(e));
  }
  return entries;
}

Lexicon::Lexicon(const std::vector<LexiconEntry>& entries,
                 const std::vector<std::string>& vocab)
    : nodes_(1) {
  std::unordered_map<std::string, std::size_t> token_index;
  for (std::size_t i = 0; i < vocab.size(); ++i) token_index.emplace(vocab[i], i);

  for (const auto& e : entries) {
    int node = kRoot;
    for (const auto& tok : e.spelling) {
      auto it = token_index.find(tok);
      if (it == token_index.end()) {
        throw ParseError("lexicon token '" + tok + "' not in vocabulary", e.line);
      }
      auto child = nodes_[node].children.find(it->second);
      if (child == nodes_[node].children.end()) {
        nodes_.emplace_back();
        const int id = static_cast<int>(nodes_.size()) - 1;
        nodes_[node].children.emplace(it->second, id);
        node = id;
      } else {
        node = child->second;
      }
    }
    auto [it, inserted] = word_ids_.emplace(e.word, static_cast<int>(words_.size()));
    if (inserted) words_.push_back(e.word);
    if (nodes_[node].word < 0) nodes_[node].word = it->second;
  }
}

int Lexicon::Child(int node, std::size_t token) const {
  const auto& children = nodes_[node].children;
  auto it = children.find(token);
  return it == children.end() ? kNone : it->second;
}

const std::string* Lexicon::WordAt(int node) const {
  const int w = nodes_[node].word;
  return w < 0 ? nullptr : &words_[w];
}

bool Lexicon::ContainsWord(std::string_view word) const {
  return word_ids_.contains(std::string(word));
}

}  // namespace plkit
