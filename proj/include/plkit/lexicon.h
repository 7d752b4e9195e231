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

#ifndef PLKIT_LEXICON_H_
#define PLKIT_LEXICON_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace plkit {

struct LexiconEntry {
  std::string word;
  std::vector<std::string> spelling;  // token strings
  long line = 0;
};

// Reads "word<TAB>token token token" lines.
std::vector<LexiconEntry> ReadLexiconEntries(const std::filesystem::path& path);

// Trie from token-index sequences to words, bound to one emission vocabulary.
class Lexicon {
 public:
  static constexpr int kRoot = 0;
  static constexpr int kNone = -1;

  // Throws ParseError when a spelling uses a token missing from vocab.
  Lexicon(const std::vector<LexiconEntry>& entries,
          const std::vector<std::string>& vocab);

  int Child(int node, std::size_t token) const;
  // Word ending at node, or nullptr. With homographs the first entry wins.
  const std::string* WordAt(int node) const;

  const std::vector<std::string>& words() const { return words_; }
  bool ContainsWord(std::string_view word) const;
  std::size_t node_count() const { return nodes_.size(); }

 private:
  struct Node {
    std::map<std::size_t, int> children;
    int word = -1;
  };
  std::vector<Node> nodes_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> word_ids_;
};

}  // namespace plkit

#endif  // PLKIT_LEXICON_H_
