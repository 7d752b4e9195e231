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

#ifndef PLKIT_TESTS_SUPPORT_HOMOPHONE_SUITE_H_
#define PLKIT_TESTS_SUPPORT_HOMOPHONE_SUITE_H_

#include <string>
#include <vector>

#include "plkit/ngram_lm.h"
#include "plkit/text_norm.h"

namespace plkit::testing {

struct HomophoneCase {
  std::size_t set = 0;
  std::string input;
  std::string expected;
};

struct HomophoneSuite {
  std::vector<std::string> lm_corpus;
  std::vector<HomophoneCase> cases;
};

// Letters-only tag so context words never collide with real vocabulary.
inline std::string ContextWord(char side, std::size_t set, std::size_t member) {
  std::string w = "zq";
  w += side;
  for (std::size_t v : {set, member}) {
    w += static_cast<char>('a' + v / 26);
    w += static_cast<char>('a' + v % 26);
  }
  return w;
}

// Each single-word member gets a private left/right context in the corpus.
// Every wrong member placed in that context must be rewritten to the member
// the context was built for. Sets with fewer than two single-word members
// have nothing to choose between and must come back unchanged.
inline HomophoneSuite BuildHomophoneSuite(const HomophoneSets& sets) {
  HomophoneSuite suite;
  for (std::size_t s = 0; s < sets.sets().size(); ++s) {
    std::vector<std::string> singles;
    for (const auto& m : sets.sets()[s]) {
      if (m.find(' ') == std::string::npos) singles.push_back(m);
    }
    for (std::size_t j = 0; j < singles.size(); ++j) {
      const std::string left = ContextWord('l', s, j), right = ContextWord('r', s, j);
      for (int rep = 0; rep < 3; ++rep) {
        suite.lm_corpus.push_back(left + " " + singles[j] + " " + right);
      }
      if (singles.size() < 2) {
        const std::string line = left + " " + singles[j] + " " + right;
        suite.cases.push_back({s, line, line});
      }
      for (std::size_t k = 0; k < singles.size(); ++k) {
        if (k == j) continue;
        suite.cases.push_back({s, left + " " + singles[k] + " " + right,
                               left + " " + singles[j] + " " + right});
      }
    }
  }
  return suite;
}

inline ArpaLm HomophoneSuiteLm(const HomophoneSuite& suite) {
  return TrainLm(TokenizedCorpus::FromLines(suite.lm_corpus), {3, {}, false});
}

}  // namespace plkit::testing

#endif  // PLKIT_TESTS_SUPPORT_HOMOPHONE_SUITE_H_
