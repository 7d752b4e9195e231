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

#include <array>
#include <string>

#include "plkit/text_norm.h"

namespace plkit {

namespace {

constexpr std::array<const char*, 20> kOnes = {
    "zero",    "one",     "two",       "three",    "four",
    "five",    "six",     "seven",     "eight",    "nine",
    "ten",     "eleven",  "twelve",    "thirteen", "fourteen",
    "fifteen", "sixteen", "seventeen", "eighteen", "nineteen"};
constexpr std::array<const char*, 10> kTens = {
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety"};
constexpr std::array<const char*, 5> kScales = {"", "thousand", "million", "billion",
                                                "trillion"};

constexpr std::uint64_t kCardinalLimit = 1'000'000'000'000'000ULL;

void Append(std::string& out, const char* word) {
  if (!out.empty()) out += ' ';
  out += word;
}

// 1..999
void AppendHundreds(std::string& out, unsigned n) {
  if (n >= 100) {
    Append(out, kOnes[n / 100]);
    Append(out, "hundred");
    n %= 100;
  }
  if (n >= 20) {
    Append(out, kTens[n / 10]);
    if (n % 10) Append(out, kOnes[n % 10]);
  } else if (n > 0) {
    Append(out, kOnes[n]);
  }
}

}  // namespace

std::string CardinalWords(std::uint64_t value) {
  if (value == 0) return kOnes[0];
  if (value >= kCardinalLimit) return SpellDigitRun(std::to_string(value));
  std::array<unsigned, kScales.size()> groups{};
  for (auto& g : groups) {
    g = static_cast<unsigned>(value % 1000);
    value /= 1000;
  }
  std::string out;
  for (std::size_t i = groups.size(); i-- > 0;) {
    if (groups[i] == 0) continue;
    AppendHundreds(out, groups[i]);
    if (i > 0) Append(out, kScales[i]);
  }
  return out;
}

std::string SpellDigitRun(std::string_view digits) {
  const bool by_digit = digits.size() > 15 || (digits.size() > 1 && digits[0] == '0');
  if (!by_digit) return CardinalWords(std::stoull(std::string(digits)));
  std::string out;
  for (char c : digits) Append(out, kOnes[c - '0']);
  return out;
}

}  // namespace plkit
