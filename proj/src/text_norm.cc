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

#include "plkit/text_norm.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/locid.h>

#include <unordered_set>

#include "plkit/error.h"

namespace plkit {

namespace {

const icu::Normalizer2& Nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFC unavailable");
  return *n;
}

const icu::Normalizer2& Nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status)) throw std::runtime_error("ICU NFD unavailable");
  return *n;
}

std::string ToUtf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString Normalize(const icu::Normalizer2& form, const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = form.normalize(s, status);
  if (U_FAILURE(status)) throw ValidationError("Unicode normalization failed");
  return out;
}

bool IsApostrophe(UChar32 c) { return c == 0x27 || c == 0x2019 || c == 0x02BC; }

std::string CollapseSpaces(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (c == ' ') {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  return out;
}

}  // namespace

std::string Preprocess(std::string_view text, bool spell_digits) {
  icu::UnicodeString s = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  s.toLower(icu::Locale::getRoot());

  std::string out;
  std::string digits;
  auto flush_digits = [&] {
    if (digits.empty()) return;
    out += ' ';
    out += SpellDigitRun(digits);
    out += ' ';
    digits.clear();
  };

  icu::UnicodeString kept;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (spell_digits && c >= '0' && c <= '9') {
      if (kept.length()) {
        out += ToUtf8(kept);
        kept.remove();
      }
      digits += static_cast<char>(c);
      continue;
    }
    if (!digits.empty()) flush_digits();
    if (IsApostrophe(c)) {
      kept.append(static_cast<UChar32>('\''));
    } else if (c == '-') {
      kept.append(c);
    } else if (u_isUWhiteSpace(c)) {
      kept.append(static_cast<UChar32>(' '));
    } else {
      const int32_t mask = U_GET_GC_MASK(c);
      if (mask & (U_GC_P_MASK | U_GC_S_MASK | U_GC_C_MASK | U_GC_Z_MASK)) {
        kept.append(static_cast<UChar32>(' '));
      } else {
        kept.append(c);
      }
    }
  }
  flush_digits();
  out += ToUtf8(kept);

  icu::UnicodeString collapsed = icu::UnicodeString::fromUTF8(CollapseSpaces(out));
  return ToUtf8(Normalize(Nfc(), collapsed));
}

std::string StripDiacritics(std::string_view text) {
  icu::UnicodeString s = Normalize(
      Nfd(), icu::UnicodeString::fromUTF8(
                 icu::StringPiece(text.data(), static_cast<int32_t>(text.size()))));
  icu::UnicodeString bare;
  for (int32_t i = 0; i < s.length();) {
    const UChar32 c = s.char32At(i);
    i += U16_LENGTH(c);
    if (U_GET_GC_MASK(c) & U_GC_M_MASK) continue;
    bare.append(c);
  }
  return ToUtf8(Normalize(Nfc(), bare));
}

std::vector<std::string> DedupAndFilter(const std::vector<std::string>& corpus,
                                        const std::vector<std::string>& heldout) {
  std::unordered_set<std::string> blocked;
  for (const auto& line : heldout) blocked.insert(Preprocess(line, false));
  std::unordered_set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& line : corpus) {
    std::string key = Preprocess(line, false);
    if (blocked.contains(key)) continue;
    if (!seen.insert(std::move(key)).second) continue;
    out.push_back(line);
  }
  return out;
}

}  // namespace plkit
