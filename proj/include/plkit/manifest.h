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

#ifndef PLKIT_MANIFEST_H_
#define PLKIT_MANIFEST_H_

#include <array>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace plkit {

enum class LanguageTag { kEn, kIg, kYo, kPd, kHa };

inline constexpr std::array<LanguageTag, 5> kAllLanguages = {
    LanguageTag::kEn, LanguageTag::kIg, LanguageTag::kYo, LanguageTag::kPd,
    LanguageTag::kHa};

// "en", "ig", "yo", "pd", "ha".
std::string_view LanguageCode(LanguageTag lang);

// Accepts the five codes plus "pcm" as an alias for pd.
std::optional<LanguageTag> ParseLanguageCode(std::string_view code);

// "<|pd|>" and friends.
std::string TagToken(LanguageTag lang);
std::optional<LanguageTag> ParseTagToken(std::string_view token);

struct ManifestEntry {
  std::string audio_path;
  double duration_s = 0.0;
  std::string text;
  LanguageTag lang = LanguageTag::kEn;
  std::optional<double> confidence;
  std::optional<std::string> source;

  bool operator==(const ManifestEntry&) const = default;
};

// Throws ValidationError when an invariant is broken (negative duration,
// confidence outside (0,1], newline in text).
void ValidateEntry(const ManifestEntry& entry);

ManifestEntry ParseManifestLine(std::string_view line, long line_number);
std::string FormatManifestLine(const ManifestEntry& entry);

// Streams a manifest one line at a time. Blank lines are skipped.
// Returns false from the callback to stop early.
void ForEachManifestEntry(
    const std::filesystem::path& path,
    const std::function<bool(ManifestEntry&&, long line_number)>& fn);

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path);
void WriteManifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path);

// "<|xx|> " + text. Throws ValidationError("already tagged") when text
// already starts with a valid tag token.
std::string PrependLanguageTag(std::string_view text, LanguageTag lang);

struct TaggedText {
  std::optional<LanguageTag> lang;
  std::string text;
};

// Splits a leading tag token off. Unknown <|..|> tokens are plain text.
TaggedText StripLanguageTag(std::string_view text);

}  // namespace plkit

#endif  // PLKIT_MANIFEST_H_
