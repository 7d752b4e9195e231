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

#include "plkit/manifest.h"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "plkit/error.h"

namespace plkit {

namespace {

constexpr std::string_view kTagOpen = "<|";
constexpr std::string_view kTagClose = "|>";

double RoundConfidence(double c) { return std::round(c * 1e6) / 1e6; }

template <typename T>
T RequireField(const nlohmann::json& obj, const char* key, long line) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string("missing key '") + key + "'", line);
  }
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParseError(std::string("bad type for key '") + key + "'", line);
  }
}

}  // namespace

std::string_view LanguageCode(LanguageTag lang) {
  switch (lang) {
    case LanguageTag::kEn: return "en";
    case LanguageTag::kIg: return "ig";
    case LanguageTag::kYo: return "yo";
    case LanguageTag::kPd: return "pd";
    case LanguageTag::kHa: return "ha";
  }
  return "en";
}

std::optional<LanguageTag> ParseLanguageCode(std::string_view code) {
  for (LanguageTag lang : kAllLanguages) {
    if (code == LanguageCode(lang)) return lang;
  }
  if (code == "pcm") return LanguageTag::kPd;
  return std::nullopt;
}

std::string TagToken(LanguageTag lang) {
  std::string out(kTagOpen);
  out += LanguageCode(lang);
  out += kTagClose;
  return out;
}

std::optional<LanguageTag> ParseTagToken(std::string_view token) {
  if (token.size() < kTagOpen.size() + kTagClose.size() ||
      !token.starts_with(kTagOpen) || !token.ends_with(kTagClose)) {
    return std::nullopt;
  }
  std::string_view code = token.substr(
      kTagOpen.size(), token.size() - kTagOpen.size() - kTagClose.size());
  // Only the literal model tags count; "pcm" is a manifest alias, not a tag.
  for (LanguageTag lang : kAllLanguages) {
    if (code == LanguageCode(lang)) return lang;
  }
  return std::nullopt;
}

void ValidateEntry(const ManifestEntry& entry) {
  if (!(entry.duration_s >= 0.0) || !std::isfinite(entry.duration_s)) {
    throw ValidationError("duration_s must be a finite value >= 0");
  }
  if (entry.confidence &&
      !(*entry.confidence > 0.0 && *entry.confidence <= 1.0)) {
    throw ValidationError("confidence must lie in (0, 1]");
  }
  if (entry.text.find('\n') != std::string::npos ||
      entry.text.find('\r') != std::string::npos) {
    throw ValidationError("text contains a raw newline");
  }
}

ManifestEntry ParseManifestLine(std::string_view line, long line_number) {
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error&) {
    throw ParseError("malformed JSON", line_number);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", line_number);

  ManifestEntry e;
  e.audio_path = RequireField<std::string>(obj, "audio_path", line_number);
  e.duration_s = RequireField<double>(obj, "duration_s", line_number);
  e.text = RequireField<std::string>(obj, "text", line_number);
  auto code = RequireField<std::string>(obj, "lang", line_number);
  auto lang = ParseLanguageCode(code);
  if (!lang) throw ParseError("unknown language", line_number);
  e.lang = *lang;
  if (auto it = obj.find("confidence"); it != obj.end() && !it->is_null()) {
    if (!it->is_number()) throw ParseError("bad type for key 'confidence'", line_number);
    e.confidence = it->get<double>();
  }
  if (auto it = obj.find("source"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError("bad type for key 'source'", line_number);
    e.source = it->get<std::string>();
  }
  try {
    ValidateEntry(e);
  } catch (const ValidationError& err) {
    throw ParseError(err.what(), line_number);
  }
  return e;
}

std::string FormatManifestLine(const ManifestEntry& entry) {
  ValidateEntry(entry);
  nlohmann::ordered_json obj;
  obj["audio_path"] = entry.audio_path;
  obj["duration_s"] = entry.duration_s;
  obj["text"] = entry.text;
  obj["lang"] = std::string(LanguageCode(entry.lang));
  if (entry.confidence) obj["confidence"] = RoundConfidence(*entry.confidence);
  if (entry.source) obj["source"] = *entry.source;
  return obj.dump();
}

void ForEachManifestEntry(
    const std::filesystem::path& path,
    const std::function<bool(ManifestEntry&&, long line_number)>& fn) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (!fn(ParseManifestLine(line, line_number), line_number)) break;
  }
}

std::vector<ManifestEntry> ReadManifest(const std::filesystem::path& path) {
  std::vector<ManifestEntry> entries;
  ForEachManifestEntry(path, [&](ManifestEntry&& e, long) {
    entries.push_back(std::move(e));
    return true;
  });
  return entries;
}

void WriteManifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write manifest " + path.string());
  for (const auto& e : entries) out << FormatManifestLine(e) << '\n';
  if (!out) throw IoError("write failed for " + path.string());
}

std::string PrependLanguageTag(std::string_view text, LanguageTag lang) {
  if (StripLanguageTag(text).lang) throw ValidationError("already tagged");
  std::string out = TagToken(lang);
  out += ' ';
  out += text;
  return out;
}

TaggedText StripLanguageTag(std::string_view text) {
  if (text.starts_with(kTagOpen)) {
    auto close = text.find(kTagClose, kTagOpen.size());
    if (close != std::string_view::npos) {
      auto token = text.substr(0, close + kTagClose.size());
      if (auto lang = ParseTagToken(token)) {
        auto rest = text.substr(token.size());
        if (rest.starts_with(' ')) rest.remove_prefix(1);
        return {lang, std::string(rest)};
      }
    }
  }
  return {std::nullopt, std::string(text)};
}

}  // namespace plkit
