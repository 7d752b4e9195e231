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

#ifndef PLKIT_PIPELINE_H_
#define PLKIT_PIPELINE_H_

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "plkit/manifest.h"

namespace plkit {

struct FilterPolicy {
  std::map<LanguageTag, double> thresholds;
  bool drop_untagged = false;
  bool drop_mismatched = true;
  // Entries without a confidence are dropped unless this is set.
  bool keep_unscored = false;

  // Threshold 0 for every language.
  static FilterPolicy Permissive();
  // "lang=threshold" lines plus optional drop_untagged / drop_mismatched /
  // keep_unscored booleans. '#' starts a comment. Values override `base`.
  static FilterPolicy FromFile(const std::filesystem::path& path,
                               FilterPolicy base = Permissive());

  void Validate() const;
};

struct DroppedEntry {
  ManifestEntry entry;
  std::string reason;  // "confidence", "language-mismatch" or "untagged"
};

struct FilterResult {
  std::vector<ManifestEntry> kept;
  std::vector<DroppedEntry> dropped;
};

// Keeps entries with confidence >= thresholds[lang]. Throws ValidationError
// "no threshold for lang <code>" for a language the policy does not cover.
FilterResult FilterByConfidence(const std::vector<ManifestEntry>& entries,
                                const FilterPolicy& policy);

// Drops entries whose text carries a tag for another language; kept entries
// lose their tag.
FilterResult FilterLanguageMismatch(const std::vector<ManifestEntry>& entries,
                                    bool drop_untagged = false);

struct MixSpec {
  std::map<std::string, double> counts;  // key -> utterances or seconds
  double temperature = 20.0;

  void Validate() const;
};

// p_i proportional to (n_i / sum n)^(1/T).
std::map<std::string, double> TemperatureWeights(const MixSpec& spec);

// Per-language counts for a MixSpec: total seconds, or utterances.
std::map<std::string, double> LanguageCounts(const std::vector<ManifestEntry>& entries,
                                             bool by_duration = true);

struct LanguageStats {
  long kept = 0;
  long dropped_confidence = 0;
  long dropped_language = 0;
  double hours = 0.0;
};

struct StageReport {
  static constexpr int kSchemaVersion = 1;
  std::array<LanguageStats, kAllLanguages.size()> per_language{};

  LanguageStats& operator[](LanguageTag lang) { return per_language[static_cast<int>(lang)]; }
  const LanguageStats& operator[](LanguageTag lang) const {
    return per_language[static_cast<int>(lang)];
  }
  std::string ToJson() const;
};

struct StageResult {
  std::vector<ManifestEntry> kept;
  std::vector<DroppedEntry> dropped;
  StageReport report;
};

// Confidence filter, then language filter (the two commute on kept sets).
StageResult RunStage(const std::vector<ManifestEntry>& entries, const FilterPolicy& policy);

}  // namespace plkit

#endif  // PLKIT_PIPELINE_H_
