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

#include "plkit/pipeline.h"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "plkit/error.h"

namespace plkit {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool ParseBool(const std::string& value, long line) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ParseError("expected true or false, got '" + value + "'", line);
}

}  // namespace

FilterPolicy FilterPolicy::Permissive() {
  FilterPolicy policy;
  for (LanguageTag lang : kAllLanguages) policy.thresholds[lang] = 0.0;
  return policy;
}

FilterPolicy FilterPolicy::FromFile(const std::filesystem::path& path, FilterPolicy base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy file " + path.string());
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", line_no);
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key == "drop_untagged") {
      base.drop_untagged = ParseBool(value, line_no);
    } else if (key == "drop_mismatched") {
      base.drop_mismatched = ParseBool(value, line_no);
    } else if (key == "keep_unscored") {
      base.keep_unscored = ParseBool(value, line_no);
    } else if (auto lang = ParseLanguageCode(key)) {
      std::size_t used = 0;
      double threshold = 0.0;
      try {
        threshold = std::stod(value, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) {
        throw ParseError("bad threshold '" + value + "'", line_no);
      }
      base.thresholds[*lang] = threshold;
    } else {
      throw ParseError("unknown key '" + key + "'", line_no);
    }
  }
  base.Validate();
  return base;
}

void FilterPolicy::Validate() const {
  for (const auto& [lang, threshold] : thresholds) {
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
      throw ValidationError("threshold for " + std::string(LanguageCode(lang)) +
                            " outside [0,1]");
    }
  }
}

FilterResult FilterByConfidence(const std::vector<ManifestEntry>& entries,
                                const FilterPolicy& policy) {
  policy.Validate();
  FilterResult result;
  for (const auto& entry : entries) {
    auto it = policy.thresholds.find(entry.lang);
    if (it == policy.thresholds.end()) {
      throw ValidationError("no threshold for lang " + std::string(LanguageCode(entry.lang)));
    }
    const bool pass = entry.confidence ? *entry.confidence >= it->second : policy.keep_unscored;
    if (pass) {
      result.kept.push_back(entry);
    } else {
      result.dropped.push_back({entry, "confidence"});
    }
  }
  return result;
}

FilterResult FilterLanguageMismatch(const std::vector<ManifestEntry>& entries,
                                    bool drop_untagged) {
  FilterResult result;
  for (const auto& entry : entries) {
    TaggedText tagged = StripLanguageTag(entry.text);
    if (!tagged.lang) {
      if (drop_untagged) {
        result.dropped.push_back({entry, "untagged"});
      } else {
        result.kept.push_back(entry);
      }
    } else if (*tagged.lang != entry.lang) {
      result.dropped.push_back({entry, "language-mismatch"});
    } else {
      ManifestEntry kept = entry;
      kept.text = std::move(tagged.text);
      result.kept.push_back(std::move(kept));
    }
  }
  return result;
}

void MixSpec::Validate() const {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw ValidationError("temperature must be positive");
  }
  bool any_positive = false;
  for (const auto& [key, count] : counts) {
    if (!(count >= 0.0) || !std::isfinite(count)) {
      throw ValidationError("count for '" + key + "' must be nonnegative");
    }
    any_positive |= count > 0.0;
  }
  if (!any_positive) throw ValidationError("all counts are zero");
}

std::map<std::string, double> TemperatureWeights(const MixSpec& spec) {
  spec.Validate();
  long double total = 0.0L;
  for (const auto& [key, count] : spec.counts) total += count;
  std::map<std::string, double> weights;
  long double norm = 0.0L;
  std::map<std::string, long double> raw;
  for (const auto& [key, count] : spec.counts) {
    const long double w =
        count > 0.0 ? std::exp(std::log(count / total) / spec.temperature) : 0.0L;
    raw[key] = w;
    norm += w;
  }
  for (const auto& [key, w] : raw) weights[key] = static_cast<double>(w / norm);
  return weights;
}

std::map<std::string, double> LanguageCounts(const std::vector<ManifestEntry>& entries,
                                             bool by_duration) {
  std::map<std::string, double> counts;
  for (const auto& entry : entries) {
    counts[std::string(LanguageCode(entry.lang))] += by_duration ? entry.duration_s : 1.0;
  }
  return counts;
}

std::string StageReport::ToJson() const {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  nlohmann::ordered_json langs = nlohmann::ordered_json::object();
  for (LanguageTag lang : kAllLanguages) {
    const LanguageStats& s = (*this)[lang];
    langs[std::string(LanguageCode(lang))] = {
        {"kept", s.kept},
        {"dropped_confidence", s.dropped_confidence},
        {"dropped_language", s.dropped_language},
        {"hours", std::round(s.hours * 1e6) / 1e6},
    };
  }
  doc["languages"] = std::move(langs);
  return doc.dump(2) + "\n";
}

StageResult RunStage(const std::vector<ManifestEntry>& entries, const FilterPolicy& policy) {
  StageResult result;
  FilterResult by_conf = FilterByConfidence(entries, policy);
  for (auto& d : by_conf.dropped) {
    ++result.report[d.entry.lang].dropped_confidence;
    result.dropped.push_back(std::move(d));
  }
  if (policy.drop_mismatched || policy.drop_untagged) {
    FilterResult by_lang = FilterLanguageMismatch(by_conf.kept, policy.drop_untagged);
    if (!policy.drop_mismatched) {
      // Only untagged entries were meant to go; re-run keeping mismatches.
      by_lang = FilterResult{};
      for (auto& e : by_conf.kept) {
        TaggedText tagged = StripLanguageTag(e.text);
        if (!tagged.lang) {
          by_lang.dropped.push_back({std::move(e), "untagged"});
        } else {
          if (*tagged.lang == e.lang) e.text = std::move(tagged.text);
          by_lang.kept.push_back(std::move(e));
        }
      }
    }
    for (auto& d : by_lang.dropped) {
      ++result.report[d.entry.lang].dropped_language;
      result.dropped.push_back(std::move(d));
    }
    result.kept = std::move(by_lang.kept);
  } else {
    result.kept = std::move(by_conf.kept);
  }
  for (const auto& e : result.kept) {
    ++result.report[e.lang].kept;
    result.report[e.lang].hours += e.duration_s / 3600.0;
  }
  return result;
}

}  // namespace plkit
