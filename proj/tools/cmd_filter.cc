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

#include <cstdio>
#include <fstream>

#include "cli_common.h"
#include "json.hpp"
#include "plkit/error.h"
#include "plkit/pipeline.h"

namespace plkit::cli {

namespace {

struct FilterArgs {
  std::string manifest;
  std::string policy;
  std::vector<std::string> thresholds;
  bool keep_unscored = false;
  bool drop_untagged = false;
  std::string dropped;
  std::string report;

  void Add(CLI::App* cmd, bool with_policy) {
    cmd->add_option("--manifest", manifest, "Input manifest")->required();
    if (with_policy) {
      cmd->add_option("--policy", policy, "Policy file of lang=threshold lines");
      cmd->add_option("--threshold", thresholds,
                      "lang=threshold overrides, comma separated or repeated (default 0)");
      cmd->add_flag("--keep-unscored", keep_unscored, "Keep entries without a confidence")
          ->capture_default_str();
    }
    cmd->add_flag("--drop-untagged", drop_untagged, "Drop texts without a language tag")
        ->capture_default_str();
    cmd->add_option("--dropped", dropped, "Write dropped entries (with a reason field) here");
  }

  FilterPolicy Policy() const {
    FilterPolicy p = policy.empty() ? FilterPolicy::Permissive()
                                    : FilterPolicy::FromFile(policy);
    for (const auto& [code, value] : ParseKeyValues(thresholds)) {
      auto lang = ParseLanguageCode(code);
      if (!lang) throw ValidationError("unknown language '" + code + "'");
      p.thresholds[*lang] = ParseDouble(value, "threshold");
    }
    if (keep_unscored) p.keep_unscored = true;
    if (drop_untagged) p.drop_untagged = true;
    p.Validate();
    return p;
  }
};

std::string ManifestText(const std::vector<ManifestEntry>& entries) {
  std::string out;
  for (const auto& e : entries) out += FormatManifestLine(e) + "\n";
  return out;
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw IoError("cannot write " + path);
}

void WriteDropped(const std::string& path, const std::vector<DroppedEntry>& dropped) {
  if (path.empty()) return;
  std::string out;
  for (const auto& d : dropped) {
    auto j = nlohmann::ordered_json::parse(FormatManifestLine(d.entry));
    j["reason"] = d.reason;
    out += j.dump() + "\n";
  }
  WriteFile(path, out);
}

}  // namespace

void RegisterFilter(CLI::App& app, Globals& g) {
  auto* filter = app.add_subcommand("filter", "Pseudo-label filtering");
  filter->require_subcommand(1);

  auto conf_args = std::make_shared<FilterArgs>();
  auto* conf = filter->add_subcommand("confidence", "Drop entries below the language threshold");
  conf_args->Add(conf, true);
  conf->callback([&g, conf_args] {
    FilterResult r = FilterByConfidence(ReadManifest(conf_args->manifest), conf_args->Policy());
    WriteDropped(conf_args->dropped, r.dropped);
    Emit(g, ManifestText(r.kept));
  });

  auto lang_args = std::make_shared<FilterArgs>();
  auto* lang = filter->add_subcommand("language", "Drop texts tagged with another language");
  lang_args->Add(lang, false);
  lang->callback([&g, lang_args] {
    FilterResult r =
        FilterLanguageMismatch(ReadManifest(lang_args->manifest), lang_args->drop_untagged);
    WriteDropped(lang_args->dropped, r.dropped);
    Emit(g, ManifestText(r.kept));
  });

  auto stage_args = std::make_shared<FilterArgs>();
  auto* stage = filter->add_subcommand("stage", "Confidence then language filter, with report");
  stage_args->Add(stage, true);
  stage->add_option("--report", stage_args->report, "JSON report path")->required();
  stage->callback([&g, stage_args] {
    StageResult r = RunStage(ReadManifest(stage_args->manifest), stage_args->Policy());
    WriteDropped(stage_args->dropped, r.dropped);
    WriteFile(stage_args->report, r.report.ToJson());
    Emit(g, ManifestText(r.kept));
  });

  auto* mix = app.add_subcommand("mix", "Data mixing");
  mix->require_subcommand(1);
  struct MixArgs {
    std::vector<std::string> counts;
    std::string manifest;
    bool by_utterance = false;
    double temperature = 20.0;
  };
  auto mix_args = std::make_shared<MixArgs>();
  auto* weights = mix->add_subcommand("weights", "Temperature sampling weights");
  weights->add_option("--counts", mix_args->counts, "key=count pairs, comma separated");
  weights->add_option("--manifest", mix_args->manifest, "Take per-language counts from a manifest");
  weights->add_flag("--by-utterance", mix_args->by_utterance,
                    "Count utterances instead of seconds (manifest input)")
      ->capture_default_str();
  weights->add_option("--temperature", mix_args->temperature, "Sampling temperature T")
      ->capture_default_str();
  weights->callback([&g, mix_args] {
    MixSpec spec;
    spec.temperature = mix_args->temperature;
    if (!mix_args->manifest.empty()) {
      spec.counts = LanguageCounts(ReadManifest(mix_args->manifest), !mix_args->by_utterance);
    }
    for (const auto& [key, value] : ParseKeyValues(mix_args->counts)) {
      spec.counts[key] = ParseDouble(value, "count");
    }
    std::string out;
    char buf[64];
    for (const auto& [key, p] : TemperatureWeights(spec)) {
      std::snprintf(buf, sizeof buf, "=%.15f\n", p);
      out += key + buf;
    }
    Emit(g, out);
  });
}

}  // namespace plkit::cli
