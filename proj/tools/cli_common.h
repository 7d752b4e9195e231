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

#ifndef PLKIT_TOOLS_CLI_COMMON_H_
#define PLKIT_TOOLS_CLI_COMMON_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "plkit/ctc_decoder.h"
#include "plkit/manifest.h"

namespace plkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kSchemaVersion = 1;

struct Globals {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string out;  // empty: stdout
};

// Writes to --out when given, else stdout.
void Emit(const Globals& g, const std::string& text);

std::vector<std::string> ReadLines(const std::filesystem::path& path);
std::string JoinLines(const std::vector<std::string>& lines);

// "a=1,b=2" or repeated "a=1" items.
std::map<std::string, std::string> ParseKeyValues(const std::vector<std::string>& items);
double ParseDouble(const std::string& s, const std::string& what);
std::vector<double> ParseDoubleList(const std::string& s, const std::string& what);

// Either --in (text lines) or --manifest (entry texts, tags preserved).
// With --lang, manifest entries of other languages pass through untouched.
struct TextSource {
  std::string in;
  std::string manifest;
  std::string lang;

  void Add(CLI::App* cmd);
  // Applies fn to every text and emits the result in the same format.
  void Transform(const Globals& g, const std::function<std::string(const std::string&)>& fn,
                 bool keep_tags = true) const;
};

// Decoder flags shared by `decode beam` and `eval speed-sweep`.
struct DecoderFlags {
  DecoderConfig config;
  std::string lm_path;
  std::string lexicon_path;
  bool select_language = false;

  void Add(CLI::App* cmd);
};

// Loaded decoder resources.
struct DecoderSetup {
  DecoderConfig config;
  std::optional<ArpaLm> lm;
  std::vector<LexiconEntry> lexicon_entries;
  bool select_language = false;

  static DecoderSetup Load(const DecoderFlags& flags);
  // Beam-decodes em; with select_language, prefers a hypothesis tagged `lang`.
  Hypothesis Decode(const EmissionMatrix& em, std::optional<LanguageTag> lang) const;
};

Hypothesis GreedyHypothesis(const EmissionMatrix& em);

// Confidence clamped so it survives 6-decimal serialization inside (0, 1].
double StorableConfidence(double c);

void RegisterLm(CLI::App& app, Globals& g);
void RegisterDecode(CLI::App& app, Globals& g);
void RegisterNorm(CLI::App& app, Globals& g);
void RegisterFilter(CLI::App& app, Globals& g);
void RegisterAudio(CLI::App& app, Globals& g);
void RegisterEval(CLI::App& app, Globals& g);
void RegisterManifest(CLI::App& app, Globals& g);

}  // namespace plkit::cli

#endif  // PLKIT_TOOLS_CLI_COMMON_H_
