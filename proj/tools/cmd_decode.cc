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

#include "cli_common.h"
#include "plkit/error.h"
#include "plkit/parallel.h"

namespace plkit::cli {

namespace {

struct DecodeArgs {
  std::string emissions;
  std::string manifest;
  std::string emissions_dir;
  DecoderFlags decoder;
};

std::filesystem::path EmissionsFor(const std::string& dir, const ManifestEntry& e) {
  return std::filesystem::path(dir) /
         (std::filesystem::path(e.audio_path).stem().string() + ".ctce");
}

void AddInputs(CLI::App* cmd, DecodeArgs& args) {
  cmd->add_option("--emissions", args.emissions, "One emission matrix file");
  cmd->add_option("--manifest", args.manifest,
                  "Manifest to pseudo-label; writes a manifest with decoded text and confidence");
  cmd->add_option("--emissions-dir", args.emissions_dir,
                  "Directory holding <audio stem>.ctce for each manifest entry");
}

void Run(const Globals& g, const DecodeArgs& args,
         const std::function<Hypothesis(const EmissionMatrix&, LanguageTag*)>& decode) {
  if (!args.emissions.empty()) {
    if (!args.manifest.empty()) throw ValidationError("give --emissions or --manifest, not both");
    Hypothesis h = decode(ReadEmissions(std::filesystem::path(args.emissions)), nullptr);
    Emit(g, h.text + "\n");
    return;
  }
  if (args.manifest.empty() || args.emissions_dir.empty()) {
    throw ValidationError("need --emissions, or --manifest with --emissions-dir");
  }
  std::vector<ManifestEntry> entries = ReadManifest(args.manifest);
  ParallelFor(entries.size(), g.jobs, [&](std::size_t i) {
    ManifestEntry& e = entries[i];
    Hypothesis h = decode(ReadEmissions(EmissionsFor(args.emissions_dir, e)), &e.lang);
    e.text = h.text;
    e.confidence = StorableConfidence(h.confidence);
  });
  std::string out;
  for (const auto& e : entries) out += FormatManifestLine(e) + "\n";
  Emit(g, out);
}

}  // namespace

void RegisterDecode(CLI::App& app, Globals& g) {
  auto* decode = app.add_subcommand("decode", "CTC decoding of precomputed emissions");
  decode->require_subcommand(1);

  auto greedy_args = std::make_shared<DecodeArgs>();
  auto* greedy = decode->add_subcommand("greedy", "Best path: per-frame argmax, collapsed");
  AddInputs(greedy, *greedy_args);
  greedy->callback([&g, greedy_args] {
    Run(g, *greedy_args, [](const EmissionMatrix& em, LanguageTag*) {
      return GreedyHypothesis(em);
    });
  });

  auto beam_args = std::make_shared<DecodeArgs>();
  auto* beam = decode->add_subcommand("beam", "Prefix beam search with optional lexicon and LM");
  AddInputs(beam, *beam_args);
  beam_args->decoder.Add(beam);
  beam->callback([&g, beam_args] {
    const DecoderSetup setup = DecoderSetup::Load(beam_args->decoder);
    Run(g, *beam_args, [&setup](const EmissionMatrix& em, LanguageTag* lang) {
      return setup.Decode(em, lang ? std::optional<LanguageTag>(*lang) : std::nullopt);
    });
  });
}

}  // namespace plkit::cli
