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

#include <unistd.h>

#include <cstdio>
#include <memory>

#include "cli_common.h"
#include "json.hpp"
#include "plkit/error.h"
#include "plkit/eval.h"

namespace plkit::cli {

namespace {

struct PairArgs {
  std::string ref;
  std::string hyp;
  std::string ref_manifest;
  std::string hyp_manifest;
  bool raw = false;

  void Add(CLI::App* cmd) {
    cmd->add_option("--ref", ref, "Reference lines");
    cmd->add_option("--hyp", hyp, "Hypothesis lines, aligned with --ref");
    cmd->add_option("--ref-manifest", ref_manifest, "References from a manifest");
    cmd->add_option("--hyp-manifest", hyp_manifest,
                    "Hypotheses from a manifest (language tags are removed)");
    cmd->add_flag("--raw", raw, "Score whitespace tokens without preprocessing")
        ->capture_default_str();
  }

  std::vector<std::string> Side(const std::string& lines, const std::string& manifest,
                                const char* name) const {
    if (lines.empty() == manifest.empty()) {
      throw ValidationError(std::string("give exactly one of --") + name + ", --" + name +
                            "-manifest");
    }
    if (!lines.empty()) return ReadLines(lines);
    std::vector<std::string> out;
    for (const auto& e : ReadManifest(manifest)) out.push_back(StripLanguageTag(e.text).text);
    return out;
  }

  std::vector<TextPair> Pairs() const {
    auto refs = Side(ref, ref_manifest, "ref");
    auto hyps = Side(hyp, hyp_manifest, "hyp");
    if (refs.size() != hyps.size()) {
      throw ValidationError("ref has " + std::to_string(refs.size()) + " lines, hyp has " +
                            std::to_string(hyps.size()));
    }
    std::vector<TextPair> pairs;
    for (std::size_t i = 0; i < refs.size(); ++i) pairs.emplace_back(refs[i], hyps[i]);
    return pairs;
  }
};

nlohmann::ordered_json BreakdownJson(const WerBreakdown& b) {
  return nlohmann::ordered_json::parse(b.ToJson());
}

std::string RunCommand(const std::string& command) {
  std::unique_ptr<FILE, int (*)(FILE*)> pipe(popen(command.c_str(), "r"), pclose);
  if (!pipe) throw IoError("cannot run '" + command + "'");
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe.get())) out.append(buf, n);
  const int status = pclose(pipe.release());
  if (status != 0) throw ValidationError("decode command failed: " + command);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
  return out;
}

std::string ReplaceAll(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

std::string FactorLabel(double f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", f);
  std::string s = buf;
  if (s.back() == '0') s.pop_back();
  return s;
}

}  // namespace

void RegisterEval(CLI::App& app, Globals& g) {
  auto* eval = app.add_subcommand("eval", "Metrics");
  eval->require_subcommand(1);

  auto wer_args = std::make_shared<PairArgs>();
  auto* wer = eval->add_subcommand("wer", "Pooled word error rate");
  wer_args->Add(wer);
  wer->callback([&g, wer_args] {
    const auto pairs = wer_args->Pairs();
    const WerBreakdown pooled = CorpusWer(pairs, !wer_args->raw);
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["pooled"] = BreakdownJson(pooled);
    j["mean_utterance_wer"] = std::round(MeanUtteranceWer(pairs, !wer_args->raw) * 1e6) / 1e6;
    Emit(g, "wer=" + FormatFixed(pooled.wer(), 4) + "\n" + j.dump() + "\n");
  });

  auto dia_args = std::make_shared<PairArgs>();
  auto* dia = eval->add_subcommand("diacritics", "WER with diacritics retained and stripped");
  dia_args->Add(dia);
  dia->callback([&g, dia_args] {
    const DiacriticWer d = WerDiacriticModes(dia_args->Pairs(), !dia_args->raw);
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    j["retained"] = BreakdownJson(d.retained);
    j["stripped"] = BreakdownJson(d.stripped);
    Emit(g, j.dump() + "\n");
  });

  auto lid_manifest = std::make_shared<std::string>();
  auto* lid = eval->add_subcommand(
      "lid", "Per-language F1 of predicted tags (text) against the entry language");
  lid->add_option("--manifest", *lid_manifest, "Decoded manifest")->required();
  lid->callback([&g, lid_manifest] {
    std::vector<LidExample> examples;
    for (const auto& e : ReadManifest(*lid_manifest)) {
      examples.push_back({StripLanguageTag(e.text).lang, e.lang});
    }
    Emit(g, LidF1(examples).ToCsv());
  });

  struct SweepArgs {
    std::string manifest;
    std::string factors = "0.8,1.0,1.2,1.4,1.6,1.8,2.0";
    std::string emissions_pattern;
    std::string decode_cmd;
    bool greedy = false;
    bool raw = false;
    DecoderFlags decoder;
  };
  auto sw = std::make_shared<SweepArgs>();
  auto* sweep = eval->add_subcommand("speed-sweep", "WER across WSOLA speaking rates");
  sweep->add_option("--manifest", sw->manifest, "Test manifest (text = reference)")->required();
  sweep->add_option("--factors", sw->factors, "Comma separated speed factors")
      ->capture_default_str();
  sweep->add_option("--emissions-pattern", sw->emissions_pattern,
                    "Precomputed emissions per rate, e.g. em/{factor}/{stem}.ctce");
  sweep->add_option("--decode-cmd", sw->decode_cmd,
                    "External decoder run on each stretched WAV; {wav} is replaced by its path, "
                    "stdout is the hypothesis");
  sweep->add_flag("--greedy", sw->greedy, "Greedy decoding of emissions")->capture_default_str();
  sweep->add_flag("--raw", sw->raw, "Score whitespace tokens without preprocessing")
      ->capture_default_str();
  sw->decoder.Add(sweep);
  sweep->callback([&g, sw] {
    if (sw->emissions_pattern.empty() == sw->decode_cmd.empty()) {
      throw ValidationError("give exactly one of --emissions-pattern, --decode-cmd");
    }
    const auto factors = ParseDoubleList(sw->factors, "factor");
    const auto entries = ReadManifest(sw->manifest);
    SweepOptions options;
    options.audio_root = std::filesystem::path(sw->manifest).parent_path();
    options.normalize = !sw->raw;
    options.jobs = g.jobs;
    DecodeFn decode;
    std::optional<DecoderSetup> setup;
    if (!sw->emissions_pattern.empty()) {
      options.load_audio = false;
      if (!sw->greedy) setup = DecoderSetup::Load(sw->decoder);
      decode = [&](const Waveform&, const ManifestEntry& e, double factor) {
        std::string path = ReplaceAll(sw->emissions_pattern, "{factor}", FactorLabel(factor));
        path = ReplaceAll(path, "{stem}", std::filesystem::path(e.audio_path).stem().string());
        const EmissionMatrix em = ReadEmissions(std::filesystem::path(path));
        const Hypothesis h = setup ? setup->Decode(em, e.lang) : GreedyHypothesis(em);
        return StripLanguageTag(h.text).text;
      };
    } else {
      const auto tmp = std::filesystem::temp_directory_path() /
                       ("plkit_sweep_" + std::to_string(getpid()));
      std::filesystem::create_directories(tmp);
      decode = [&, tmp](const Waveform& w, const ManifestEntry& e, double factor) {
        const auto wav = tmp / (std::filesystem::path(e.audio_path).stem().string() + "_x" +
                                FactorLabel(factor) + ".wav");
        WriteWav(w, wav);
        std::string hyp = RunCommand(ReplaceAll(sw->decode_cmd, "{wav}", wav.string()));
        std::filesystem::remove(wav);
        return hyp;
      };
    }
    Emit(g, SweepCsv(SpeedSweep(entries, factors, decode, options)));
  });
}

void RegisterManifest(CLI::App& app, Globals& g) {
  auto* manifest = app.add_subcommand("manifest", "Manifest utilities");
  manifest->require_subcommand(1);
  auto path = std::make_shared<std::string>();
  auto* validate = manifest->add_subcommand("validate", "Check every line of a manifest");
  validate->add_option("--manifest", *path, "JSONL manifest")->required();
  validate->callback([&g, path] {
    long count = 0;
    ForEachManifestEntry(*path, [&](ManifestEntry&&, long) {
      ++count;
      return true;
    });
    Emit(g, "entries=" + std::to_string(count) + "\n");
  });
}

}  // namespace plkit::cli
