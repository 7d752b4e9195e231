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
#include "plkit/text_norm.h"

#ifndef PLKIT_DATA_DIR
#define PLKIT_DATA_DIR "data"
#endif

namespace plkit::cli {

void RegisterNorm(CLI::App& app, Globals& g) {
  auto* norm = app.add_subcommand("norm", "Text normalization");
  norm->require_subcommand(1);

  struct PreArgs {
    TextSource src;
    bool spell_digits = true;
  };
  auto pre = std::make_shared<PreArgs>();
  auto* preprocess = norm->add_subcommand(
      "preprocess", "Lowercase, drop punctuation except ' and -, spell digits");
  pre->src.Add(preprocess);
  preprocess->add_option("--spell-digits", pre->spell_digits, "Spell digit runs as words")
      ->capture_default_str();
  preprocess->callback([&g, pre] {
    pre->src.Transform(g, [&](const std::string& t) { return Preprocess(t, pre->spell_digits); });
  });

  struct VarArgs {
    TextSource src;
    std::string table = PLKIT_DATA_DIR "/pidgin_variants.tsv";
  };
  auto var = std::make_shared<VarArgs>();
  auto* variants = norm->add_subcommand("variants", "Replace Pidgin spelling variants");
  var->src.Add(variants);
  variants->add_option("--table", var->table, "source<TAB>replacement file")
      ->capture_default_str();
  variants->callback([&g, var] {
    const VariantTable table = VariantTable::FromFile(var->table);
    var->src.Transform(g, [&](const std::string& t) { return table.Apply(t); });
  });

  struct HomArgs {
    TextSource src;
    std::string sets = PLKIT_DATA_DIR "/pidgin_homophones.txt";
    std::string lm;
    HomophoneOptions options;
  };
  auto hom = std::make_shared<HomArgs>();
  auto* homophones = norm->add_subcommand("homophones", "Choose homophones by LM context");
  hom->src.Add(homophones);
  homophones->add_option("--sets", hom->sets, "Homophone sets, one per line, ' | ' separated")
      ->capture_default_str();
  homophones->add_option("--lm", hom->lm, "ARPA model")->required();
  homophones->add_option("--window", hom->options.window, "Context words on each side")
      ->capture_default_str();
  homophones->add_flag("--full-sentence", hom->options.full_sentence,
                       "Score whole sentences instead of a window")
      ->capture_default_str();
  homophones->callback([&g, hom] {
    const HomophoneSets sets = HomophoneSets::FromFile(hom->sets);
    const ArpaLm lm = ReadArpa(std::filesystem::path(hom->lm));
    hom->src.Transform(
        g, [&](const std::string& t) { return DisambiguateHomophones(t, sets, lm, hom->options); });
  });

  struct MineArgs {
    std::string ref;
    std::string hyp;
    long min_count = 2;
  };
  auto mine_args = std::make_shared<MineArgs>();
  auto* mine = norm->add_subcommand("mine", "Count aligned ref/hyp word substitutions");
  mine->add_option("--ref", mine_args->ref, "Reference lines")->required();
  mine->add_option("--hyp", mine_args->hyp, "Hypothesis lines")->required();
  mine->add_option("--min-count", mine_args->min_count, "Minimum pair count")
      ->capture_default_str();
  mine->callback([&g, mine_args] {
    std::string out = "ref\thyp\tcount\n";
    for (const auto& p :
         MineVariants(ReadLines(mine_args->ref), ReadLines(mine_args->hyp), mine_args->min_count)) {
      out += p.ref_word + "\t" + p.hyp_word + "\t" + std::to_string(p.count) + "\n";
    }
    Emit(g, out);
  });

  struct DedupArgs {
    std::string corpus;
    std::string heldout;
  };
  auto dedup_args = std::make_shared<DedupArgs>();
  auto* dedup = norm->add_subcommand("dedup", "Drop duplicate and held-out sentences");
  dedup->add_option("--corpus", dedup_args->corpus, "LM training text")->required();
  dedup->add_option("--heldout", dedup_args->heldout, "Validation/test text to exclude");
  dedup->callback([&g, dedup_args] {
    std::vector<std::string> heldout;
    if (!dedup_args->heldout.empty()) heldout = ReadLines(dedup_args->heldout);
    Emit(g, JoinLines(DedupAndFilter(ReadLines(dedup_args->corpus), heldout)));
  });

  auto strip_src = std::make_shared<TextSource>();
  auto* strip = norm->add_subcommand("strip-diacritics", "Remove combining marks");
  strip_src->Add(strip);
  strip->callback([&g, strip_src] {
    strip_src->Transform(g, [](const std::string& t) { return StripDiacritics(t); });
  });
}

}  // namespace plkit::cli
