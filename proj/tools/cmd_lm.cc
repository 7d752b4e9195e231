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
#include <sstream>

#include "cli_common.h"
#include "plkit/error.h"
#include "plkit/ngram_lm.h"

namespace plkit::cli {

namespace {

std::string Fmt(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

void RegisterLm(CLI::App& app, Globals& g) {
  auto* lm = app.add_subcommand("lm", "N-gram language models");
  lm->require_subcommand(1);

  struct TrainArgs {
    std::string corpus;
    int order = 5;
    std::vector<long> min_counts;
    bool closed = false;
  };
  auto train_args = std::make_shared<TrainArgs>();
  auto* train = lm->add_subcommand("train", "Train a modified Kneser-Ney model, write ARPA");
  train->add_option("--corpus", train_args->corpus, "Training text, one sentence per line")
      ->required();
  train->add_option("--order", train_args->order, "N-gram order")->capture_default_str();
  train->add_option("--min-counts", train_args->min_counts,
                    "Per-order minimum counts, comma separated (unigrams never pruned)")
      ->delimiter(',')
      ->capture_default_str();
  train->add_flag("--closed-vocab", train_args->closed, "Give <unk> no probability mass")
      ->capture_default_str();
  train->callback([&g, train_args] {
    TrainOptions options;
    options.order = train_args->order;
    options.min_counts = train_args->min_counts;
    options.closed_vocabulary = train_args->closed;
    ArpaLm model = TrainLm(TokenizedCorpus::FromFile(train_args->corpus), options);
    std::ostringstream out;
    WriteArpa(model, out);
    Emit(g, out.str());
  });

  struct PplArgs {
    std::string lm;
    std::string corpus;
    std::vector<std::string> table;
  };
  auto ppl_args = std::make_shared<PplArgs>();
  auto* ppl = lm->add_subcommand("perplexity", "Perplexity of a corpus under a model");
  ppl->add_option("--lm", ppl_args->lm, "ARPA model");
  ppl->add_option("--corpus", ppl_args->corpus, "Test text, one sentence per line");
  ppl->add_option("--table", ppl_args->table,
                  "Report column NAME=MODEL:CORPUS (repeatable); prints a markdown table");
  ppl->callback([&g, ppl_args] {
    if (!ppl_args->table.empty()) {
      std::vector<std::pair<std::string, double>> columns;
      for (const auto& item : ppl_args->table) {
        const auto eq = item.find('=');
        const auto colon = item.find(':', eq == std::string::npos ? 0 : eq);
        if (eq == std::string::npos || colon == std::string::npos) {
          throw ValidationError("expected NAME=MODEL:CORPUS, got '" + item + "'");
        }
        ArpaLm model = ReadArpa(std::filesystem::path(item.substr(eq + 1, colon - eq - 1)));
        columns.emplace_back(item.substr(0, eq),
                             Perplexity(model, TokenizedCorpus::FromFile(item.substr(colon + 1))));
      }
      Emit(g, FormatPerplexityTable(columns));
      return;
    }
    if (ppl_args->lm.empty() || ppl_args->corpus.empty()) {
      throw ValidationError("need --lm and --corpus, or --table");
    }
    ArpaLm model = ReadArpa(std::filesystem::path(ppl_args->lm));
    Emit(g, Fmt("perplexity=%.6f\n",
                Perplexity(model, TokenizedCorpus::FromFile(ppl_args->corpus))));
  });

  struct ScoreArgs {
    std::string lm;
    std::string in;
  };
  auto score_args = std::make_shared<ScoreArgs>();
  auto* score = lm->add_subcommand("score", "log10 probability of each sentence");
  score->add_option("--lm", score_args->lm, "ARPA model")->required();
  score->add_option("--in", score_args->in, "Text, one sentence per line")->required();
  score->callback([&g, score_args] {
    ArpaLm model = ReadArpa(std::filesystem::path(score_args->lm));
    std::string out;
    for (const auto& line : ReadLines(score_args->in)) {
      out += Fmt("%.6f", SentenceLogProb(model, SplitWords(line)));
      out += '\t' + line + '\n';
    }
    Emit(g, out);
  });
}

}  // namespace plkit::cli
