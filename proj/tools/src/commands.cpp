/* Copyright 2026 The idiom-forge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "idiomforge_cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "idiomforge/align.hpp"
#include "idiomforge/eval.hpp"
#include "idiomforge/extract.hpp"
#include "idiomforge/registry.hpp"
#include "idiomforge/synth.hpp"
#include "json.hpp"

namespace idiomforge::cli {
namespace {

std::string fmt_score(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

std::string indent(const std::string& text, const std::string& prefix) {
  std::string out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out += prefix + line + "\n";
  return out;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << "idiom-forge: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int cmd_extract(const ExtractArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Registry reg = Registry::load(args.registry);
    const auto corpus = read_corpus(args.corpus);
    err << "extract: " << corpus.size() << " file(s) under " << args.corpus.string() << "\n";
    auto result = build_index(corpus, reg, args.threads);
    for (const auto& f : result.stats.failures) err << "extract: skipped " << f << "\n";
    save_index(args.out, result.index, result.names);
    out << "files " << result.stats.files << ", parsed " << result.stats.parsed << ", skipped "
        << result.stats.failures.size() << ", methods " << result.stats.methods
        << ", sequences " << result.stats.sequences << ", groups " << result.index.size()
        << "\n";
    out << "wrote " << (args.out / kIndexFileName).string() << " and "
        << (args.out / kNamesFileName).string() << "\n";
    return 0;
  });
}

int cmd_train(const TrainArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Registry reg = Registry::load(args.registry);
    const ClickLog log = read_click_log(args.clicks, args.docs, reg);
    if (log.missing_docs > 0) {
      err << "train: " << log.missing_docs << " click(s) point at missing documents\n";
    }
    if (log.dropped_pairs > 0) {
      err << "train: " << log.dropped_pairs << " click(s) had no query words or no APIs\n";
    }
    EmTrace trace;
    QueryModel model;
    model.table = train_em(log.pairs, {args.iters, args.tolerance, args.add_k}, &trace);
    model.stats = UnigramStats::from_queries(log.queries);
    save_model(args.out, model, reg);
    out << "pairs " << log.pairs.size() << ", query words " << model.table.rows().size()
        << ", EM iterations " << trace.iterations_run << ", log-likelihood "
        << fmt_score(trace.log_likelihood.front()) << " -> "
        << fmt_score(trace.log_likelihood.back()) << "\n";
    out << "wrote " << args.out.string() << "\n";
    return 0;
  });
}

int cmd_query(const QueryArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Registry reg = Registry::load(args.registry);
    const QueryModel model = load_model(args.model, reg);
    const ScsIndex index = load_index(args.index);
    const NameModel names = load_names(args.index);
    index.validate(reg);

    SynthOptions opts;
    opts.m = args.top;
    opts.depth = args.depth;
    opts.top_k = args.top_k;
    opts.idiomatic_bool = args.idiomatic_bool;
    const auto result = synthesize(args.text, model, index, names, reg, opts);
    for (const auto& d : result.diagnostics) err << "query: " << d << "\n";

    nlohmann::json records = nlohmann::json::array();
    for (std::size_t i = 0; i < result.snippets.size(); ++i) {
      const auto& s = result.snippets[i];
      out << (i + 1) << ". score " << fmt_score(s.score) << "  frequency " << s.frequency << "  "
          << s.canonical << "\n"
          << indent(s.text, "    ") << "\n";
      records.push_back({{"rank", i + 1},
                         {"score", s.score},
                         {"frequency", s.frequency},
                         {"canonical", s.canonical},
                         {"root_type", s.root_type},
                         {"snippet", s.text}});
    }
    if (!args.json.empty()) {
      std::ofstream f(args.json, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot write " + args.json.string());
      f << nlohmann::json{{"query", args.text}, {"results", records}}.dump(2) << "\n";
    }
    return 0;
  });
}

int cmd_eval(const EvalArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Registry reg = Registry::load(args.registry);
    const auto cases = load_eval_cases(args.cases, reg);
    const QueryModel model = load_model(args.model, reg);
    const ScsIndex index = load_index(args.index);
    const NameModel names = load_names(args.index);
    index.validate(reg);
    SynthOptions opts;
    opts.depth = args.depth;
    out << format_report(evaluate(cases, model, index, names, reg, opts));
    return 0;
  });
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesizes code snippets for natural-language programming queries.",
               "idiom-forge"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Mine call sequences from a corpus into an index");
  extract->add_option("--corpus", ex.corpus, "Directory of .mini files")->required();
  extract->add_option("--registry", ex.registry, "Registry JSON")->required();
  extract->add_option("--out", ex.out, "Output directory")->required();
  extract->add_option("--threads", ex.threads, "Worker threads (0 = all cores)");

  TrainArgs tr;
  auto* train = app.add_subcommand("train", "Train the query model from a click log");
  train->add_option("--clicks", tr.clicks, "query<TAB>doc_id lines")->required();
  train->add_option("--docs", tr.docs, "Directory of doc_id.md files")->required();
  train->add_option("--registry", tr.registry, "Registry JSON")->required();
  train->add_option("--out", tr.out, "Model file to write")->required();
  train->add_option("--iters", tr.iters, "EM iterations")->check(CLI::NonNegativeNumber);
  train->add_option("--tolerance", tr.tolerance, "Stop when no probability moves more");
  train->add_option("--add-k", tr.add_k, "Additive smoothing")->check(CLI::NonNegativeNumber);

  QueryArgs qu;
  auto* query = app.add_subcommand("query", "Synthesize snippets for a query");
  query->add_option("--model", qu.model, "Model file from train")->required();
  query->add_option("--index", qu.index, "Index directory from extract")->required();
  query->add_option("--registry", qu.registry, "Registry JSON")->required();
  query->add_option("--text", qu.text, "The query")->required();
  query->add_option("--top", qu.top, "Snippets to produce");
  query->add_option("--depth", qu.depth, "Receiver construction depth")->check(CLI::NonNegativeNumber);
  query->add_option("--top-k", qu.top_k, "APIs kept in the query vector");
  query->add_flag("--idiomatic-bool", qu.idiomatic_bool, "Use bool members directly as conditions");
  query->add_option("--json", qu.json, "Also write results as JSON");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Grade queries against an answer key");
  eval->add_option("--cases", ev.cases, "JSON case file")->required();
  eval->add_option("--model", ev.model, "Model file from train")->required();
  eval->add_option("--index", ev.index, "Index directory from extract")->required();
  eval->add_option("--registry", ev.registry, "Registry JSON")->required();
  eval->add_option("--depth", ev.depth, "Receiver construction depth")->check(CLI::NonNegativeNumber);

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*extract) return cmd_extract(ex, out, err);
  if (*train) return cmd_train(tr, out, err);
  if (*query) return cmd_query(qu, out, err);
  return cmd_eval(ev, out, err);
}

}  // namespace idiomforge::cli
