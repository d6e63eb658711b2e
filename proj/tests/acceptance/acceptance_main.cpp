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

// Acceptance suite.  One PASS/FAIL line per criterion; exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "idiomforge/align.hpp"
#include "idiomforge/eval.hpp"
#include "idiomforge/extract.hpp"
#include "idiomforge/rank.hpp"
#include "idiomforge/scs.hpp"
#include "idiomforge/synth.hpp"
#include "idiomforge_cli/commands.hpp"
#include "test_support.hpp"

namespace idiomforge {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Collects failed checks for one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void near(double got, double want, double tol, const std::string& what) {
    std::ostringstream s;
    s.precision(17);
    s << what << ": got " << got << ", want " << want << " +/- " << tol;
    expect(std::fabs(got - want) <= tol, s.str());
  }
  void note(std::string n) { notes_.push_back(std::move(n)); }

  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::string s = std::to_string(checks_ - failed_) + "/" + std::to_string(checks_) + " checks";
    for (const auto& n : notes_) s += "; " + n;
    for (const auto& f : failures_) s += "\n      " + f;
    return s;
  }

 private:
  std::size_t checks_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string ms(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f ms", 1000.0 * s);
  return buf;
}

const char* kRegexMatchBody = R"(
  var regex = new Regex(pattern, RegexOptions.IgnoreCase);
  var match = regex.Match(input);
  if (match.Success)
  {
    var groups = match.Groups;
  }
)";

const char* kReadToEndBody = R"(
  var reader = new StreamReader(path);
  var text = reader.ReadToEnd();
  reader.Close();
)";

constexpr const char* kRegexMatchPattern = "Regex.Match(string);if(get(Match.Success)){get(Match.Groups)}else{}";
constexpr const char* kReadToEndPattern = "new StreamReader(string);StreamReader.ReadToEnd();StreamReader.Close()";

void golden_extraction(Check& c) {
  const auto& reg = testing::fixture_registry();
  const auto t0 = Clock::now();
  auto regex_seqs = testing::extract_body("string pattern, string input", kRegexMatchBody, reg);
  auto reader_seqs = testing::extract_body("string path", kReadToEndBody, reg);
  const double dt = seconds_since(t0);
  const auto* match = testing::find_var(regex_seqs, "match");
  const auto* reader = testing::find_var(reader_seqs, "reader");
  c.expect(match && canonical_form(match->scs) == kRegexMatchPattern,
           "match: " + (match ? canonical_form(match->scs) : std::string("<missing>")));
  c.expect(reader && canonical_form(reader->scs) == kReadToEndPattern,
           "reader: " + (reader ? canonical_form(reader->scs) : std::string("<missing>")));
  c.expect(dt < 1.0, "took " + ms(dt));
  c.note(ms(dt));
}

void end_to_end_fixture(Check& c) {
  const auto t0 = Clock::now();
  std::vector<std::string> texts;
  for (int run = 0; run < 2; ++run) {
    const auto& reg = testing::fixture_registry();
    auto built = build_index(read_corpus(testing::fixture_dir() / "corpus"), reg);
    auto log = read_click_log(testing::fixture_dir() / "clicks.tsv", testing::fixture_dir() / "docs",
                              reg);
    QueryModel model{train_em(log.pairs, {}), UnigramStats::from_queries(log.queries)};
    auto r = synthesize("match regular expression", model, built.index, built.names, reg);
    if (run == 0) {
      c.expect(built.stats.files == 20, "corpus files: " + std::to_string(built.stats.files));
      c.expect(log.lines == 30, "click lines: " + std::to_string(log.lines));
      c.expect(!r.snippets.empty(), "no snippets");
      if (r.snippets.empty()) return;
      // FRank against the Regex.Match pattern as the answer key.
      const auto key = std::set<ApiRef>{testing::api(reg, "Regex.Match(string)")};
      std::vector<bool> rel;
      for (const auto& s : r.snippets) rel.push_back(is_relevant(s.root_scs, key));
      const auto m = grade("match regular expression", rel);
      c.expect(m.frank && *m.frank == 1, "FRank is not 1");
      c.expect(r.snippets[0].canonical == kRegexMatchPattern, "top root: " + r.snippets[0].canonical);
      c.note("top score " + std::to_string(r.snippets[0].score));
    }
    std::string all;
    for (const auto& s : r.snippets) all += s.canonical + "\n" + s.text;
    texts.push_back(all);
  }
  const double dt = seconds_since(t0);
  c.expect(texts[0] == texts[1], "two runs differ");
  c.expect(dt / 2.0 < 1.0, "one run took " + ms(dt / 2.0));
  c.note(ms(dt / 2.0) + " per run");
}

void em_oracle(Check& c) {
  const ApiId x{0};
  const ApiId y{1};
  const std::vector<ClickPair> pairs{{{"a", "b"}, {x}}, {{"a"}, {y}}};
  EmTrace trace;
  auto table = train_em(pairs, {50, 1e-12, 0.0}, &trace);
  auto oracle = testing::DenseEm::run({{{"a", "b"}, {"X"}}, {{"a"}, {"Y"}}}, trace.iterations_run);
  c.expect(trace.iterations_run <= 50, "iterations: " + std::to_string(trace.iterations_run));
  for (const char* q : {"a", "b"}) {
    c.near(table.prob(x, q), oracle.prob("X", q), 1e-6, std::string("P(X|") + q + ")");
    c.near(table.prob(y, q), oracle.prob("Y", q), 1e-6, std::string("P(Y|") + q + ")");
  }
  c.expect(trace.log_likelihood.size() == static_cast<std::size_t>(trace.iterations_run) + 1,
           "trace length");
  for (std::size_t i = 1; i < trace.log_likelihood.size(); ++i) {
    c.expect(trace.log_likelihood[i] >= trace.log_likelihood[i - 1] - 1e-9,
             "log-likelihood drops at iteration " + std::to_string(i));
  }
  // The same on the fixture click log, against the dense oracle.
  const auto& reg = testing::fixture_registry();
  auto log = read_click_log(testing::fixture_dir() / "clicks.tsv", testing::fixture_dir() / "docs", reg);
  EmTrace ft;
  auto fixture_table = train_em(log.pairs, {50, 0.0, 0.0}, &ft);
  std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> dense;
  for (const auto& p : log.pairs) {
    std::vector<std::string> apis;
    for (auto a : p.api_list) apis.push_back(std::to_string(a.value));
    dense.emplace_back(p.query_tokens, apis);
  }
  auto fo = testing::DenseEm::run(dense, 50);
  double worst = 0.0;
  for (const auto& q : fo.tokens) {
    for (const auto& t : fo.apis) {
      const ApiId id{static_cast<std::uint32_t>(std::stoul(t))};
      worst = std::max(worst, std::fabs(fixture_table.prob(id, q) - fo.prob(t, q)));
    }
  }
  c.expect(worst <= 1e-6, "fixture max deviation " + std::to_string(worst));
  for (std::size_t i = 1; i < ft.log_likelihood.size(); ++i) {
    c.expect(ft.log_likelihood[i] >= ft.log_likelihood[i - 1] - 1e-9,
             "fixture log-likelihood drops at iteration " + std::to_string(i));
  }
  c.note("P(X|a) = " + std::to_string(table.prob(x, "a")));
}

UnigramStats counts(std::map<std::string, std::uint64_t> m) {
  UnigramStats s;
  for (const auto& [t, n] : m) s.total_terms += n;
  s.term_counts = std::move(m);
  return s;
}

void query_model(Check& c) {
  const std::vector<std::string> q{"match", "regular", "expression"};
  auto s = counts({{"match", 30}, {"regular", 10}, {"expression", 10}});
  c.near(unigram_prob("match", q, s), 0.6, 0.0, "P(match|Q)");
  auto s2 = counts({{"match", 30}, {"regular", 10}, {"expression", 10}, {"noise", 12345}});
  c.near(unigram_prob("match", q, s2), 0.6, 0.0, "P(match|Q) with a larger log total");

  std::mt19937 rng(99);
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<int> word(0, 9);
  std::uniform_int_distribution<std::uint64_t> cnt(0, 50);
  std::map<std::string, std::uint64_t> m;
  for (int i = 0; i < 10; ++i) m["w" + std::to_string(i)] = cnt(rng);
  const auto stats = counts(m);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> query;
    for (int i = len(rng); i > 0; --i) query.push_back("w" + std::to_string(word(rng)));
    double sum = 0.0;
    for (double w : unigram_weights(query, stats)) sum += w;
    c.near(sum, 1.0, 1e-12, "sum of P(q|Q)");
  }

  const ApiId x{0};
  const ApiId y{1};
  TranslationTable table({{"a", {{x, 0.25}, {y, 0.75}}}, {"b", {{x, 1.0}}}});
  auto one = api_posterior(std::vector<std::string>{"a"}, table, counts({{"a", 3}}));
  c.expect(one.size() == 2 && one[0].api == y && one[0].prob == 0.75 && one[1].prob == 0.25,
           "n=1 posterior does not equal P(t|q)");
  auto two = api_posterior(std::vector<std::string>{"a", "b"}, table, counts({{"a", 3}, {"b", 1}}));
  c.expect(two.size() == 2, "two-token posterior size");
  if (two.size() == 2) {
    c.near(two[0].prob, 0.75 * 0.75, 1e-15, "P(Y|a b)");
    c.near(two[1].prob, 0.25 * 0.75 + 1.0 * 0.25, 1e-15, "P(X|a b)");
  }

  const auto& reg = testing::fixture_registry();
  auto log = read_click_log(testing::fixture_dir() / "clicks.tsv", testing::fixture_dir() / "docs", reg);
  QueryModel model{train_em(log.pairs, {}), UnigramStats::from_queries(log.queries)};
  std::size_t bounded = 0;
  for (const auto& query : log.queries) {
    if (query.empty()) continue;
    for (const auto& p : api_posterior(query, model.table, model.stats)) {
      double lo = 1.0;
      double hi = 0.0;
      for (const auto& t : query) {
        lo = std::min(lo, model.table.prob(p.api, t));
        hi = std::max(hi, model.table.prob(p.api, t));
      }
      c.expect(p.prob >= lo - 1e-15 && p.prob <= hi + 1e-15, "convex bound violated");
      ++bounded;
    }
  }
  c.note(std::to_string(bounded) + " posterior entries bounded");
}

void cosine_suite(Check& c) {
  SparseVector a(5, {{0, 0.1}, {1, 0.05}});
  SparseVector b(5, {{0, 1.0}, {1, 1.0}, {2, 1.0}});
  c.near(cosine(a, a), 1.0, 1e-12, "self-similarity");
  c.near(cosine(b, b), 1.0, 1e-12, "binary self-similarity");
  c.expect(cosine(a, SparseVector(5, {{3, 1.0}, {4, 1.0}})) == 0.0, "disjoint support");
  c.near(cosine(a, b), 0.7746, 1e-4, "hand-computed case");

  const std::size_t types = 50;
  const std::size_t members = 20;
  const Registry reg = testing::synthetic_registry(types, members);
  std::mt19937 rng(5150);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(reg.dims() - 1));
  std::uniform_real_distribution<double> w(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> msize(1, 25);
  int equal = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto index = testing::random_index(reg, 1000, types, members, 4, rng);
    std::map<std::uint32_t, double> q;
    for (int k = 0; k < 40; ++k) q[pick(rng)] = w(rng);
    const SparseVector qv(reg.dims(), {q.begin(), q.end()});
    const std::size_t m = msize(rng);
    const bool same = retrieve(qv, index, m) == testing::brute_force_retrieve(qv, index, m);
    c.expect(same, "trial " + std::to_string(trial) + " differs from brute force");
    equal += same;
  }
  c.note(std::to_string(equal) + "/100 retrieval trials equal");
}

void round_trip(Check& c) {
  const auto& reg = testing::fixture_registry();
  testing::RootedGen gen(reg, 4242);
  int passed = 0;
  for (int i = 0; i < 200; ++i) {
    const Scs input = gen.next(3);
    const auto rt = testing::round_trip(input, reg);
    const std::string want = canonical_form(testing::strip_unknowns(input));
    const bool ok = rt.reextracted && canonical_form(*rt.reextracted) == want;
    c.expect(ok, "case " + std::to_string(i) + ": " + canonical_form(input));
    passed += ok;
  }
  c.note(std::to_string(passed) + "/200 round trips");
}

void simplify_properties(Check& c) {
  const auto& reg = testing::fixture_registry();
  std::vector<ApiRef> alphabet;
  for (const char* t : {"StreamReader.ReadLine()", "StreamReader.Close()",
                        "get(StreamReader.EndOfStream)", "StreamReader.ReadToEnd()"}) {
    alphabet.push_back(testing::api(reg, t));
  }
  testing::TreeGen gen(alphabet, 31337);
  for (int i = 0; i < 500; ++i) {
    const Scs t = gen.tree(5);
    const Scs s = simplify(t);
    c.expect(simplify(s) == s, "not idempotent: " + canonical_form(s));
    c.expect(is_simplified(s), "not simplified: " + canonical_form(s));
    c.expect(testing::sorted_apis(t) == testing::sorted_apis(s), "actions changed: " + canonical_form(s));
  }
  std::map<std::string, Scs> seen;
  std::size_t collisions = 0;
  for (int i = 0; i < 500; ++i) {
    const Scs s = simplify(gen.well_formed(4));
    auto [it, inserted] = seen.emplace(canonical_form(s), s);
    if (!inserted && !(it->second == s)) ++collisions;
  }
  c.expect(collisions == 0, std::to_string(collisions) + " canonical-form collisions");
  c.note(std::to_string(seen.size()) + " distinct simplified trees, " + std::to_string(collisions) +
         " collisions");
}

void performance(Check& c) {
  const std::size_t types = 500;
  const std::size_t members = 10;
  const Registry reg = testing::synthetic_registry(types, members);
  std::mt19937 rng(8);
  const auto index = testing::random_index(reg, 10000, types, members, 4, rng);
  c.expect(reg.dims() == 5000, "vocabulary size " + std::to_string(reg.dims()));
  c.expect(index.size() == 10000, "index size " + std::to_string(index.size()));

  // 200 query words, each translating to 25 random APIs.
  TranslationTable::Rows rows;
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(reg.dims() - 1));
  std::uniform_real_distribution<double> w(0.01, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::map<std::uint32_t, double> row;
    while (row.size() < 25) row[pick(rng)] = w(rng);
    double sum = 0.0;
    for (const auto& e : row) sum += e.second;
    TranslationTable::Row r;
    for (const auto& [a, p] : row) r.emplace_back(ApiId{a}, p / sum);
    rows["w" + std::to_string(t)] = std::move(r);
  }
  const QueryModel model{TranslationTable(std::move(rows)), {}};
  const NameModel names;

  double total = 0.0;
  std::size_t snippets = 0;
  for (const char* q : {"w1 w2 w3", "w10 w20", "w7", "w100 w150 w199 w0"}) {
    const auto t0 = Clock::now();
    auto r = synthesize(q, model, index, names, reg);
    total += seconds_since(t0);
    c.expect(r.snippets.size() == 10, std::string(q) + ": " + std::to_string(r.snippets.size()) +
                                          " snippets");
    snippets += r.snippets.size();
  }
  const double per = snippets ? total / static_cast<double>(snippets) : 1e9;
  c.expect(per < 1.5, "per snippet " + ms(per));
  c.note(ms(per) + " per snippet");
}

const char* kMockRegistry = R"({"types": [
  {"name": "T0", "kind": "reference", "constructors": [[]],
   "methods": [{"name": "M0", "returns": "void"}, {"name": "M1", "returns": "void"},
               {"name": "M2", "returns": "void"}]},
  {"name": "T1", "kind": "reference", "constructors": [[]],
   "methods": [{"name": "M0", "returns": "void"}]}]})";

void metric_harness(Check& c) {
  const Registry reg = Registry::parse(kMockRegistry);
  auto api = [&](const char* t) { return testing::api(reg, t); };
  auto group = [&](std::vector<const char*> actions, const char* type, const char* ctor) {
    std::vector<Scs> items{Scs::creation(api(ctor))};
    for (auto a : actions) items.push_back(Scs::action(api(a)));
    Scs s = simplify(Scs::seq(std::move(items)));
    return ScsGroup{canonical_form(s), s, 1, type, to_vector(s, reg), {"mock.mini", "C.M"}};
  };
  // Cosines against the query vector below, best first:
  //   {new, M0, M1} 0.577, {new, M0} 0.566, {new} 0.5, {new, M1} 0.495, {new, M2} 0.354
  // (each divided by the same query norm); the T1 group scores 0.
  ScsIndex index(reg.dims(), {group({"T0.M0()", "T0.M1()"}, "T0", "new T0()"),
                              group({"T0.M0()"}, "T0", "new T0()"), group({}, "T0", "new T0()"),
                              group({"T0.M1()"}, "T0", "new T0()"),
                              group({"T0.M2()"}, "T0", "new T0()"),
                              group({"T1.M0()"}, "T1", "new T1()")});
  TranslationTable::Rows rows;
  rows["alpha"] = {{*reg.id_of_text("new T0()"), 0.5},
                   {*reg.id_of_text("T0.M0()"), 0.3},
                   {*reg.id_of_text("T0.M1()"), 0.2}};
  const QueryModel model{TranslationTable(std::move(rows)), {}};
  const NameModel names;

  // Relevant ranks: {1, 2}, {5}, none.
  //   FRank:  (1 + 5) / 2 = 3, one unanswered query
  //   %Top5:  (40 + 20 + 0) / 3 = 20
  //   %Top10: (20 + 10 + 0) / 3 = 10
  const char* cases_json = R"js([
    {"query": "alpha", "relevant": ["T0.M0()"]},
    {"query": "alpha", "relevant": ["T0.M2()"]},
    {"query": "alpha", "relevant": ["T1.M0()"]}])js";
  const auto cases = parse_eval_cases(cases_json, reg);
  const auto report = evaluate(cases, model, index, names, reg);
  c.expect(report.rows.size() == 3, "rows");
  if (report.rows.size() == 3) {
    c.expect(report.rows[0].frank == std::optional<std::size_t>(1), "case 1 FRank");
    c.expect(report.rows[1].frank == std::optional<std::size_t>(5), "case 2 FRank");
    c.expect(!report.rows[2].frank, "case 3 answered");
  }
  c.expect(report.mean_frank == std::optional<double>(3.0), "mean FRank");
  c.expect(report.mean_top5 == 20.0, "mean %Top5 " + std::to_string(report.mean_top5));
  c.expect(report.mean_top10 == 10.0, "mean %Top10 " + std::to_string(report.mean_top10));
  c.expect(report.unanswered == 1, "unanswered");

  // The same through the eval command.
  const fs::path dir = fs::temp_directory_path() / "idiomforge-acceptance-eval";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "registry.json") << kMockRegistry;
  std::ofstream(dir / "cases.json") << cases_json;
  save_index(dir / "index", index, names);
  save_model(dir / "model.json", model, reg);
  std::ostringstream out, err;
  const int status = cli::cmd_eval({dir / "cases.json", dir / "model.json", dir / "index",
                                    dir / "registry.json", 3},
                                   out, err);
  fs::remove_all(dir);
  c.expect(status == 0, "eval exit " + std::to_string(status) + ": " + err.str());
  std::istringstream lines(out.str());
  std::string line;
  std::vector<std::string> avg;
  while (std::getline(lines, line)) {
    if (line.rfind("Average", 0) == 0) {
      std::istringstream f(line);
      for (std::string w; f >> w;) avg.push_back(w);
    }
  }
  c.expect(avg.size() >= 4 && avg[1] == "3.00" && avg[2] == "20.0" && avg[3] == "10.0",
           "eval average row: " + out.str());
  c.expect(out.str().find("top 10: 1") != std::string::npos, "eval unanswered count");
}

}  // namespace
}  // namespace idiomforge

int main() {
  using namespace idiomforge;
  const std::vector<std::pair<const char*, std::function<void(Check&)>>> criteria{
      {"golden extraction", golden_extraction},
      {"end-to-end fixture", end_to_end_fixture},
      {"EM oracle", em_oracle},
      {"query model", query_model},
      {"cosine and retrieval", cosine_suite},
      {"synthesis round trip", round_trip},
      {"simplify properties", simplify_properties},
      {"performance ceiling", performance},
      {"metric harness", metric_harness},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Check c;
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    std::printf("%s criterion %d (%s): %s\n", c.ok() ? "PASS" : "FAIL", n, name,
                c.summary().c_str());
    failed += !c.ok();
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
