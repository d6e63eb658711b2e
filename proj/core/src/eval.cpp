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

#include "idiomforge/eval.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace idiomforge {

using nlohmann::json;

std::vector<EvalCase> parse_eval_cases(std::string_view json_text, const Registry& reg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw EvalCaseError(std::string("malformed case file: ") + e.what());
  }
  if (!doc.is_array()) throw EvalCaseError("case file must hold a JSON array");
  std::vector<EvalCase> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& item = doc[i];
    const std::string where = "case " + std::to_string(i + 1);
    if (!item.is_object() || !item.contains("query") || !item["query"].is_string() ||
        !item.contains("relevant") || !item["relevant"].is_array()) {
      throw EvalCaseError(where + ": expected {\"query\": string, \"relevant\": [string...]}");
    }
    EvalCase c;
    c.query = item["query"].get<std::string>();
    for (const auto& r : item["relevant"]) {
      if (!r.is_string()) throw EvalCaseError(where + ": relevant entries must be strings");
      const auto name = r.get<std::string>();
      if (auto id = reg.id_of_text(name)) {
        c.relevant_apis.insert(reg.api(*id));
        continue;
      }
      const auto dot = name.find('.');
      std::vector<ApiRef> members;
      if (dot != std::string::npos && name.find_first_of("()") == std::string::npos) {
        members = reg.members_named(name.substr(0, dot), name.substr(dot + 1));
      }
      if (members.empty()) throw EvalCaseError(where + ": unknown API \"" + name + "\"");
      c.relevant_apis.insert(members.begin(), members.end());
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<EvalCase> load_eval_cases(const std::filesystem::path& path, const Registry& reg) {
  std::ifstream in(path);
  if (!in) throw EvalCaseError("cannot open case file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_eval_cases(buf.str(), reg);
}

bool is_relevant(const Scs& scs, const std::set<ApiRef>& key) {
  for (const auto& a : scs.apis()) {
    if (key.count(a)) return true;
  }
  return false;
}

QueryMetrics grade(std::string query, const std::vector<bool>& relevant_by_rank) {
  QueryMetrics m;
  m.query = std::move(query);
  m.snippets = relevant_by_rank.size();
  std::size_t in5 = 0;
  std::size_t in10 = 0;
  for (std::size_t i = 0; i < relevant_by_rank.size() && i < 10; ++i) {
    if (!relevant_by_rank[i]) continue;
    if (!m.frank) m.frank = i + 1;
    if (i < 5) ++in5;
    ++in10;
  }
  m.top5 = 100.0 * static_cast<double>(in5) / 5.0;
  m.top10 = 100.0 * static_cast<double>(in10) / 10.0;
  return m;
}

EvalReport summarize(std::vector<QueryMetrics> rows) {
  EvalReport r;
  r.rows = std::move(rows);
  if (r.rows.empty()) return r;
  double frank_sum = 0.0;
  std::size_t answered = 0;
  double seconds = 0.0;
  std::size_t snippets = 0;
  for (const auto& q : r.rows) {
    if (q.frank) {
      frank_sum += static_cast<double>(*q.frank);
      ++answered;
    } else {
      ++r.unanswered;
    }
    r.mean_top5 += q.top5;
    r.mean_top10 += q.top10;
    seconds += q.seconds;
    snippets += q.snippets;
    r.names += q.names;
  }
  const auto n = static_cast<double>(r.rows.size());
  r.mean_top5 /= n;
  r.mean_top10 /= n;
  if (answered > 0) r.mean_frank = frank_sum / static_cast<double>(answered);
  if (snippets > 0) r.seconds_per_snippet = seconds / static_cast<double>(snippets);
  return r;
}

EvalReport evaluate(std::span<const EvalCase> cases, const QueryModel& model,
                    const ScsIndex& index, const NameModel& names, const Registry& reg,
                    SynthOptions options) {
  options.m = 10;
  std::vector<QueryMetrics> rows;
  for (const auto& c : cases) {
    const auto start = std::chrono::steady_clock::now();
    auto result = synthesize(c.query, model, index, names, reg, options);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    std::vector<bool> graded;
    NameCounts counts;
    for (const auto& s : result.snippets) {
      graded.push_back(is_relevant(s.root_scs, c.relevant_apis));
      counts += s.names;
    }
    auto m = grade(c.query, graded);
    m.seconds = elapsed.count();
    m.names = counts;
    rows.push_back(std::move(m));
  }
  return summarize(std::move(rows));
}

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

std::string format_report(const EvalReport& report) {
  std::size_t qw = 7;
  for (const auto& r : report.rows) qw = std::max(qw, r.query.size());
  std::ostringstream out;
  out << "# Relevance is mechanical: a snippet is relevant when its call sequence\n"
         "# names an API from the case's answer key.  No human grading.\n";
  out << pad("Query", qw) << "  FRank  %Top5  %Top10  Snippets  ms/snippet\n";
  for (const auto& r : report.rows) {
    const double ms = r.snippets ? 1000.0 * r.seconds / static_cast<double>(r.snippets) : 0.0;
    out << pad(r.query, qw) << "  " << pad(r.frank ? std::to_string(*r.frank) : "-", 5) << "  "
        << pad(fixed(r.top5, 0), 5) << "  " << pad(fixed(r.top10, 0), 6) << "  "
        << pad(std::to_string(r.snippets), 8) << "  " << fixed(ms, 2) << "\n";
  }
  out << pad("Average", qw) << "  "
      << pad(report.mean_frank ? fixed(*report.mean_frank, 2) : "-", 5) << "  "
      << pad(fixed(report.mean_top5, 1), 5) << "  " << pad(fixed(report.mean_top10, 1), 6)
      << "  " << pad("", 8) << "  " << fixed(1000.0 * report.seconds_per_snippet, 2) << "\n";
  out << "Queries without a relevant snippet in the top 10: " << report.unanswered << "\n";
  out << "Variable names: " << report.names.mined << " mined, " << report.names.formal
      << " formal, " << report.names.fallback << " fallback\n";
  return out.str();
}

}  // namespace idiomforge
