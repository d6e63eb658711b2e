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

#ifndef IDIOMFORGE_EVAL_HPP_
#define IDIOMFORGE_EVAL_HPP_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "idiomforge/registry.hpp"
#include "idiomforge/synth.hpp"

namespace idiomforge {

class EvalCaseError : public Error {
 public:
  using Error::Error;
};

// A query and its answer key.  A snippet counts as relevant when its call
// sequence names at least one API of the key.
struct EvalCase {
  std::string query;
  std::set<ApiRef> relevant_apis;
};

// JSON array of {"query": "...", "relevant": [...]}.  Each relevant entry is
// either a canonical API (`Regex.Match(string)`, `get(Match.Success)`) or
// `Type.Member`, which stands for every overload and the field getter.
std::vector<EvalCase> parse_eval_cases(std::string_view json_text, const Registry& reg);
std::vector<EvalCase> load_eval_cases(const std::filesystem::path& path, const Registry& reg);

bool is_relevant(const Scs& scs, const std::set<ApiRef>& key);

struct QueryMetrics {
  std::string query;
  std::optional<std::size_t> frank;  // first relevant rank within the top 10
  double top5 = 0.0;                 // percent of the 5 slots holding relevant snippets
  double top10 = 0.0;
  std::size_t snippets = 0;
  double seconds = 0.0;
  NameCounts names;
};

// Metrics from per-rank relevance (rank 1 first).  Missing ranks count as
// not relevant, so the denominators stay 5 and 10.
QueryMetrics grade(std::string query, const std::vector<bool>& relevant_by_rank);

struct EvalReport {
  std::vector<QueryMetrics> rows;
  std::optional<double> mean_frank;  // over queries with a relevant snippet
  std::size_t unanswered = 0;        // queries with no relevant snippet in the top 10
  double mean_top5 = 0.0;
  double mean_top10 = 0.0;
  double seconds_per_snippet = 0.0;
  NameCounts names;
};

EvalReport summarize(std::vector<QueryMetrics> rows);

// Runs every case through synthesize and grades the top 10.
EvalReport evaluate(std::span<const EvalCase> cases, const QueryModel& model,
                    const ScsIndex& index, const NameModel& names, const Registry& reg,
                    SynthOptions options = {});

// Fixed-width table, one row per query plus the averages.
std::string format_report(const EvalReport& report);

}  // namespace idiomforge

#endif  // IDIOMFORGE_EVAL_HPP_
