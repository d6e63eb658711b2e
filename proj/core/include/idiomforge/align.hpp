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

#ifndef IDIOMFORGE_ALIGN_HPP_
#define IDIOMFORGE_ALIGN_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idiomforge/registry.hpp"

namespace idiomforge {

class QueryError : public Error {
 public:
  using Error::Error;
};

class ModelFileError : public Error {
 public:
  using Error::Error;
};

// The language tag dropped from queries by default.
inline const std::set<std::string>& default_query_filter() {
  static const std::set<std::string> kFilter = {"minilang"};
  return kFilter;
}

// Lowercases, splits on every non-alphanumeric character and drops tokens
// in `filter`.  Order and duplicates are kept.
std::vector<std::string> tokenize_query(std::string_view text,
                                        const std::set<std::string>& filter = default_query_filter());

// APIs named by a clicked document: member accesses in its fenced code
// blocks plus `Type.Member` mentions in the prose that resolve to a single
// member.  Appearance order, duplicates kept.
std::vector<ApiId> extract_apis_from_document(std::string_view doc, const Registry& reg);

struct ClickPair {
  std::vector<std::string> query_tokens;
  std::vector<ApiId> api_list;
};

// P(t | q) for query words q and APIs t.  Rows are keyed by token; each row
// lists (api, probability) sorted by api.
class TranslationTable {
 public:
  using Row = std::vector<std::pair<ApiId, double>>;
  using Rows = std::map<std::string, Row, std::less<>>;

  TranslationTable() = default;
  // Sorts each row by api and drops zero entries.
  explicit TranslationTable(Rows rows);

  const Rows& rows() const { return rows_; }
  const Row* row(std::string_view token) const;
  double prob(ApiId api, std::string_view token) const;
  bool knows(std::string_view token) const { return row(token) != nullptr; }

  friend bool operator==(const TranslationTable&, const TranslationTable&) = default;

 private:
  Rows rows_;
};

struct UnigramStats {
  std::map<std::string, std::uint64_t> term_counts;
  std::uint64_t total_terms = 0;

  // Counts every token of every query in the log.
  static UnigramStats from_queries(std::span<const std::vector<std::string>> queries);
  std::uint64_t count(const std::string& token) const;
  friend bool operator==(const UnigramStats&, const UnigramStats&) = default;
};

struct EmOptions {
  int iterations = 10;
  double tolerance = 1e-6;  // stop once no entry moves by more than this
  double add_k = 0.0;       // additive smoothing over co-occurring APIs
};

struct EmTrace {
  int iterations_run = 0;
  // Training log-likelihood under the initial table, then after each
  // iteration.
  std::vector<double> log_likelihood;
};

// IBM Model 1 alignment with query words as the source side and APIs as the
// target side, from a uniform start over co-occurring pairs.
TranslationTable train_em(std::span<const ClickPair> pairs, const EmOptions& options,
                          EmTrace* trace = nullptr);

double log_likelihood(std::span<const ClickPair> pairs, const TranslationTable& table);

// P(q_i | Q) for every position i of `query`.  Sums to 1.
std::vector<double> unigram_weights(std::span<const std::string> query, const UnigramStats& stats);
double unigram_prob(std::string_view token, std::span<const std::string> query,
                    const UnigramStats& stats);

struct ApiScore {
  ApiId api;
  double prob = 0.0;
  friend bool operator==(const ApiScore&, const ApiScore&) = default;
};

// P(t | Q) = sum_i P(t | q_i) P(q_i | Q), sorted by probability descending
// then API id ascending.  Empty when no token of the query is known.
std::vector<ApiScore> api_posterior(std::span<const std::string> query,
                                    const TranslationTable& table, const UnigramStats& stats);

struct QueryModel {
  TranslationTable table;
  UnigramStats stats;
  friend bool operator==(const QueryModel&, const QueryModel&) = default;
};

// JSON model file.  APIs are stored by their canonical text and resolved
// against `reg` on load.
std::string model_to_json(const QueryModel& model, const Registry& reg);
QueryModel model_from_json(std::string_view text, const Registry& reg);
void save_model(const std::filesystem::path& path, const QueryModel& model, const Registry& reg);
QueryModel load_model(const std::filesystem::path& path, const Registry& reg);

// Clickthrough ingestion: `clicks` holds `query<TAB>doc_id` lines and
// `docs_dir` holds `doc_id.md` files.
struct ClickLog {
  std::vector<ClickPair> pairs;
  std::vector<std::vector<std::string>> queries;  // every tokenized query line
  std::size_t lines = 0;
  std::size_t missing_docs = 0;
  std::size_t dropped_pairs = 0;  // empty query or no APIs
};

ClickLog read_click_log(const std::filesystem::path& clicks, const std::filesystem::path& docs_dir,
                        const Registry& reg,
                        const std::set<std::string>& filter = default_query_filter());

}  // namespace idiomforge

#endif  // IDIOMFORGE_ALIGN_HPP_
