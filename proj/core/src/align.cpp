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

#include "idiomforge/align.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <memory>
#include <regex>
#include <sstream>
#include <unordered_map>

#include "idiomforge/minilang.hpp"
#include "json_io.hpp"

namespace idiomforge {
namespace {

using detail::json;

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Located {
  std::size_t offset;  // byte offset in the document
  int line;
  int column;
  ApiId api;
};

// Best-effort parse of a code fragment: a whole program, a class body, or a
// statement list.
std::shared_ptr<const minilang::Program> parse_fragment(const std::string& code) {
  const std::string attempts[] = {
      code,
      "class __Fragment {\n" + code + "\n}",
      "class __Fragment { void __fragment() {\n" + code + "\n} }",
  };
  for (const auto& text : attempts) {
    try {
      return std::make_shared<const minilang::Program>(minilang::parse_program(text));
    } catch (const minilang::SyntaxError&) {
    }
  }
  return nullptr;
}

void collect_code_apis(const std::string& code, std::size_t offset, const Registry& reg,
                       std::vector<Located>& out) {
  auto program = parse_fragment(code);
  if (!program) return;
  auto typed = minilang::resolve_types(program, reg);
  for (const auto& tm : typed.methods) {
    for (const auto& [expr, info] : tm.exprs) {
      if (!info.api) continue;
      if (auto id = reg.id_of(*info.api)) {
        out.push_back({offset, expr->pos.line, expr->pos.column, *id});
      }
    }
  }
}

void collect_prose_apis(std::string_view prose, std::size_t offset, const Registry& reg,
                        std::vector<Located>& out) {
  static const std::regex kMention(R"(([A-Za-z_][A-Za-z0-9_]*)\.([A-Za-z_][A-Za-z0-9_]*))");
  std::string text(prose);
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kMention);
       it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (m.position(0) > 0) {
      char before = text[static_cast<std::size_t>(m.position(0)) - 1];
      if (std::isalnum(static_cast<unsigned char>(before)) || before == '_' || before == '.') {
        continue;
      }
    }
    auto members = reg.members_named(m[1].str(), m[2].str());
    if (members.size() != 1) continue;
    if (auto id = reg.id_of(members.front())) {
      out.push_back({offset + static_cast<std::size_t>(m.position(0)), 0, 0, *id});
    }
  }
}

bool is_fence(std::string_view line) {
  auto first = line.find_first_not_of(" \t");
  return first != std::string_view::npos && line.substr(first, 3) == "```";
}

}  // namespace

std::vector<std::string> tokenize_query(std::string_view text,
                                        const std::set<std::string>& filter) {
  std::vector<std::string> out;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty() && !filter.count(cur)) out.push_back(cur);
    cur.clear();
  };
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

std::vector<ApiId> extract_apis_from_document(std::string_view doc, const Registry& reg) {
  std::vector<Located> found;
  std::size_t pos = 0;
  std::size_t prose_start = 0;
  bool in_code = false;
  std::size_t code_start = 0;
  std::string code;
  while (pos < doc.size()) {
    auto end = doc.find('\n', pos);
    if (end == std::string_view::npos) end = doc.size();
    auto line = doc.substr(pos, end - pos);
    const std::size_t next = std::min(end + 1, doc.size());
    if (is_fence(line)) {
      if (in_code) {
        collect_code_apis(code, code_start, reg, found);
        prose_start = next;
      } else {
        collect_prose_apis(doc.substr(prose_start, pos - prose_start), prose_start, reg, found);
        code.clear();
        code_start = pos;
      }
      in_code = !in_code;
    } else if (in_code) {
      code.append(line);
      code += '\n';
    }
    pos = next;
  }
  if (in_code) {
    // An unterminated fence runs to the end of the document.
    collect_code_apis(code, code_start, reg, found);
  } else {
    collect_prose_apis(doc.substr(prose_start), prose_start, reg, found);
  }

  std::stable_sort(found.begin(), found.end(), [](const Located& a, const Located& b) {
    return std::tie(a.offset, a.line, a.column) < std::tie(b.offset, b.line, b.column);
  });
  std::vector<ApiId> out;
  out.reserve(found.size());
  for (const auto& l : found) out.push_back(l.api);
  return out;
}

// ---------------------------------------------------------------------------

TranslationTable::TranslationTable(Rows rows) : rows_(std::move(rows)) {
  for (auto& [token, row] : rows_) {
    std::erase_if(row, [](const auto& e) { return e.second == 0.0; });
    std::sort(row.begin(), row.end());
  }
  std::erase_if(rows_, [](const auto& kv) { return kv.second.empty(); });
}

const TranslationTable::Row* TranslationTable::row(std::string_view token) const {
  auto it = rows_.find(token);
  return it == rows_.end() ? nullptr : &it->second;
}

double TranslationTable::prob(ApiId api, std::string_view token) const {
  const auto* r = row(token);
  if (!r) return 0.0;
  auto it = std::lower_bound(r->begin(), r->end(), api,
                             [](const auto& e, ApiId a) { return e.first < a; });
  return it != r->end() && it->first == api ? it->second : 0.0;
}

UnigramStats UnigramStats::from_queries(std::span<const std::vector<std::string>> queries) {
  UnigramStats s;
  for (const auto& q : queries) {
    for (const auto& t : q) {
      ++s.term_counts[t];
      ++s.total_terms;
    }
  }
  return s;
}

std::uint64_t UnigramStats::count(const std::string& token) const {
  auto it = term_counts.find(token);
  return it == term_counts.end() ? 0 : it->second;
}

// ---------------------------------------------------------------------------
// EM

namespace {

// Dense-per-row working storage: for each token, the co-occurring APIs
// (sorted) and their current probabilities.
struct EmState {
  std::vector<std::string> tokens;
  std::vector<std::vector<ApiId>> apis;
  std::vector<std::vector<double>> probs;

  // Per pair, each token's row index and, per (api position, token
  // position), the slot of that api within the token's row.
  struct PairIndex {
    std::vector<std::size_t> rows;
    std::vector<std::vector<std::size_t>> slots;  // [t][q]
  };
  std::vector<PairIndex> pairs;
};

EmState init_state(std::span<const ClickPair> pairs) {
  std::map<std::string, std::set<ApiId>> cooc;
  for (const auto& p : pairs) {
    for (const auto& q : p.query_tokens) cooc[q].insert(p.api_list.begin(), p.api_list.end());
  }
  EmState st;
  std::unordered_map<std::string, std::size_t> row_of;
  for (auto& [q, apis] : cooc) {
    row_of[q] = st.tokens.size();
    st.tokens.push_back(q);
    st.apis.emplace_back(apis.begin(), apis.end());
    st.probs.emplace_back(apis.size(), 1.0 / static_cast<double>(apis.size()));
  }
  for (const auto& p : pairs) {
    EmState::PairIndex pi;
    for (const auto& q : p.query_tokens) pi.rows.push_back(row_of.at(q));
    for (const auto& t : p.api_list) {
      std::vector<std::size_t> slots;
      for (auto r : pi.rows) {
        const auto& row = st.apis[r];
        slots.push_back(static_cast<std::size_t>(
            std::lower_bound(row.begin(), row.end(), t) - row.begin()));
      }
      pi.slots.push_back(std::move(slots));
    }
    st.pairs.push_back(std::move(pi));
  }
  return st;
}

double state_log_likelihood(const EmState& st) {
  double ll = 0.0;
  for (const auto& pi : st.pairs) {
    const double n = static_cast<double>(pi.rows.size());
    for (const auto& slots : pi.slots) {
      double sum = 0.0;
      for (std::size_t k = 0; k < pi.rows.size(); ++k) sum += st.probs[pi.rows[k]][slots[k]];
      ll += std::log(sum / n);
    }
  }
  return ll;
}

TranslationTable to_table(const EmState& st) {
  TranslationTable::Rows rows;
  for (std::size_t r = 0; r < st.tokens.size(); ++r) {
    auto& row = rows[st.tokens[r]];
    for (std::size_t i = 0; i < st.apis[r].size(); ++i) row.emplace_back(st.apis[r][i], st.probs[r][i]);
  }
  return TranslationTable(std::move(rows));
}

}  // namespace

TranslationTable train_em(std::span<const ClickPair> input, const EmOptions& options,
                          EmTrace* trace) {
  std::vector<ClickPair> pairs;
  for (const auto& p : input) {
    if (!p.query_tokens.empty() && !p.api_list.empty()) pairs.push_back(p);
  }
  if (pairs.empty()) throw Error("EM training needs at least one non-empty (query, APIs) pair");
  if (options.iterations < 0) throw Error("iteration count must be non-negative");

  EmState st = init_state(pairs);
  if (trace) {
    trace->iterations_run = 0;
    trace->log_likelihood.assign(1, state_log_likelihood(st));
  }

  std::vector<std::vector<double>> counts(st.probs.size());
  for (int it = 0; it < options.iterations; ++it) {
    for (std::size_t r = 0; r < counts.size(); ++r) counts[r].assign(st.probs[r].size(), 0.0);

    // E-step: spread each API occurrence over the query words.
    for (const auto& pi : st.pairs) {
      for (const auto& slots : pi.slots) {
        double denom = 0.0;
        for (std::size_t k = 0; k < pi.rows.size(); ++k) denom += st.probs[pi.rows[k]][slots[k]];
        if (denom <= 0.0) continue;
        for (std::size_t k = 0; k < pi.rows.size(); ++k) {
          counts[pi.rows[k]][slots[k]] += st.probs[pi.rows[k]][slots[k]] / denom;
        }
      }
    }

    // M-step: renormalise per query word.
    double max_change = 0.0;
    for (std::size_t r = 0; r < counts.size(); ++r) {
      double total = 0.0;
      for (double c : counts[r]) total += c + options.add_k;
      for (std::size_t i = 0; i < counts[r].size(); ++i) {
        const double p = total > 0.0 ? (counts[r][i] + options.add_k) / total : st.probs[r][i];
        max_change = std::max(max_change, std::abs(p - st.probs[r][i]));
        st.probs[r][i] = p;
      }
    }

    if (trace) {
      trace->iterations_run = it + 1;
      trace->log_likelihood.push_back(state_log_likelihood(st));
    }
    if (max_change < options.tolerance) break;
  }
  return to_table(st);
}

double log_likelihood(std::span<const ClickPair> pairs, const TranslationTable& table) {
  double ll = 0.0;
  for (const auto& p : pairs) {
    if (p.query_tokens.empty()) continue;
    const double n = static_cast<double>(p.query_tokens.size());
    for (const auto& t : p.api_list) {
      double sum = 0.0;
      for (const auto& q : p.query_tokens) sum += table.prob(t, q);
      ll += std::log(sum / n);
    }
  }
  return ll;
}

// ---------------------------------------------------------------------------

std::vector<double> unigram_weights(std::span<const std::string> query, const UnigramStats& stats) {
  if (query.empty()) throw QueryError("empty query");
  std::vector<double> w;
  w.reserve(query.size());
  double total = 0.0;
  for (const auto& q : query) {
    w.push_back(static_cast<double>(stats.count(q)));
    total += w.back();
  }
  // The shared denominator of the log-frequency estimate cancels, so raw
  // counts normalise directly.
  for (auto& x : w) {
    x = total > 0.0 ? x / total : 1.0 / static_cast<double>(query.size());
  }
  return w;
}

double unigram_prob(std::string_view token, std::span<const std::string> query,
                    const UnigramStats& stats) {
  if (query.empty()) throw QueryError("empty query");
  double total = 0.0;
  bool present = false;
  for (const auto& q : query) {
    total += static_cast<double>(stats.count(q));
    present = present || q == token;
  }
  if (total <= 0.0) return present ? 1.0 / static_cast<double>(query.size()) : 0.0;
  return static_cast<double>(stats.count(std::string(token))) / total;
}

std::vector<ApiScore> api_posterior(std::span<const std::string> query,
                                    const TranslationTable& table, const UnigramStats& stats) {
  const auto weights = unigram_weights(query, stats);
  std::map<ApiId, double> mass;
  for (std::size_t i = 0; i < query.size(); ++i) {
    const auto* row = table.row(query[i]);
    if (!row) continue;
    for (const auto& [api, p] : *row) mass[api] += p * weights[i];
  }
  std::vector<ApiScore> out;
  out.reserve(mass.size());
  for (const auto& [api, p] : mass) {
    if (p > 0.0) out.push_back({api, p});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ApiScore& a, const ApiScore& b) { return a.prob > b.prob; });
  return out;
}

// ---------------------------------------------------------------------------

std::string model_to_json(const QueryModel& model, const Registry& reg) {
  json translation = json::object();
  for (const auto& [token, row] : model.table.rows()) {
    json r = json::object();
    for (const auto& [api, p] : row) r[reg.api(api).to_string()] = p;
    translation[token] = std::move(r);
  }
  json counts = json::object();
  for (const auto& [t, n] : model.stats.term_counts) counts[t] = n;
  json doc{{"format", "idiom-forge-model"},
           {"version", 1},
           {"translation", std::move(translation)},
           {"unigram", {{"total", model.stats.total_terms}, {"counts", std::move(counts)}}}};
  return doc.dump(1) + "\n";
}

QueryModel model_from_json(std::string_view text, const Registry& reg) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFileError(std::string("corrupt model file: ") + e.what());
  }
  if (!doc.is_object() || doc.value("format", std::string()) != "idiom-forge-model") {
    throw ModelFileError("not an idiom-forge model file");
  }
  if (doc.value("version", -1) != 1) throw ModelFileError("model file version mismatch");
  QueryModel m;
  try {
    TranslationTable::Rows rows;
    for (const auto& [token, r] : doc.at("translation").items()) {
      auto& row = rows[token];
      for (const auto& [api_text, p] : r.items()) {
        auto id = reg.id_of_text(api_text);
        if (!id) throw ModelFileError("model references " + api_text + " absent from the registry");
        row.emplace_back(*id, p.get<double>());
      }
    }
    m.table = TranslationTable(std::move(rows));
    const auto& uni = doc.at("unigram");
    m.stats.total_terms = uni.at("total").get<std::uint64_t>();
    for (const auto& [t, n] : uni.at("counts").items()) m.stats.term_counts[t] = n.get<std::uint64_t>();
  } catch (const ModelFileError&) {
    throw;
  } catch (const std::exception& e) {
    throw ModelFileError(std::string("corrupt model file: ") + e.what());
  }
  return m;
}

void save_model(const std::filesystem::path& path, const QueryModel& model, const Registry& reg) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ModelFileError("cannot write model file " + path.string());
  out << model_to_json(model, reg);
}

QueryModel load_model(const std::filesystem::path& path, const Registry& reg) {
  if (!std::filesystem::exists(path)) {
    throw ModelFileError("model file not found: " + path.string() +
                         " (run `idiom-forge train` first)");
  }
  return model_from_json(read_text(path), reg);
}

ClickLog read_click_log(const std::filesystem::path& clicks, const std::filesystem::path& docs_dir,
                        const Registry& reg, const std::set<std::string>& filter) {
  std::ifstream in(clicks);
  if (!in) throw Error("cannot open click log " + clicks.string());
  ClickLog log;
  std::map<std::string, std::optional<std::vector<ApiId>>> doc_cache;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(clicks.string() + ":" + std::to_string(lineno) +
                  ": expected `query<TAB>doc_id`");
    }
    ++log.lines;
    auto tokens = tokenize_query(line.substr(0, tab), filter);
    std::string doc_id = line.substr(tab + 1);
    log.queries.push_back(tokens);

    auto [it, inserted] = doc_cache.try_emplace(doc_id);
    if (inserted) {
      const auto path = docs_dir / (doc_id + ".md");
      if (std::filesystem::exists(path)) it->second = extract_apis_from_document(read_text(path), reg);
    }
    if (!it->second) {
      ++log.missing_docs;
      continue;
    }
    if (tokens.empty() || it->second->empty()) {
      ++log.dropped_pairs;
      continue;
    }
    log.pairs.push_back({std::move(tokens), *it->second});
  }
  return log;
}

}  // namespace idiomforge
