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

#include "idiomforge/extract.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json_io.hpp"

namespace idiomforge {
namespace {

using minilang::Expr;
using minilang::Stmt;
using minilang::TypedMethod;

// Raised inside the walker when a re-assignment of the variable is nested
// in control flow; the variable is then left out.
struct NestedReassignment {};

class LifetimeWalker {
 public:
  LifetimeWalker(const TypedMethod& tm, int var) : tm_(tm), var_(var) {}

  bool is_var(const Expr& e) const { return tm_.var_of(e) == var_; }

  // The creation that starts a lifetime from initializer `e`.
  Scs head(const Expr& e) const {
    const auto& info = tm_.info(e);
    if ((e.kind == Expr::Kind::kCall || e.kind == Expr::Kind::kNew ||
         e.kind == Expr::Kind::kMember) &&
        info.api) {
      return Scs::creation(*info.api);
    }
    return Scs::unknown();
  }

  void access(const Expr& e, std::vector<Scs>& out) const {
    const auto& info = tm_.info(e);
    out.push_back(info.api ? Scs::action(*info.api) : Scs::unknown());
  }

  void argument(const Expr& arg, std::vector<Scs>& out) const {
    if (is_var(arg)) {
      out.push_back(Scs::unknown());
    } else {
      expr(arg, out);
    }
  }

  void expr(const Expr& e, std::vector<Scs>& out) const {
    switch (e.kind) {
      case Expr::Kind::kMember:
        expr(e.operands[0], out);
        if (is_var(e.operands[0])) access(e, out);
        break;
      case Expr::Kind::kCall:
        expr(e.operands[0], out);
        for (std::size_t i = 1; i < e.operands.size(); ++i) argument(e.operands[i], out);
        if (is_var(e.operands[0])) access(e, out);
        break;
      case Expr::Kind::kNew:
        for (const auto& a : e.operands) argument(a, out);
        break;
      case Expr::Kind::kEq:
        expr(e.operands[0], out);
        expr(e.operands[1], out);
        break;
      default:
        break;
    }
  }

  Scs expr_scs(const Expr& e) const {
    std::vector<Scs> out;
    expr(e, out);
    return Scs::seq(std::move(out));
  }

  bool reassigns(const Stmt& s) const {
    return s.kind == Stmt::Kind::kAssign && is_var(s.exprs[0]);
  }

  Scs block(const std::vector<Stmt>& stmts) const {
    std::vector<Scs> out;
    for (const auto& s : stmts) out.push_back(stmt(s));
    return Scs::seq(std::move(out));
  }

  Scs stmt(const Stmt& s) const {
    std::vector<Scs> out;
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
      case Stmt::Kind::kExpr:
        expr(s.exprs[0], out);
        break;
      case Stmt::Kind::kAssign: {
        if (reassigns(s)) throw NestedReassignment{};
        const Expr& lhs = s.exprs[0];
        expr(s.exprs[1], out);
        if (lhs.kind == Expr::Kind::kMember) {
          expr(lhs.operands[0], out);
          if (is_var(lhs.operands[0])) access(lhs, out);
        }
        break;
      }
      case Stmt::Kind::kReturn:
        if (!s.exprs.empty()) argument(s.exprs[0], out);
        break;
      case Stmt::Kind::kIf:
        return Scs::if_else(expr_scs(s.exprs[0]), block(s.body), block(s.else_body));
      case Stmt::Kind::kWhile:
        return Scs::while_loop(expr_scs(s.exprs[0]), block(s.body));
      case Stmt::Kind::kComment:
        break;
    }
    return Scs::seq(std::move(out));
  }

 private:
  const TypedMethod& tm_;
  int var_;
};

// Locates the statement list holding `decl`.
const std::vector<Stmt>* block_of(const std::vector<Stmt>& stmts, const Stmt* decl,
                                  std::size_t& index) {
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    if (&stmts[i] == decl) {
      index = i;
      return &stmts;
    }
    if (const auto* b = block_of(stmts[i].body, decl, index)) return b;
    if (const auto* b = block_of(stmts[i].else_body, decl, index)) return b;
  }
  return nullptr;
}

void mark_aliases(const TypedMethod& tm, const std::vector<Stmt>& stmts, std::set<int>& aliased) {
  for (const auto& s : stmts) {
    if (s.kind == Stmt::Kind::kVarDecl) {
      int rhs = tm.var_of(s.exprs[0]);
      if (rhs >= 0) {
        aliased.insert(rhs);
        if (auto it = tm.declares.find(&s); it != tm.declares.end()) aliased.insert(it->second);
      }
    } else if (s.kind == Stmt::Kind::kAssign) {
      int rhs = tm.var_of(s.exprs[1]);
      if (rhs >= 0) {
        aliased.insert(rhs);
        int lhs = tm.var_of(s.exprs[0]);
        if (lhs >= 0) aliased.insert(lhs);
      }
    }
    mark_aliases(tm, s.body, aliased);
    mark_aliases(tm, s.else_body, aliased);
  }
}

void mine_names(const TypedMethod& tm, const std::vector<Stmt>& stmts, IndexBuilder& out) {
  for (const auto& s : stmts) {
    if (s.kind == Stmt::Kind::kVarDecl) {
      const Expr& init = s.exprs[0];
      const auto& info = tm.info(init);
      if (info.api && (init.kind == Expr::Kind::kCall || init.kind == Expr::Kind::kNew ||
                       init.kind == Expr::Kind::kMember)) {
        out.add_name(info.api->kind == MemberKind::kFieldGet, *info.api, s.name);
      }
    }
    mine_names(tm, s.body, out);
    mine_names(tm, s.else_body, out);
  }
}

std::vector<NameCount> sorted_names(const std::map<std::string, std::uint64_t>& counts) {
  std::vector<NameCount> out;
  for (const auto& [name, n] : counts) out.push_back({name, n});
  std::stable_sort(out.begin(), out.end(),
                   [](const NameCount& a, const NameCount& b) { return a.count > b.count; });
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IndexFileError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IndexFileError("cannot write " + path.string());
  out << text;
  if (!out) throw IndexFileError("write failed for " + path.string());
}

// Splits JSON-lines text and checks the header record.  Returns the data
// lines; the header must announce exactly that many records.
std::vector<detail::json> read_records(std::string_view text, const std::string& format) {
  std::vector<detail::json> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      throw IndexFileError(format + ": corrupt file (unterminated final record)");
    }
    auto line = text.substr(start, end - start);
    start = end + 1;
    if (line.empty()) continue;
    try {
      lines.push_back(detail::json::parse(line));
    } catch (const detail::json::parse_error& e) {
      throw IndexFileError(format + ": corrupt file: " + e.what());
    }
  }
  if (lines.empty()) throw IndexFileError(format + ": corrupt file (missing header)");
  const auto& header = lines.front();
  if (!header.is_object() || header.value("format", std::string()) != format) {
    throw IndexFileError(format + ": corrupt file (bad header)");
  }
  if (header.value("version", -1) != kIndexFormatVersion) {
    throw IndexFileError(format + ": version mismatch (file has " +
                         std::to_string(header.value("version", -1)) + ", expected " +
                         std::to_string(kIndexFormatVersion) + ")");
  }
  if (header.value("records", std::size_t{0}) != lines.size() - 1) {
    throw IndexFileError(format + ": corrupt file (record count mismatch)");
  }
  return lines;
}

}  // namespace

// ---------------------------------------------------------------------------

ScsIndex::ScsIndex(std::size_t dims, std::vector<ScsGroup> groups)
    : dims_(dims), groups_(std::move(groups)) {
  std::sort(groups_.begin(), groups_.end(),
            [](const ScsGroup& a, const ScsGroup& b) { return a.key < b.key; });
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    if (g && groups_[g].key == groups_[g - 1].key) {
      throw Error("duplicate SCS group \"" + groups_[g].key + "\"");
    }
    if (groups_[g].frequency == 0) throw Error("SCS group with zero frequency");
    for (const auto& [i, w] : groups_[g].vector.entries()) {
      (void)w;
      tracers_[ApiId{i}].push_back(static_cast<std::uint32_t>(g));
    }
  }
}

const ScsGroup* ScsIndex::find(std::string_view key) const {
  auto it = std::lower_bound(groups_.begin(), groups_.end(), key,
                             [](const ScsGroup& g, std::string_view k) { return g.key < k; });
  return it != groups_.end() && it->key == key ? &*it : nullptr;
}

std::span<const std::uint32_t> ScsIndex::tracer(ApiId api) const {
  auto it = tracers_.find(api);
  if (it == tracers_.end()) return {};
  return it->second;
}

void ScsIndex::validate(const Registry& reg) const {
  if (dims_ != reg.dims()) {
    throw IndexFileError("index built for " + std::to_string(dims_) +
                         " APIs but the registry has " + std::to_string(reg.dims()));
  }
  for (const auto& g : groups_) {
    for (const auto& api : g.scs.apis()) {
      if (!reg.id_of(api)) {
        throw IndexFileError("index references " + api.to_string() + " absent from the registry");
      }
    }
    if (to_vector(g.scs, reg) != g.vector) {
      throw IndexFileError("stale vector for group \"" + g.key + "\"");
    }
  }
}

std::vector<std::string> NameModel::candidates(const ApiRef& creator) const {
  const auto& table = creator.kind == MemberKind::kFieldGet ? by_field : by_creator;
  std::vector<std::string> out;
  if (auto it = table.find(creator); it != table.end()) {
    for (const auto& nc : it->second) out.push_back(nc.name);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::vector<ExtractedSequence> extract_method(const TypedMethod& tm, const Registry& reg) {
  std::set<int> aliased;
  mark_aliases(tm, tm.method->body, aliased);

  std::vector<ExtractedSequence> out;
  for (std::size_t v = 0; v < tm.vars.size(); ++v) {
    const auto& var = tm.vars[v];
    if (var.is_param || !var.decl || !var.type || !reg.has_type(*var.type)) continue;
    if (aliased.count(static_cast<int>(v))) continue;

    std::size_t at = 0;
    const auto* stmts = block_of(tm.method->body, var.decl, at);
    if (!stmts) continue;

    LifetimeWalker walker(tm, static_cast<int>(v));
    std::vector<std::vector<Scs>> lifetimes(1);
    lifetimes.back().push_back(walker.head(var.decl->exprs[0]));
    try {
      for (std::size_t i = at + 1; i < stmts->size(); ++i) {
        const Stmt& s = (*stmts)[i];
        if (walker.reassigns(s)) {
          lifetimes.back().push_back(walker.expr_scs(s.exprs[1]));
          lifetimes.emplace_back();
          lifetimes.back().push_back(walker.head(s.exprs[1]));
        } else {
          lifetimes.back().push_back(walker.stmt(s));
        }
      }
    } catch (const NestedReassignment&) {
      continue;
    }
    for (auto& parts : lifetimes) {
      out.push_back({var.name, *var.type, simplify(Scs::seq(std::move(parts)))});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

void IndexBuilder::add_file(const CorpusFile& file, const Registry& reg) {
  ++stats_.files;
  std::shared_ptr<const minilang::Program> program;
  try {
    program = std::make_shared<const minilang::Program>(minilang::parse_program(file.source));
  } catch (const minilang::SyntaxError& e) {
    stats_.failures.push_back(file.path + ": " + e.what());
    return;
  }
  ++stats_.parsed;
  auto typed = minilang::resolve_types(program, reg);
  for (const auto& tm : typed.methods) {
    ++stats_.methods;
    SourceRef src{file.path, tm.owner->name + "." + tm.method->name};
    for (const auto& seq : extract_method(tm, reg)) {
      if (seq.scs.is_empty()) continue;
      ++stats_.sequences;
      add_sequence(seq.scs, seq.type, src);
    }
    mine_names(tm, tm.method->body, *this);
  }
}

void IndexBuilder::add_sequence(const Scs& simplified, const std::string& root_type,
                                const SourceRef& source, std::uint64_t count) {
  auto key = canonical_form(simplified);
  auto [it, inserted] = groups_.try_emplace(key);
  auto& g = it->second;
  if (inserted) {
    g.scs = simplified;
    g.root_type = root_type;
    g.source = source;
  } else {
    g.root_type = std::min(g.root_type, root_type);
    g.source = std::min(g.source, source);
  }
  g.frequency += count;
}

void IndexBuilder::add_name(bool field, const ApiRef& creator, const std::string& name,
                            std::uint64_t count) {
  (field ? field_names_ : creator_names_)[creator][name] += count;
}

void IndexBuilder::merge(IndexBuilder&& other) {
  for (auto& [key, g] : other.groups_) {
    auto [it, inserted] = groups_.try_emplace(key, std::move(g));
    if (!inserted) {
      it->second.frequency += g.frequency;
      it->second.root_type = std::min(it->second.root_type, g.root_type);
      it->second.source = std::min(it->second.source, g.source);
    }
  }
  for (auto& [api, names] : other.creator_names_) {
    for (auto& [n, c] : names) creator_names_[api][n] += c;
  }
  for (auto& [api, names] : other.field_names_) {
    for (auto& [n, c] : names) field_names_[api][n] += c;
  }
  stats_.files += other.stats_.files;
  stats_.parsed += other.stats_.parsed;
  stats_.methods += other.stats_.methods;
  stats_.sequences += other.stats_.sequences;
  stats_.failures.insert(stats_.failures.end(), other.stats_.failures.begin(),
                         other.stats_.failures.end());
  std::sort(stats_.failures.begin(), stats_.failures.end());
}

ScsIndex IndexBuilder::build_index(const Registry& reg) const {
  std::vector<ScsGroup> groups;
  groups.reserve(groups_.size());
  for (const auto& [key, g] : groups_) {
    groups.push_back(
        ScsGroup{key, g.scs, g.frequency, g.root_type, to_vector(g.scs, reg), g.source});
  }
  return ScsIndex(reg.dims(), std::move(groups));
}

NameModel IndexBuilder::build_names() const {
  NameModel m;
  for (const auto& [api, names] : creator_names_) m.by_creator[api] = sorted_names(names);
  for (const auto& [api, names] : field_names_) m.by_field[api] = sorted_names(names);
  return m;
}

ExtractStats IndexBuilder::stats() const {
  auto s = stats_;
  std::sort(s.failures.begin(), s.failures.end());
  return s;
}

ExtractResult build_index(std::span<const CorpusFile> corpus, const Registry& reg,
                          unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, std::max<std::size_t>(1, corpus.size()));

  std::vector<IndexBuilder> partials(threads);
  std::atomic<std::size_t> next{0};
  auto work = [&](IndexBuilder& builder) {
    for (std::size_t i = next++; i < corpus.size(); i = next++) builder.add_file(corpus[i], reg);
  };
  if (threads == 1) {
    work(partials[0]);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, std::ref(partials[t]));
    for (auto& th : pool) th.join();
  }
  IndexBuilder all;
  for (auto& p : partials) all.merge(std::move(p));

  return {all.build_index(reg), all.build_names(), all.stats()};
}

std::vector<CorpusFile> read_corpus(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw Error("corpus directory not found: " + dir.string());
  std::vector<CorpusFile> out;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".mini") continue;
    out.push_back({fs::relative(entry.path(), dir).generic_string(), read_file(entry.path())});
  }
  std::sort(out.begin(), out.end(),
            [](const CorpusFile& a, const CorpusFile& b) { return a.path < b.path; });
  return out;
}

// ---------------------------------------------------------------------------

std::string index_to_jsonl(const ScsIndex& index) {
  std::string out = detail::json{{"format", "idiom-forge-scs-index"},
                                 {"version", kIndexFormatVersion},
                                 {"dims", index.dims()},
                                 {"records", index.size()}}
                        .dump() +
                    "\n";
  for (const auto& g : index.groups()) {
    std::vector<std::uint32_t> support;
    for (const auto& [i, w] : g.vector.entries()) {
      (void)w;
      support.push_back(i);
    }
    out += detail::json{{"key", g.key},
                        {"frequency", g.frequency},
                        {"root_type", g.root_type},
                        {"scs", detail::scs_to_json(g.scs)},
                        {"vector", support},
                        {"source", {{"file", g.source.file}, {"method", g.source.method}}}}
               .dump() +
           "\n";
  }
  return out;
}

std::string names_to_jsonl(const NameModel& names) {
  std::string out = detail::json{{"format", "idiom-forge-names"},
                                 {"version", kIndexFormatVersion},
                                 {"records", names.by_creator.size() + names.by_field.size()}}
                        .dump() +
                    "\n";
  auto emit = [&](const char* kind, const auto& table) {
    for (const auto& [api, list] : table) {
      detail::json names_json = detail::json::array();
      for (const auto& nc : list) names_json.push_back({nc.name, nc.count});
      out += detail::json{{"kind", kind}, {"api", detail::api_to_json(api)}, {"names", names_json}}
                 .dump() +
             "\n";
    }
  };
  emit("creator", names.by_creator);
  emit("field", names.by_field);
  return out;
}

ScsIndex index_from_jsonl(std::string_view text) {
  auto lines = read_records(text, "idiom-forge-scs-index");
  const auto dims = lines.front().value("dims", std::size_t{0});
  std::vector<ScsGroup> groups;
  try {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto& r = lines[i];
      ScsGroup g;
      g.key = r.at("key").get<std::string>();
      g.frequency = r.at("frequency").get<std::uint64_t>();
      g.root_type = r.at("root_type").get<std::string>();
      g.scs = detail::scs_from_json(r.at("scs"));
      std::vector<std::pair<std::uint32_t, double>> entries;
      for (auto idx : r.at("vector").get<std::vector<std::uint32_t>>()) entries.emplace_back(idx, 1.0);
      g.vector = SparseVector(dims, std::move(entries));
      g.source = {r.at("source").at("file").get<std::string>(),
                  r.at("source").at("method").get<std::string>()};
      if (canonical_form(g.scs) != g.key) {
        throw IndexFileError("idiom-forge-scs-index: corrupt file (key does not match SCS)");
      }
      groups.push_back(std::move(g));
    }
    return ScsIndex(dims, std::move(groups));
  } catch (const IndexFileError&) {
    throw;
  } catch (const std::exception& e) {
    throw IndexFileError(std::string("idiom-forge-scs-index: corrupt file: ") + e.what());
  }
}

NameModel names_from_jsonl(std::string_view text) {
  auto lines = read_records(text, "idiom-forge-names");
  NameModel m;
  try {
    for (std::size_t i = 1; i < lines.size(); ++i) {
      const auto& r = lines[i];
      const auto kind = r.at("kind").get<std::string>();
      std::vector<NameCount> list;
      for (const auto& nc : r.at("names")) {
        list.push_back({nc.at(0).get<std::string>(), nc.at(1).get<std::uint64_t>()});
      }
      auto& table = kind == "field" ? m.by_field : m.by_creator;
      if (kind != "field" && kind != "creator") {
        throw IndexFileError("idiom-forge-names: corrupt file (unknown kind)");
      }
      table[detail::api_from_json(r.at("api"))] = std::move(list);
    }
  } catch (const IndexFileError&) {
    throw;
  } catch (const std::exception& e) {
    throw IndexFileError(std::string("idiom-forge-names: corrupt file: ") + e.what());
  }
  return m;
}

void save_index(const std::filesystem::path& dir, const ScsIndex& index, const NameModel& names) {
  std::filesystem::create_directories(dir);
  write_file(dir / kIndexFileName, index_to_jsonl(index));
  write_file(dir / kNamesFileName, names_to_jsonl(names));
}

ScsIndex load_index(const std::filesystem::path& dir) {
  const auto path = dir / kIndexFileName;
  if (!std::filesystem::exists(path)) {
    throw IndexFileError("index file not found: " + path.string() +
                         " (run `idiom-forge extract` first)");
  }
  return index_from_jsonl(read_file(path));
}

NameModel load_names(const std::filesystem::path& dir) {
  const auto path = dir / kNamesFileName;
  if (!std::filesystem::exists(path)) {
    throw IndexFileError("names file not found: " + path.string() +
                         " (run `idiom-forge extract` first)");
  }
  return names_from_jsonl(read_file(path));
}

}  // namespace idiomforge
