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

#ifndef IDIOMFORGE_TESTS_TEST_SUPPORT_HPP_
#define IDIOMFORGE_TESTS_TEST_SUPPORT_HPP_

// Shared helpers for the unit and acceptance suites: fixture paths, small
// in-memory registries, random tree generators and brute-force oracles.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "idiomforge/align.hpp"
#include "idiomforge/extract.hpp"
#include "idiomforge/minilang.hpp"
#include "idiomforge/rank.hpp"
#include "idiomforge/registry.hpp"
#include "idiomforge/scs.hpp"
#include "idiomforge/synth.hpp"

namespace idiomforge::testing {

inline std::filesystem::path fixture_dir() { return IDIOMFORGE_FIXTURES; }

inline const Registry& fixture_registry() {
  static const Registry reg = Registry::load(fixture_dir() / "registry.json");
  return reg;
}

inline ApiRef api(const Registry& reg, const std::string& text) {
  auto id = reg.id_of_text(text);
  if (!id) throw Error("fixture API not found: " + text);
  return reg.api(*id);
}

inline ApiId id(const Registry& reg, const std::string& text) {
  auto i = reg.id_of_text(text);
  if (!i) throw Error("fixture API not found: " + text);
  return *i;
}

// Extracts every sequence from a single-method program given its body.
inline std::vector<ExtractedSequence> extract_body(const std::string& params,
                                                   const std::string& body,
                                                   const Registry& reg) {
  auto program = std::make_shared<const minilang::Program>(
      minilang::parse_program("class C { void M(" + params + ") {\n" + body + "\n} }"));
  auto typed = minilang::resolve_types(program, reg);
  return extract_method(typed.methods.at(0), reg);
}

inline const ExtractedSequence* find_var(const std::vector<ExtractedSequence>& seqs,
                                         const std::string& name) {
  for (const auto& s : seqs) {
    if (s.variable == name) return &s;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Random SCS trees.

// Arbitrary, unsimplified trees of actions over `alphabet`, depth <= max_depth.
class TreeGen {
 public:
  TreeGen(std::vector<ApiRef> alphabet, std::uint32_t seed)
      : alphabet_(std::move(alphabet)), rng_(seed) {}

  Scs tree(int max_depth) {
    const int pick = max_depth <= 0 ? uniform(0, 2) : uniform(0, 6);
    switch (pick) {
      case 0: return Scs::action(alphabet_[uniform(0, static_cast<int>(alphabet_.size()) - 1)]);
      case 1: return uniform(0, 3) == 0 ? Scs::unknown() : Scs::action(random_api());
      case 2: return uniform(0, 4) == 0 ? Scs::empty() : Scs::action(random_api());
      case 3:
      case 4: {
        std::vector<Scs> items;
        const int n = uniform(0, 4);
        for (int i = 0; i < n; ++i) items.push_back(tree(max_depth - 1));
        return Scs::seq(std::move(items));
      }
      case 5:
        return Scs::if_else(tree(max_depth - 1), tree(max_depth - 1), tree(max_depth - 1));
      default:
        return Scs::while_loop(tree(max_depth - 1), tree(max_depth - 1));
    }
  }

  // A tree shaped like extractor output: a Creation or Unknown head, then a
  // usage tree of actions.
  Scs well_formed(int max_depth) {
    Scs head = uniform(0, 4) == 0 ? Scs::unknown() : Scs::creation(random_api());
    return Scs::seq({std::move(head), tree(max_depth)});
  }

  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  std::mt19937& rng() { return rng_; }

 private:
  const ApiRef& random_api() {
    return alphabet_[uniform(0, static_cast<int>(alphabet_.size()) - 1)];
  }

  std::vector<ApiRef> alphabet_;
  std::mt19937 rng_;
};

inline std::vector<ApiRef> sorted_apis(const Scs& s) {
  auto v = s.apis();
  std::sort(v.begin(), v.end());
  return v;
}

// Drops every Unknown, then simplifies.
inline Scs strip_unknowns(const Scs& s) {
  switch (s.kind()) {
    case Scs::Kind::kUnknown: return Scs::empty();
    case Scs::Kind::kSeq: {
      std::vector<Scs> items;
      for (const auto& c : s.children()) items.push_back(strip_unknowns(c));
      return simplify(Scs::seq(std::move(items)));
    }
    case Scs::Kind::kIf:
      return simplify(Scs::if_else(strip_unknowns(s.cond()), strip_unknowns(s.then_branch()),
                                   strip_unknowns(s.else_branch())));
    case Scs::Kind::kWhile:
      return simplify(Scs::while_loop(strip_unknowns(s.cond()), strip_unknowns(s.body())));
    default: return s;
  }
}

// Rooted SCSs with a constructor or static head and a usage of instance
// members of the created type: the domain of the synthesis round trip.
class RootedGen {
 public:
  RootedGen(const Registry& reg, std::uint32_t seed) : reg_(reg), rng_(seed) {
    for (const auto& a : reg.vocab()) {
      const bool creates = a.kind == MemberKind::kConstructor ||
                           (a.is_static && a.kind == MemberKind::kMethod &&
                            reg.has_type(a.return_type) && a.return_type != a.declaring_type);
      if (creates) heads_.push_back(a);
      if (a.is_static || a.kind == MemberKind::kConstructor) continue;
      members_[a.declaring_type].push_back(a);
      if (a.kind == MemberKind::kFieldGet || a.return_type != "void") {
        if (a.kind != MemberKind::kFieldSet) conds_[a.declaring_type].push_back(a);
      }
    }
    std::erase_if(heads_, [&](const ApiRef& h) {
      return members_[h.return_type].empty() || conds_[h.return_type].empty();
    });
  }

  Scs next(int max_depth) {
    const ApiRef& head = heads_[pick(heads_.size())];
    type_ = head.return_type;
    return simplify(Scs::seq({Scs::creation(head), usage(max_depth)}));
  }

 private:
  std::size_t pick(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  Scs usage(int depth) {
    std::vector<Scs> items;
    const std::size_t n = pick(4);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t kind = depth <= 0 ? pick(2) : pick(5);
      const auto& ms = members_.at(type_);
      const auto& cs = conds_.at(type_);
      switch (kind) {
        case 0: items.push_back(Scs::action(ms[pick(ms.size())])); break;
        case 1:
          items.push_back(pick(4) == 0 ? Scs::unknown() : Scs::action(ms[pick(ms.size())]));
          break;
        case 2:
        case 3:
          items.push_back(Scs::if_else(Scs::action(cs[pick(cs.size())]), usage(depth - 1),
                                       usage(depth - 1)));
          break;
        default:
          items.push_back(Scs::while_loop(Scs::action(cs[pick(cs.size())]), usage(depth - 1)));
      }
    }
    return Scs::seq(std::move(items));
  }

  const Registry& reg_;
  std::mt19937 rng_;
  std::vector<ApiRef> heads_;
  std::map<std::string, std::vector<ApiRef>> members_;
  std::map<std::string, std::vector<ApiRef>> conds_;
  std::string type_;
};

// Renders a rooted SCS, parses it back and re-extracts the root variable.
struct RoundTrip {
  std::string text;
  std::optional<Scs> reextracted;
};

inline RoundTrip round_trip(const Scs& scs, const Registry& reg) {
  const ScsIndex index(reg.dims(), {});
  const SparseVector qv(reg.dims());
  const SynthEnv env{reg, index, qv, 3, false};
  NamingContext ctx = NamingContext::fresh(reg);
  const std::string root = pick_name(std::vector<std::string>{"subject"}, ctx);
  RoundTrip rt;
  rt.text = minilang::render_statements(code_gen(scs, root, ctx, env));
  auto seqs = extract_body("", rt.text, reg);
  for (const auto& s : seqs) {
    if (s.variable == root) rt.reextracted = s.scs;
  }
  return rt;
}

// ---------------------------------------------------------------------------
// Oracles.

// IBM Model 1 EM over dense arrays, written independently of train_em.
struct DenseEm {
  std::vector<std::string> tokens;
  std::vector<std::string> apis;
  std::vector<std::vector<double>> p;  // p[q][t]

  static DenseEm run(const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>>& pairs,
                     int iterations) {
    DenseEm em;
    for (const auto& [q, t] : pairs) {
      for (const auto& x : q) {
        if (std::find(em.tokens.begin(), em.tokens.end(), x) == em.tokens.end()) em.tokens.push_back(x);
      }
      for (const auto& x : t) {
        if (std::find(em.apis.begin(), em.apis.end(), x) == em.apis.end()) em.apis.push_back(x);
      }
    }
    auto idx = [](const std::vector<std::string>& v, const std::string& x) {
      return static_cast<std::size_t>(std::find(v.begin(), v.end(), x) - v.begin());
    };
    const std::size_t nq = em.tokens.size();
    const std::size_t nt = em.apis.size();
    std::vector<std::vector<bool>> co(nq, std::vector<bool>(nt, false));
    for (const auto& [q, t] : pairs) {
      for (const auto& x : q) {
        for (const auto& y : t) co[idx(em.tokens, x)][idx(em.apis, y)] = true;
      }
    }
    em.p.assign(nq, std::vector<double>(nt, 0.0));
    for (std::size_t i = 0; i < nq; ++i) {
      const double n = static_cast<double>(std::count(co[i].begin(), co[i].end(), true));
      for (std::size_t j = 0; j < nt; ++j) em.p[i][j] = co[i][j] ? 1.0 / n : 0.0;
    }
    for (int it = 0; it < iterations; ++it) {
      std::vector<std::vector<double>> c(nq, std::vector<double>(nt, 0.0));
      for (const auto& [q, t] : pairs) {
        for (const auto& y : t) {
          const std::size_t j = idx(em.apis, y);
          double z = 0.0;
          for (const auto& x : q) z += em.p[idx(em.tokens, x)][j];
          for (const auto& x : q) c[idx(em.tokens, x)][j] += em.p[idx(em.tokens, x)][j] / z;
        }
      }
      for (std::size_t i = 0; i < nq; ++i) {
        double s = 0.0;
        for (double v : c[i]) s += v;
        for (std::size_t j = 0; j < nt; ++j) em.p[i][j] = c[i][j] / s;
      }
    }
    return em;
  }

  double prob(const std::string& api, const std::string& token) const {
    auto qi = std::find(tokens.begin(), tokens.end(), token) - tokens.begin();
    auto ti = std::find(apis.begin(), apis.end(), api) - apis.begin();
    return p.at(static_cast<std::size_t>(qi)).at(static_cast<std::size_t>(ti));
  }
};

// Scores every group with cosine() and sorts by the documented tie-break.
inline std::vector<Hit> brute_force_retrieve(const SparseVector& qv, const ScsIndex& index,
                                             std::size_t m) {
  std::vector<Hit> all;
  for (std::uint32_t g = 0; g < index.size(); ++g) {
    all.push_back({g, cosine(qv, index.groups()[g].vector)});
  }
  std::sort(all.begin(), all.end(), [&](const Hit& a, const Hit& b) {
    const auto& ga = index.groups()[a.group];
    const auto& gb = index.groups()[b.group];
    return std::make_tuple(-a.score, -static_cast<double>(ga.frequency), ga.key) <
           std::make_tuple(-b.score, -static_cast<double>(gb.frequency), gb.key);
  });
  if (all.size() > m) all.resize(m);
  return all;
}

// A registry of `types` reference types with `members` void methods each.
inline Registry synthetic_registry(std::size_t types, std::size_t members) {
  std::vector<TypeDecl> decls;
  for (std::size_t t = 0; t < types; ++t) {
    TypeDecl d;
    d.name = "T" + std::to_string(t);
    d.constructors.push_back({});
    for (std::size_t m = 0; m + 1 < members; ++m) {
      d.methods.push_back({"M" + std::to_string(m), {}, "void", false});
    }
    decls.push_back(std::move(d));
  }
  return Registry(std::move(decls));
}

// Random rooted groups: a constructor head plus up to `actions` distinct
// members of the same type.
inline ScsIndex random_index(const Registry& reg, std::size_t groups, std::size_t types,
                             std::size_t members, std::size_t actions, std::mt19937& rng) {
  std::vector<ScsGroup> out;
  std::set<std::string> seen;
  std::uniform_int_distribution<std::size_t> type_dist(0, types - 1);
  std::uniform_int_distribution<std::size_t> member_dist(0, members - 2);
  std::uniform_int_distribution<std::size_t> len_dist(0, actions);
  std::uniform_int_distribution<std::uint64_t> freq_dist(1, 5);
  while (out.size() < groups) {
    const std::size_t t = type_dist(rng);
    const std::uint32_t base = static_cast<std::uint32_t>(t * members);
    std::vector<Scs> items{Scs::creation(reg.api(ApiId{base}))};
    const std::size_t n = len_dist(rng);
    for (std::size_t i = 0; i < n; ++i) {
      items.push_back(Scs::action(reg.api(ApiId{base + 1 + static_cast<std::uint32_t>(member_dist(rng))})));
    }
    Scs scs = simplify(Scs::seq(std::move(items)));
    std::string key = canonical_form(scs);
    if (!seen.insert(key).second) continue;
    ScsGroup g;
    g.key = std::move(key);
    g.vector = to_vector(scs, reg);
    g.scs = std::move(scs);
    g.frequency = freq_dist(rng);
    g.root_type = "T" + std::to_string(t);
    out.push_back(std::move(g));
  }
  return ScsIndex(reg.dims(), std::move(out));
}

}  // namespace idiomforge::testing

#endif  // IDIOMFORGE_TESTS_TEST_SUPPORT_HPP_
