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

#ifndef IDIOMFORGE_SYNTH_HPP_
#define IDIOMFORGE_SYNTH_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "idiomforge/align.hpp"
#include "idiomforge/extract.hpp"
#include "idiomforge/minilang.hpp"
#include "idiomforge/rank.hpp"
#include "idiomforge/scs.hpp"

namespace idiomforge {

class SynthError : public Error {
 public:
  using Error::Error;
};

enum class NameSource { kMined, kFormal, kFallback };

struct NameCounts {
  std::size_t mined = 0;
  std::size_t formal = 0;
  std::size_t fallback = 0;
  NameCounts& operator+=(const NameCounts& o) {
    mined += o.mined;
    formal += o.formal;
    fallback += o.fallback;
    return *this;
  }
  friend bool operator==(const NameCounts&, const NameCounts&) = default;
};

// The forbidden set F plus the mined name lists.
struct NamingContext {
  std::set<std::string, std::less<>> forbidden;
  const NameModel* names = nullptr;
  int fallback_counter = 1;
  NameCounts counts;

  // F starts as the reserved words plus every registry type name, so no
  // variable can shadow a type used as a static receiver.
  static NamingContext fresh(const Registry& reg, const NameModel* names = nullptr);
};

// First candidate not in F, else the first free var1, var2, ...  The result
// joins F.  `source` says where the candidates came from, for the counts.
std::string pick_name(std::span<const std::string> candidates, NamingContext& ctx,
                      NameSource source = NameSource::kMined);

struct Scaffold {
  std::vector<minilang::Stmt> decls;  // one `var a = default;` per argument
  std::vector<minilang::Expr> args;   // names to splice into the call
};

// Declarations for every argument of `api`, named after the formal
// parameters and initialised with the default literal of their type.
Scaffold synth_arguments(const ApiRef& api, NamingContext& ctx, const Registry& reg);

struct Condition {
  std::vector<minilang::Stmt> prelude;  // argument scaffolding, hoisted
  minilang::Expr expr;
};

// `receiver.member(args) == default(U)`.  With `idiomatic` a bool-valued
// member is used bare.  Throws SynthError for void methods and setters.
Condition synth_condition(const ApiRef& action, const std::string& receiver, NamingContext& ctx,
                          const Registry& reg, bool idiomatic = false);

struct SynthOptions {
  std::size_t m = 10;
  int depth = 3;
  std::size_t top_k = kDefaultTopK;
  bool idiomatic_bool = false;
};

// What code_gen needs besides the naming context.
struct SynthEnv {
  const Registry& reg;
  const ScsIndex& index;
  const SparseVector& qv;
  int depth = 3;
  bool idiomatic_bool = false;
};

// Code generation over a simplified, rooted SCS bound to variable `v`.
std::vector<minilang::Stmt> code_gen(const Scs& ch, const std::string& v, NamingContext& ctx,
                                     const SynthEnv& env);

// Builds the receiver of an instance `creation` from the best tracer group
// and splices `var v = u.m(...)` and `inner` right after the tracer call.
// Falls back to `default(U)` as the receiver once `depth` reaches 0 or no
// group qualifies.
std::vector<minilang::Stmt> construct_object(const ApiRef& creation, const std::string& v,
                                             std::vector<minilang::Stmt> inner,
                                             NamingContext& ctx, const SynthEnv& env, int depth);

struct Snippet {
  std::vector<minilang::Stmt> statements;
  std::string text;
  Scs root_scs;
  std::string canonical;
  std::string root_type;
  double score = 0.0;
  std::uint64_t frequency = 0;
  std::map<std::string, std::string> bound_names;  // role -> identifier
  NameCounts names;
};

struct SynthResult {
  std::vector<Snippet> snippets;
  std::vector<std::string> diagnostics;
};

// Synthesizes one snippet from an index group, with a fresh naming context.
Snippet synthesize_group(const ScsGroup& group, double score, const NameModel& names,
                         const SynthEnv& env);

// tokenize -> posterior -> query vector -> retrieve -> code_gen.  Groups
// that are not rooted, score 0, or cannot be synthesized are skipped and
// noted in the diagnostics.
SynthResult synthesize(std::string_view query, const QueryModel& model, const ScsIndex& index,
                       const NameModel& names, const Registry& reg,
                       const SynthOptions& options = {});

}  // namespace idiomforge

#endif  // IDIOMFORGE_SYNTH_HPP_
