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

#include "idiomforge/synth.hpp"

#include <functional>
#include <memory>
#include <utility>

namespace idiomforge {

using minilang::Expr;
using minilang::Stmt;

NamingContext NamingContext::fresh(const Registry& reg, const NameModel* names) {
  NamingContext ctx;
  for (const auto& w : minilang::reserved_words()) ctx.forbidden.insert(w);
  for (const auto& t : reg.types()) ctx.forbidden.insert(t.name);
  ctx.names = names;
  return ctx;
}

std::string pick_name(std::span<const std::string> candidates, NamingContext& ctx,
                      NameSource source) {
  for (const auto& c : candidates) {
    if (c.empty() || ctx.forbidden.count(c)) continue;
    ctx.forbidden.insert(c);
    (source == NameSource::kFormal ? ctx.counts.formal : ctx.counts.mined)++;
    return c;
  }
  // var1, var2, ... only ever gain members of F, so the scan can resume
  // where the last one stopped.
  for (;; ++ctx.fallback_counter) {
    std::string name = "var" + std::to_string(ctx.fallback_counter);
    if (!ctx.forbidden.count(name)) {
      ctx.forbidden.insert(name);
      ++ctx.fallback_counter;
      ++ctx.counts.fallback;
      return name;
    }
  }
}

Scaffold synth_arguments(const ApiRef& api, NamingContext& ctx, const Registry& reg) {
  Scaffold out;
  for (const auto& p : reg.params_of(api)) {
    std::vector<std::string> formal;
    if (!p.name.empty()) formal.push_back(p.name);
    std::string name = pick_name(formal, ctx, NameSource::kFormal);
    out.decls.push_back(Stmt::var_decl(name, Expr::from_literal(reg.default_literal(p.type))));
    out.args.push_back(Expr::name(std::move(name)));
  }
  return out;
}

namespace {

Expr receiver_expr(const ApiRef& api, const std::string& receiver) {
  return Expr::name(api.is_static ? api.declaring_type : receiver);
}

Expr access(const ApiRef& api, Expr recv, std::vector<Expr> args) {
  if (api.kind == MemberKind::kFieldGet || api.kind == MemberKind::kFieldSet) {
    return Expr::member(std::move(recv), api.member);
  }
  return Expr::call(std::move(recv), api.member, std::move(args));
}

void append(std::vector<Stmt>& out, std::vector<Stmt> more) {
  for (auto& s : more) out.push_back(std::move(s));
}

std::vector<std::string> mined_candidates(const NamingContext& ctx, const ApiRef& api) {
  return ctx.names ? ctx.names->candidates(api) : std::vector<std::string>{};
}

}  // namespace

Condition synth_condition(const ApiRef& action, const std::string& receiver, NamingContext& ctx,
                          const Registry& reg, bool idiomatic) {
  if (action.kind == MemberKind::kFieldSet || action.kind == MemberKind::kConstructor) {
    throw SynthError("cannot form a condition from " + action.to_string());
  }
  if (action.return_type == "void") {
    throw SynthError("cannot form a condition from void " + action.to_string());
  }
  Condition c;
  Scaffold sc = synth_arguments(action, ctx, reg);
  c.prelude = std::move(sc.decls);
  Expr value = access(action, receiver_expr(action, receiver), std::move(sc.args));
  if (idiomatic && action.return_type == "bool") {
    c.expr = std::move(value);
  } else {
    c.expr = Expr::eq(std::move(value), Expr::from_literal(reg.default_literal(action.return_type)));
  }
  return c;
}

// ---------------------------------------------------------------------------

namespace {

using InnerFn = std::function<std::vector<Stmt>()>;

// Where construct_object wants the created variable spliced in.
struct TracerHook {
  ApiRef tracer;
  std::string v;
  InnerFn inner;
  bool placed = false;
};

class Generator {
 public:
  Generator(NamingContext& ctx, const SynthEnv& env) : ctx_(ctx), env_(env) {}

  std::map<std::string, std::string> receivers;

  // A rooted SCS: creation first, then the usage.
  std::vector<Stmt> rooted(const Scs& ch, const std::string& v, int depth, TracerHook* hook) {
    const Scs* head = &ch;
    std::span<const Scs> rest;
    if (ch.kind() == Scs::Kind::kSeq && !ch.children().empty()) {
      head = &ch.children().front();
      rest = std::span<const Scs>(ch.children()).subspan(1);
    }
    if (head->kind() != Scs::Kind::kCreation) {
      throw SynthError("not a rooted call sequence: " + canonical_form(ch));
    }
    InnerFn inner = [this, rest, v, hook] {
      std::vector<Stmt> out;
      for (const auto& e : rest) gen(e, v, out, hook);
      return out;
    };
    return create(head->api(), v, std::move(inner), depth);
  }

  std::vector<Stmt> create(const ApiRef& api, const std::string& v, const InnerFn& inner,
                           int depth) {
    std::vector<Stmt> out;
    if (api.kind == MemberKind::kFieldSet || api.return_type == "void") {
      throw SynthError("creation " + api.to_string() + " yields no value");
    }
    if (api.kind == MemberKind::kConstructor) {
      Scaffold sc = synth_arguments(api, ctx_, env_.reg);
      append(out, std::move(sc.decls));
      out.push_back(Stmt::var_decl(v, Expr::make_new(api.declaring_type, std::move(sc.args))));
      append(out, inner());
      return out;
    }
    if (api.is_static) {
      Scaffold sc = synth_arguments(api, ctx_, env_.reg);
      append(out, std::move(sc.decls));
      out.push_back(Stmt::var_decl(v, access(api, Expr::name(api.declaring_type), std::move(sc.args))));
      append(out, inner());
      return out;
    }
    return construct(api, v, inner, depth);
  }

  std::vector<Stmt> construct(const ApiRef& creation, const std::string& v, const InnerFn& inner,
                              int depth) {
    const std::string& u_type = creation.declaring_type;
    auto tracer = env_.reg.id_of(creation);
    if (depth > 0 && tracer) {
      const auto& groups = env_.index.groups();
      for (const auto& hit : retrieve(env_.qv, env_.index, env_.index.size(), tracer)) {
        const auto& g = groups[hit.group];
        if (g.root_type != u_type || !g.scs.is_rooted()) continue;
        const ApiRef& head = g.scs.first_leaf()->api();
        if (head == creation) continue;
        NamingContext saved = ctx_;
        auto saved_receivers = receivers;
        std::string u = pick_name(mined_candidates(ctx_, head), ctx_);
        TracerHook hook{creation, v, inner};
        try {
          auto out = rooted(g.scs, u, depth - 1, &hook);
          if (hook.placed) {
            receivers.emplace(u_type, u);
            return out;
          }
        } catch (const SynthError&) {
        }
        ctx_ = std::move(saved);
        receivers = std::move(saved_receivers);
      }
    }
    // Depth exhausted or no usable group: default(U) as the receiver.
    std::vector<Stmt> out;
    Scaffold sc = synth_arguments(creation, ctx_, env_.reg);
    append(out, std::move(sc.decls));
    out.push_back(Stmt::var_decl(v, access(creation, Expr::default_of(u_type), std::move(sc.args))));
    append(out, inner());
    return out;
  }

  void gen(const Scs& ch, const std::string& v, std::vector<Stmt>& out, TracerHook* hook) {
    switch (ch.kind()) {
      case Scs::Kind::kEmpty:
        return;
      case Scs::Kind::kUnknown:
        out.push_back(Stmt::comment(v + " used elsewhere"));
        return;
      case Scs::Kind::kSeq:
        for (const auto& e : ch.children()) gen(e, v, out, hook);
        return;
      case Scs::Kind::kCreation:
        throw SynthError("creation " + ch.api().to_string() + " after the head of a sequence");
      case Scs::Kind::kAction:
        action(ch.api(), v, out, hook);
        return;
      case Scs::Kind::kIf: {
        Condition c = condition(ch.cond(), v);
        append(out, std::move(c.prelude));
        std::vector<Stmt> then_body;
        std::vector<Stmt> else_body;
        gen(ch.then_branch(), v, then_body, hook);
        gen(ch.else_branch(), v, else_body, hook);
        out.push_back(Stmt::if_else(std::move(c.expr), std::move(then_body), std::move(else_body)));
        return;
      }
      case Scs::Kind::kWhile: {
        Condition c = condition(ch.cond(), v);
        append(out, std::move(c.prelude));
        std::vector<Stmt> body;
        gen(ch.body(), v, body, hook);
        out.push_back(Stmt::while_loop(std::move(c.expr), std::move(body)));
        return;
      }
    }
  }

 private:
  Condition condition(const Scs& cond, const std::string& v) {
    if (cond.kind() != Scs::Kind::kAction) {
      throw SynthError("condition must hold exactly one action, got " + canonical_form(cond));
    }
    return synth_condition(cond.api(), v, ctx_, env_.reg, env_.idiomatic_bool);
  }

  void action(const ApiRef& api, const std::string& v, std::vector<Stmt>& out, TracerHook* hook) {
    if (hook && !hook->placed && api == hook->tracer) {
      Scaffold sc = synth_arguments(api, ctx_, env_.reg);
      append(out, std::move(sc.decls));
      out.push_back(Stmt::var_decl(hook->v, access(api, receiver_expr(api, v), std::move(sc.args))));
      hook->placed = true;
      append(out, hook->inner());
      return;
    }
    switch (api.kind) {
      case MemberKind::kMethod: {
        Scaffold sc = synth_arguments(api, ctx_, env_.reg);
        append(out, std::move(sc.decls));
        out.push_back(Stmt::expr(access(api, receiver_expr(api, v), std::move(sc.args))));
        return;
      }
      case MemberKind::kFieldGet: {
        std::string name = pick_name(mined_candidates(ctx_, api), ctx_);
        out.push_back(Stmt::var_decl(std::move(name), access(api, receiver_expr(api, v), {})));
        return;
      }
      case MemberKind::kFieldSet: {
        auto type = env_.reg.field_type(api);
        if (!type) throw SynthError("unknown field " + api.to_string());
        out.push_back(Stmt::assign(access(api, receiver_expr(api, v), {}),
                                   Expr::from_literal(env_.reg.default_literal(*type))));
        return;
      }
      case MemberKind::kConstructor:
        throw SynthError("constructor " + api.to_string() + " used as an action");
    }
  }

  NamingContext& ctx_;
  const SynthEnv& env_;
};

}  // namespace

std::vector<Stmt> code_gen(const Scs& ch, const std::string& v, NamingContext& ctx,
                           const SynthEnv& env) {
  Generator g(ctx, env);
  const Scs* first = ch.first_leaf();
  if (first && first->kind() == Scs::Kind::kCreation) return g.rooted(ch, v, env.depth, nullptr);
  std::vector<Stmt> out;
  g.gen(ch, v, out, nullptr);
  return out;
}

std::vector<Stmt> construct_object(const ApiRef& creation, const std::string& v,
                                   std::vector<Stmt> inner, NamingContext& ctx,
                                   const SynthEnv& env, int depth) {
  Generator g(ctx, env);
  auto shared = std::make_shared<std::vector<Stmt>>(std::move(inner));
  return g.construct(creation, v, [shared] { return *shared; }, depth);
}

Snippet synthesize_group(const ScsGroup& group, double score, const NameModel& names,
                         const SynthEnv& env) {
  if (!group.scs.is_rooted()) throw SynthError("group is not rooted: " + group.key);
  NamingContext ctx = NamingContext::fresh(env.reg, &names);
  const ApiRef& head = group.scs.first_leaf()->api();
  std::string v = pick_name(names.candidates(head), ctx);

  Generator g(ctx, env);
  Snippet s;
  s.statements = g.rooted(group.scs, v, env.depth, nullptr);
  s.text = minilang::render_statements(s.statements);
  s.root_scs = group.scs;
  s.canonical = group.key;
  s.root_type = group.root_type;
  s.score = score;
  s.frequency = group.frequency;
  s.bound_names["root"] = v;
  for (const auto& [type, name] : g.receivers) s.bound_names["receiver:" + type] = name;
  s.names = ctx.counts;
  return s;
}

SynthResult synthesize(std::string_view query, const QueryModel& model, const ScsIndex& index,
                       const NameModel& names, const Registry& reg, const SynthOptions& options) {
  SynthResult result;
  const auto tokens = tokenize_query(query);
  if (tokens.empty()) {
    result.diagnostics.push_back("query has no searchable words");
    return result;
  }
  const auto posterior = api_posterior(tokens, model.table, model.stats);
  if (posterior.empty()) {
    result.diagnostics.push_back("no query word is known to the model");
    return result;
  }
  if (index.dims() != reg.dims()) {
    throw Error("index was built against a different registry (" + std::to_string(index.dims()) +
                " vs " + std::to_string(reg.dims()) + " APIs)");
  }
  const SparseVector qv = query_vector(posterior, reg.dims(), options.top_k);
  const SynthEnv env{reg, index, qv, options.depth, options.idiomatic_bool};

  std::size_t unrooted = 0;
  for (const auto& hit : retrieve(qv, index, index.size())) {
    if (result.snippets.size() >= options.m || hit.score <= 0.0) break;
    const auto& group = index.groups()[hit.group];
    if (!group.scs.is_rooted()) {
      ++unrooted;
      continue;
    }
    try {
      result.snippets.push_back(synthesize_group(group, hit.score, names, env));
    } catch (const SynthError& e) {
      result.diagnostics.push_back("skipped " + group.key + ": " + e.what());
    }
  }
  if (unrooted > 0) {
    result.diagnostics.push_back("skipped " + std::to_string(unrooted) +
                                 " matching group(s) without a single leading creation");
  }
  if (result.snippets.empty()) result.diagnostics.push_back("no synthesizable call sequence matched");
  return result;
}

}  // namespace idiomforge
