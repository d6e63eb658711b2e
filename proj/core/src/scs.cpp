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

#include "idiomforge/scs.hpp"

#include <algorithm>
#include <cmath>

namespace idiomforge {
namespace {

void collect_apis(const Scs& s, std::vector<ApiRef>& out) {
  if (s.names_api()) {
    out.push_back(s.api());
    return;
  }
  for (const auto& c : s.children()) collect_apis(c, out);
}

int count_creations(const Scs& s) {
  if (s.kind() == Scs::Kind::kCreation) return 1;
  int n = 0;
  for (const auto& c : s.children()) n += count_creations(c);
  return n;
}

// Appends `s` to a flat sequence, splicing nested sequences and dropping
// Empty.
void push_flat(std::vector<Scs>& out, Scs s) {
  if (s.kind() == Scs::Kind::kSeq) {
    for (const auto& c : s.children()) push_flat(out, c);
  } else if (!s.is_empty()) {
    out.push_back(std::move(s));
  }
}

Scs make_seq(std::vector<Scs> flat) {
  if (flat.empty()) return Scs::empty();
  if (flat.size() == 1) return std::move(flat.front());
  return Scs::seq(std::move(flat));
}

// Splits a simplified condition into the prefix to hoist and the single
// remaining action (Empty when no trailing action exists).
std::pair<std::vector<Scs>, Scs> split_condition(const Scs& cond) {
  std::vector<Scs> elems;
  push_flat(elems, cond);
  if (!elems.empty() && elems.back().names_api()) {
    Scs last = std::move(elems.back());
    elems.pop_back();
    return {std::move(elems), std::move(last)};
  }
  return {std::move(elems), Scs::empty()};
}

Scs simplify_node(const Scs& s) {
  switch (s.kind()) {
    case Scs::Kind::kEmpty:
    case Scs::Kind::kCreation:
    case Scs::Kind::kAction:
    case Scs::Kind::kUnknown:
      return s;
    case Scs::Kind::kSeq: {
      std::vector<Scs> flat;
      for (const auto& c : s.children()) push_flat(flat, simplify_node(c));
      return make_seq(std::move(flat));
    }
    case Scs::Kind::kIf: {
      auto [prefix, cond] = split_condition(simplify_node(s.cond()));
      Scs a = simplify_node(s.then_branch());
      Scs b = simplify_node(s.else_branch());
      std::vector<Scs> out = std::move(prefix);
      if (cond.is_empty()) {
        // if (empty) {A} else {B}: both branches survive in order.
        push_flat(out, std::move(a));
        push_flat(out, std::move(b));
      } else if (a.is_empty() && b.is_empty()) {
        out.push_back(std::move(cond));
      } else {
        out.push_back(Scs::if_else(std::move(cond), std::move(a), std::move(b)));
      }
      return make_seq(std::move(out));
    }
    case Scs::Kind::kWhile: {
      auto [prefix, cond] = split_condition(simplify_node(s.cond()));
      Scs body = simplify_node(s.body());
      std::vector<Scs> out = std::move(prefix);
      if (cond.is_empty()) {
        push_flat(out, std::move(body));
      } else if (body.is_empty()) {
        out.push_back(std::move(cond));
      } else {
        out.push_back(Scs::while_loop(std::move(cond), std::move(body)));
      }
      return make_seq(std::move(out));
    }
  }
  return s;
}

void append_canonical(const Scs& s, std::string& out) {
  switch (s.kind()) {
    case Scs::Kind::kEmpty:
      return;
    case Scs::Kind::kCreation:
    case Scs::Kind::kAction:
      out += s.api().to_string();
      return;
    case Scs::Kind::kUnknown:
      out += '?';
      return;
    case Scs::Kind::kSeq:
      for (std::size_t i = 0; i < s.children().size(); ++i) {
        if (i) out += ';';
        append_canonical(s.children()[i], out);
      }
      return;
    case Scs::Kind::kIf:
      out += "if(";
      append_canonical(s.cond(), out);
      out += "){";
      append_canonical(s.then_branch(), out);
      out += "}else{";
      append_canonical(s.else_branch(), out);
      out += '}';
      return;
    case Scs::Kind::kWhile:
      out += "while(";
      append_canonical(s.cond(), out);
      out += "){";
      append_canonical(s.body(), out);
      out += '}';
      return;
  }
}

}  // namespace

Scs Scs::creation(ApiRef api) {
  Scs s;
  s.kind_ = Kind::kCreation;
  s.api_ = std::move(api);
  return s;
}

Scs Scs::action(ApiRef api) {
  Scs s;
  s.kind_ = Kind::kAction;
  s.api_ = std::move(api);
  return s;
}

Scs Scs::unknown() {
  Scs s;
  s.kind_ = Kind::kUnknown;
  return s;
}

Scs Scs::seq(std::vector<Scs> elements) {
  Scs s;
  s.kind_ = Kind::kSeq;
  s.children_ = std::move(elements);
  return s;
}

Scs Scs::if_else(Scs cond, Scs then_branch, Scs else_branch) {
  Scs s;
  s.kind_ = Kind::kIf;
  s.children_.reserve(3);
  s.children_.push_back(std::move(cond));
  s.children_.push_back(std::move(then_branch));
  s.children_.push_back(std::move(else_branch));
  return s;
}

Scs Scs::while_loop(Scs cond, Scs body) {
  Scs s;
  s.kind_ = Kind::kWhile;
  s.children_.reserve(2);
  s.children_.push_back(std::move(cond));
  s.children_.push_back(std::move(body));
  return s;
}

const Scs* Scs::first_leaf() const {
  if (is_leaf()) return this;
  for (const auto& c : children_) {
    if (const auto* leaf = c.first_leaf()) return leaf;
  }
  return nullptr;
}

bool Scs::is_rooted() const {
  const auto* head = first_leaf();
  return head && head->kind() == Kind::kCreation && count_creations(*this) == 1;
}

std::vector<ApiRef> Scs::apis() const {
  std::vector<ApiRef> out;
  collect_apis(*this, out);
  return out;
}

Scs simplify(const Scs& s) {
  // One bottom-up pass reaches the fixpoint: every rewrite only produces
  // nodes whose children are already simplified.
  return simplify_node(s);
}

bool is_simplified(const Scs& s) {
  switch (s.kind()) {
    case Scs::Kind::kEmpty:
    case Scs::Kind::kCreation:
    case Scs::Kind::kAction:
    case Scs::Kind::kUnknown:
      return true;
    case Scs::Kind::kSeq:
      if (s.children().size() < 2) return false;
      for (const auto& c : s.children()) {
        if (c.is_empty() || c.kind() == Scs::Kind::kSeq || !is_simplified(c)) return false;
      }
      return true;
    case Scs::Kind::kIf:
      return s.cond().names_api() && !(s.then_branch().is_empty() && s.else_branch().is_empty()) &&
             is_simplified(s.then_branch()) && is_simplified(s.else_branch());
    case Scs::Kind::kWhile:
      return s.cond().names_api() && !s.body().is_empty() && is_simplified(s.body());
  }
  return false;
}

std::string canonical_form(const Scs& s) {
  std::string out;
  append_canonical(s, out);
  return out;
}

SparseVector::SparseVector(std::size_t dims,
                           std::vector<std::pair<std::uint32_t, double>> entries)
    : dims_(dims) {
  std::erase_if(entries, [](const auto& e) { return e.second == 0.0; });
  std::sort(entries.begin(), entries.end());
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (entries[i].first >= dims) throw Error("sparse vector index out of range");
    if (i && entries[i].first == entries[i - 1].first) {
      throw Error("duplicate sparse vector index");
    }
  }
  entries_ = std::move(entries);
}

double SparseVector::get(std::uint32_t index) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), index,
                             [](const auto& e, std::uint32_t i) { return e.first < i; });
  return it != entries_.end() && it->first == index ? it->second : 0.0;
}

double SparseVector::norm() const {
  double sum = 0.0;
  for (const auto& [i, w] : entries_) sum += w * w;
  return std::sqrt(sum);
}

SparseVector to_vector(const Scs& s, const Registry& reg) {
  std::vector<std::uint32_t> ids;
  for (const auto& api : s.apis()) {
    if (auto id = reg.id_of(api)) ids.push_back(id->value);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<std::pair<std::uint32_t, double>> entries;
  entries.reserve(ids.size());
  for (auto i : ids) entries.emplace_back(i, 1.0);
  return SparseVector(reg.dims(), std::move(entries));
}

}  // namespace idiomforge
