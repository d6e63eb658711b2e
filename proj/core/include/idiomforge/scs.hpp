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

#ifndef IDIOMFORGE_SCS_HPP_
#define IDIOMFORGE_SCS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "idiomforge/registry.hpp"

namespace idiomforge {

// A structured call sequence: one object's lifetime as a tree of creation,
// actions, unknown uses, sequences, conditionals and loops.
class Scs {
 public:
  enum class Kind { kEmpty, kCreation, kAction, kUnknown, kSeq, kIf, kWhile };

  Scs() = default;

  static Scs empty() { return Scs(); }
  static Scs creation(ApiRef api);
  static Scs action(ApiRef api);
  static Scs unknown();
  static Scs seq(std::vector<Scs> elements);
  static Scs if_else(Scs cond, Scs then_branch, Scs else_branch);
  static Scs while_loop(Scs cond, Scs body);

  Kind kind() const { return kind_; }
  bool is_empty() const { return kind_ == Kind::kEmpty; }
  bool is_leaf() const {
    return kind_ == Kind::kCreation || kind_ == Kind::kAction || kind_ == Kind::kUnknown;
  }
  // Creation or Action.
  bool names_api() const { return kind_ == Kind::kCreation || kind_ == Kind::kAction; }

  const ApiRef& api() const { return api_; }
  const std::vector<Scs>& children() const { return children_; }

  // If: {cond, then, else}; While: {cond, body}.
  const Scs& cond() const { return children_.at(0); }
  const Scs& then_branch() const { return children_.at(1); }
  const Scs& else_branch() const { return children_.at(2); }
  const Scs& body() const { return children_.at(1); }

  // First leaf in program order, if any.
  const Scs* first_leaf() const;

  // Begins with a Creation and contains no other Creation.
  bool is_rooted() const;

  // Every ApiRef named by a Creation or Action, in program order.
  std::vector<ApiRef> apis() const;

  friend bool operator==(const Scs&, const Scs&) = default;

 private:
  Kind kind_ = Kind::kEmpty;
  ApiRef api_;
  std::vector<Scs> children_;
};

// Rewrites to the simplified form: sequences flattened and free of Empty,
// no singleton sequences, every condition reduced to exactly one action
// (leading condition actions hoisted in front of the construct), constructs
// whose condition is empty replaced by their branches, and constructs whose
// branches are all empty replaced by their condition.
Scs simplify(const Scs& s);

bool is_simplified(const Scs& s);

// `T.m(a,b)`, `get(T.f)`, `set(T.f)`, `new T(a,b)`, `?`, `;`-joined
// sequences, `if(c){a}else{b}`, `while(c){a}`; Empty is "".
std::string canonical_form(const Scs& s);

// A sparse vector over the registry vocabulary, entries sorted by index.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t dims) : dims_(dims) {}

  // Entries with zero weight are dropped; indices must be < dims and unique.
  SparseVector(std::size_t dims, std::vector<std::pair<std::uint32_t, double>> entries);

  std::size_t dims() const { return dims_; }
  const std::vector<std::pair<std::uint32_t, double>>& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool is_zero() const { return entries_.empty(); }
  double get(std::uint32_t index) const;
  double norm() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::size_t dims_ = 0;
  std::vector<std::pair<std::uint32_t, double>> entries_;
};

// Binary vector with weight 1 at every API named in `s`.
SparseVector to_vector(const Scs& s, const Registry& reg);

}  // namespace idiomforge

#endif  // IDIOMFORGE_SCS_HPP_
