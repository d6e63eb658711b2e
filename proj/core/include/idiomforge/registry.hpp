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

#ifndef IDIOMFORGE_REGISTRY_HPP_
#define IDIOMFORGE_REGISTRY_HPP_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace idiomforge {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class RegistryError : public Error {
 public:
  using Error::Error;
};

// Position of an ApiRef in the registry vocabulary; doubles as the vector
// dimension for query and SCS vectors.
struct ApiId {
  std::uint32_t value = 0;
  friend auto operator<=>(const ApiId&, const ApiId&) = default;
};

enum class TypeKind { kValue, kReference };

enum class MemberKind { kMethod, kFieldGet, kFieldSet, kConstructor };

// A fully qualified framework member.  Constructors are static methods named
// "new" returning the declaring type.  Field accessors carry no argument
// types; a getter returns the field type, a setter returns void.
struct ApiRef {
  std::string declaring_type;
  std::string member;
  MemberKind kind = MemberKind::kMethod;
  std::vector<std::string> arg_types;
  std::string return_type = "void";
  bool is_static = false;

  bool is_field() const {
    return kind == MemberKind::kFieldGet || kind == MemberKind::kFieldSet;
  }
  bool is_callable() const {
    return kind == MemberKind::kMethod || kind == MemberKind::kConstructor;
  }

  // `T.m(a,b)`, `get(T.f)`, `set(T.f)` or `new T(a,b)`.  Unique per member.
  std::string to_string() const;

  friend bool operator==(const ApiRef&, const ApiRef&) = default;
  friend auto operator<=>(const ApiRef&, const ApiRef&) = default;
};

struct Param {
  std::string type;
  std::string name;  // may be empty when the registry omits formal names
  friend bool operator==(const Param&, const Param&) = default;
};

struct MethodDecl {
  std::string name;
  std::vector<Param> params;
  std::string returns = "void";
  bool is_static = false;
};

struct FieldDecl {
  std::string name;
  std::string type;
  bool is_static = false;
};

struct TypeDecl {
  std::string name;
  TypeKind kind = TypeKind::kReference;
  std::vector<std::vector<Param>> constructors;
  std::vector<MethodDecl> methods;
  std::vector<FieldDecl> fields;
};

// The framework API universe.  Immutable once built.
class Registry {
 public:
  Registry() = default;

  // Validates `types` and enumerates the vocabulary: types in order, then
  // constructors, methods, fields (get before set) in declaration order.
  explicit Registry(std::vector<TypeDecl> types);

  static Registry parse(std::string_view json_text);
  static Registry load(const std::filesystem::path& path);

  static bool is_builtin(std::string_view type);

  bool has_type(std::string_view name) const;
  bool is_known_type(std::string_view name) const;  // builtin or declared
  bool is_reference_type(std::string_view name) const;
  const TypeDecl* find_type(std::string_view name) const;
  const std::vector<TypeDecl>& types() const { return types_; }

  const std::vector<ApiRef>& vocab() const { return vocab_; }
  std::size_t dims() const { return vocab_.size(); }
  const ApiRef& api(ApiId id) const { return vocab_.at(id.value); }
  std::optional<ApiId> id_of(const ApiRef& ref) const;
  std::optional<ApiId> id_of_text(std::string_view canonical) const;

  // Exact lookup by (type, member, argument types).  Member "new" selects a
  // constructor.  Never fabricates a member.
  std::optional<ApiRef> resolve_member(std::string_view type,
                                       std::string_view member,
                                       std::span<const std::string> arg_types) const;

  // Overload resolution over partially known argument types.  A nullopt
  // argument matches anything; the pseudo-type "null" matches reference
  // types.  Returns nullopt when no overload or more than one matches.
  std::optional<ApiRef> resolve_call(
      std::string_view type, std::string_view member,
      std::span<const std::optional<std::string>> arg_types) const;

  std::optional<ApiRef> resolve_field(std::string_view type,
                                      std::string_view field,
                                      MemberKind access) const;

  // Every member of `type` named `member` (all overloads, and a field's
  // getter); used for prose mentions and answer keys.
  std::vector<ApiRef> members_named(std::string_view type,
                                    std::string_view member) const;

  // Declared parameters of a callable ApiRef, or empty for fields.
  std::span<const Param> params_of(const ApiRef& ref) const;

  // Type carried by a field accessor (the field type for get and set).
  std::optional<std::string> field_type(const ApiRef& ref) const;

  // Source text of the default value of `type`: null, 0, false or default(T).
  std::string default_literal(std::string_view type) const;

 private:
  std::vector<TypeDecl> types_;
  std::map<std::string, std::size_t, std::less<>> type_index_;
  std::vector<ApiRef> vocab_;
  std::vector<std::vector<Param>> vocab_params_;
  std::unordered_map<std::string, ApiId> by_text_;
};

}  // namespace idiomforge

#endif  // IDIOMFORGE_REGISTRY_HPP_
