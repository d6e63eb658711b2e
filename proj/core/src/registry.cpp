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

#include "idiomforge/registry.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace idiomforge {
namespace {

using nlohmann::json;

constexpr std::string_view kBuiltins[] = {"int", "bool", "string", "void"};

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

std::vector<std::string> types_of(const std::vector<Param>& params) {
  std::vector<std::string> out;
  out.reserve(params.size());
  for (const auto& p : params) out.push_back(p.type);
  return out;
}

// "string input" -> {string, input}; "string" -> {string, ""}.
Param parse_param(const std::string& spec, const std::string& where) {
  std::istringstream in(spec);
  Param p;
  std::string extra;
  in >> p.type >> p.name >> extra;
  if (p.type.empty() || !extra.empty()) {
    throw RegistryError(where + ": malformed argument \"" + spec +
                        "\" (expected \"Type\" or \"Type name\")");
  }
  return p;
}

std::vector<Param> parse_params(const json& args, const std::string& where) {
  if (!args.is_array()) throw RegistryError(where + ": argument list must be an array");
  std::vector<Param> out;
  for (const auto& a : args) {
    if (!a.is_string()) throw RegistryError(where + ": argument must be a string");
    out.push_back(parse_param(a.get<std::string>(), where));
  }
  return out;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    throw RegistryError(where + ": missing string field \"" + key + "\"");
  }
  return it->get<std::string>();
}

bool optional_bool(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) throw RegistryError(std::string("field \"") + key + "\" must be a boolean");
  return it->get<bool>();
}

// Matches a partially known argument type against a declared parameter type.
bool arg_matches(const Registry& reg, const std::optional<std::string>& actual,
                 const std::string& declared) {
  if (!actual) return true;
  if (*actual == "null") return reg.is_reference_type(declared);
  return *actual == declared;
}

}  // namespace

std::string ApiRef::to_string() const {
  switch (kind) {
    case MemberKind::kFieldGet:
      return "get(" + declaring_type + "." + member + ")";
    case MemberKind::kFieldSet:
      return "set(" + declaring_type + "." + member + ")";
    case MemberKind::kConstructor:
      return "new " + declaring_type + "(" + join(arg_types) + ")";
    case MemberKind::kMethod:
      break;
  }
  return declaring_type + "." + member + "(" + join(arg_types) + ")";
}

bool Registry::is_builtin(std::string_view type) {
  for (auto b : kBuiltins) {
    if (b == type) return true;
  }
  return false;
}

Registry::Registry(std::vector<TypeDecl> types) : types_(std::move(types)) {
  for (std::size_t i = 0; i < types_.size(); ++i) {
    const auto& name = types_[i].name;
    if (name.empty()) throw RegistryError("type with empty name");
    if (is_builtin(name)) throw RegistryError("type \"" + name + "\" redeclares a builtin");
    if (!type_index_.emplace(name, i).second) {
      throw RegistryError("duplicate type \"" + name + "\"");
    }
  }

  auto check_type = [&](const std::string& type, const std::string& where, bool allow_void) {
    if (type == "void" && !allow_void) {
      throw RegistryError(where + ": void is not a value type");
    }
    if (!is_known_type(type)) {
      throw RegistryError(where + ": unknown type \"" + type + "\"");
    }
  };

  auto add = [&](ApiRef ref, std::vector<Param> params) {
    ApiId id{static_cast<std::uint32_t>(vocab_.size())};
    if (!by_text_.emplace(ref.to_string(), id).second) {
      throw RegistryError("duplicate member " + ref.to_string());
    }
    vocab_.push_back(std::move(ref));
    vocab_params_.push_back(std::move(params));
  };

  for (const auto& t : types_) {
    for (const auto& ctor : t.constructors) {
      for (const auto& p : ctor) check_type(p.type, t.name + ".new", false);
      add(ApiRef{t.name, "new", MemberKind::kConstructor, types_of(ctor), t.name, true}, ctor);
    }
    std::set<std::string> field_names;
    for (const auto& m : t.methods) {
      const std::string where = t.name + "." + m.name;
      if (m.name.empty() || m.name == "new") throw RegistryError(where + ": invalid method name");
      for (const auto& p : m.params) check_type(p.type, where, false);
      check_type(m.returns, where, true);
      add(ApiRef{t.name, m.name, MemberKind::kMethod, types_of(m.params), m.returns, m.is_static},
          m.params);
    }
    for (const auto& f : t.fields) {
      const std::string where = t.name + "." + f.name;
      if (f.name.empty()) throw RegistryError(where + ": invalid field name");
      check_type(f.type, where, false);
      if (!field_names.insert(f.name).second) {
        throw RegistryError("duplicate member " + where);
      }
      add(ApiRef{t.name, f.name, MemberKind::kFieldGet, {}, f.type, f.is_static}, {});
      add(ApiRef{t.name, f.name, MemberKind::kFieldSet, {}, "void", f.is_static}, {});
    }
  }
}

Registry Registry::parse(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it to a line number.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < json_text.size(); ++i) {
      if (json_text[i] == '\n') ++line;
    }
    throw RegistryError("registry parse error at line " + std::to_string(line) + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("types") || !doc["types"].is_array()) {
    throw RegistryError("registry must be an object with a \"types\" array");
  }
  std::vector<TypeDecl> types;
  for (const auto& jt : doc["types"]) {
    if (!jt.is_object()) throw RegistryError("type entry must be an object");
    TypeDecl t;
    t.name = require_string(jt, "name", "type");
    const std::string kind = jt.value("kind", std::string("reference"));
    if (kind == "value") {
      t.kind = TypeKind::kValue;
    } else if (kind == "reference") {
      t.kind = TypeKind::kReference;
    } else {
      throw RegistryError(t.name + ": kind must be \"value\" or \"reference\"");
    }
    if (auto it = jt.find("constructors"); it != jt.end()) {
      for (const auto& c : *it) t.constructors.push_back(parse_params(c, t.name + ".new"));
    }
    if (auto it = jt.find("methods"); it != jt.end()) {
      for (const auto& jm : *it) {
        MethodDecl m;
        m.name = require_string(jm, "name", t.name + " method");
        const std::string where = t.name + "." + m.name;
        m.params = parse_params(jm.value("args", json::array()), where);
        m.returns = jm.value("returns", std::string("void"));
        m.is_static = optional_bool(jm, "static");
        t.methods.push_back(std::move(m));
      }
    }
    if (auto it = jt.find("fields"); it != jt.end()) {
      for (const auto& jf : *it) {
        FieldDecl f;
        f.name = require_string(jf, "name", t.name + " field");
        f.type = require_string(jf, "type", t.name + "." + f.name);
        f.is_static = optional_bool(jf, "static");
        t.fields.push_back(std::move(f));
      }
    }
    types.push_back(std::move(t));
  }
  return Registry(std::move(types));
}

Registry Registry::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RegistryError("cannot open registry file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Registry::has_type(std::string_view name) const {
  return type_index_.find(name) != type_index_.end();
}

bool Registry::is_known_type(std::string_view name) const {
  return is_builtin(name) || has_type(name);
}

bool Registry::is_reference_type(std::string_view name) const {
  if (name == "string") return true;
  if (const auto* t = find_type(name)) return t->kind == TypeKind::kReference;
  return false;
}

const TypeDecl* Registry::find_type(std::string_view name) const {
  auto it = type_index_.find(name);
  return it == type_index_.end() ? nullptr : &types_[it->second];
}

std::optional<ApiId> Registry::id_of(const ApiRef& ref) const {
  auto id = id_of_text(ref.to_string());
  if (id && vocab_[id->value] == ref) return id;
  return std::nullopt;
}

std::optional<ApiId> Registry::id_of_text(std::string_view canonical) const {
  auto it = by_text_.find(std::string(canonical));
  if (it == by_text_.end()) return std::nullopt;
  return it->second;
}

std::optional<ApiRef> Registry::resolve_member(std::string_view type, std::string_view member,
                                               std::span<const std::string> arg_types) const {
  std::vector<std::optional<std::string>> args(arg_types.begin(), arg_types.end());
  auto ref = resolve_call(type, member, args);
  if (ref && std::equal(ref->arg_types.begin(), ref->arg_types.end(), arg_types.begin(),
                        arg_types.end())) {
    return ref;
  }
  return std::nullopt;
}

std::optional<ApiRef> Registry::resolve_call(
    std::string_view type, std::string_view member,
    std::span<const std::optional<std::string>> arg_types) const {
  const auto* decl = find_type(type);
  if (!decl) return std::nullopt;

  // An exact match always wins over a partial one.
  bool all_known = true;
  for (const auto& a : arg_types) all_known = all_known && a && *a != "null";
  if (all_known) {
    std::vector<std::string> exact;
    for (const auto& a : arg_types) exact.push_back(*a);
    ApiRef probe{std::string(type), std::string(member),
                 member == "new" ? MemberKind::kConstructor : MemberKind::kMethod, exact};
    if (auto id = id_of_text(probe.to_string())) return vocab_[id->value];
  }

  std::optional<ApiRef> found;
  auto consider = [&](const std::vector<Param>& params, ApiRef ref) {
    if (params.size() != arg_types.size()) return true;
    for (std::size_t i = 0; i < params.size(); ++i) {
      if (!arg_matches(*this, arg_types[i], params[i].type)) return true;
    }
    if (found) return false;  // ambiguous
    found = std::move(ref);
    return true;
  };
  if (member == "new") {
    for (const auto& c : decl->constructors) {
      if (!consider(c, ApiRef{decl->name, "new", MemberKind::kConstructor, types_of(c),
                              decl->name, true})) {
        return std::nullopt;
      }
    }
    return found;
  }
  for (const auto& m : decl->methods) {
    if (m.name != member) continue;
    if (!consider(m.params, ApiRef{decl->name, m.name, MemberKind::kMethod, types_of(m.params),
                                   m.returns, m.is_static})) {
      return std::nullopt;
    }
  }
  return found;
}

std::optional<ApiRef> Registry::resolve_field(std::string_view type, std::string_view field,
                                              MemberKind access) const {
  const auto* decl = find_type(type);
  if (!decl) return std::nullopt;
  for (const auto& f : decl->fields) {
    if (f.name != field) continue;
    if (access == MemberKind::kFieldSet) {
      return ApiRef{decl->name, f.name, MemberKind::kFieldSet, {}, "void", f.is_static};
    }
    return ApiRef{decl->name, f.name, MemberKind::kFieldGet, {}, f.type, f.is_static};
  }
  return std::nullopt;
}

std::vector<ApiRef> Registry::members_named(std::string_view type,
                                            std::string_view member) const {
  std::vector<ApiRef> out;
  for (const auto& ref : vocab_) {
    if (ref.declaring_type != type || ref.member != member) continue;
    if (ref.kind == MemberKind::kFieldSet) continue;
    out.push_back(ref);
  }
  return out;
}

std::span<const Param> Registry::params_of(const ApiRef& ref) const {
  auto id = id_of(ref);
  if (!id) return {};
  return vocab_params_[id->value];
}

std::optional<std::string> Registry::field_type(const ApiRef& ref) const {
  if (!ref.is_field()) return std::nullopt;
  if (auto get = resolve_field(ref.declaring_type, ref.member, MemberKind::kFieldGet)) {
    return get->return_type;
  }
  return std::nullopt;
}

std::string Registry::default_literal(std::string_view type) const {
  if (type == "int") return "0";
  if (type == "bool") return "false";
  if (type == "string") return "null";
  if (type == "void") throw RegistryError("void has no default value");
  const auto* decl = find_type(type);
  if (!decl) throw RegistryError("unknown type \"" + std::string(type) + "\"");
  if (decl->kind == TypeKind::kReference) return "null";
  return "default(" + decl->name + ")";
}

}  // namespace idiomforge
