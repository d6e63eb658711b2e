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

#ifndef IDIOMFORGE_SRC_JSON_IO_HPP_
#define IDIOMFORGE_SRC_JSON_IO_HPP_

#include "idiomforge/registry.hpp"
#include "idiomforge/scs.hpp"
#include "json.hpp"

namespace idiomforge::detail {

using nlohmann::json;

inline const char* kind_name(MemberKind k) {
  switch (k) {
    case MemberKind::kMethod: return "method";
    case MemberKind::kFieldGet: return "get";
    case MemberKind::kFieldSet: return "set";
    case MemberKind::kConstructor: return "new";
  }
  return "method";
}

inline MemberKind kind_from_name(const std::string& s) {
  if (s == "method") return MemberKind::kMethod;
  if (s == "get") return MemberKind::kFieldGet;
  if (s == "set") return MemberKind::kFieldSet;
  if (s == "new") return MemberKind::kConstructor;
  throw Error("unknown member kind \"" + s + "\"");
}

inline json api_to_json(const ApiRef& a) {
  return json{{"type", a.declaring_type}, {"member", a.member}, {"kind", kind_name(a.kind)},
              {"args", a.arg_types},      {"returns", a.return_type}, {"static", a.is_static}};
}

inline ApiRef api_from_json(const json& j) {
  ApiRef a;
  a.declaring_type = j.at("type").get<std::string>();
  a.member = j.at("member").get<std::string>();
  a.kind = kind_from_name(j.at("kind").get<std::string>());
  a.arg_types = j.at("args").get<std::vector<std::string>>();
  a.return_type = j.at("returns").get<std::string>();
  a.is_static = j.at("static").get<bool>();
  return a;
}

inline json scs_to_json(const Scs& s) {
  switch (s.kind()) {
    case Scs::Kind::kEmpty: return json{{"k", "empty"}};
    case Scs::Kind::kUnknown: return json{{"k", "unknown"}};
    case Scs::Kind::kCreation: return json{{"k", "creation"}, {"api", api_to_json(s.api())}};
    case Scs::Kind::kAction: return json{{"k", "action"}, {"api", api_to_json(s.api())}};
    case Scs::Kind::kSeq:
    case Scs::Kind::kIf:
    case Scs::Kind::kWhile: {
      json children = json::array();
      for (const auto& c : s.children()) children.push_back(scs_to_json(c));
      const char* k = s.kind() == Scs::Kind::kSeq ? "seq" : s.kind() == Scs::Kind::kIf ? "if" : "while";
      return json{{"k", k}, {"c", std::move(children)}};
    }
  }
  return json{};
}

inline Scs scs_from_json(const json& j) {
  const std::string k = j.at("k").get<std::string>();
  if (k == "empty") return Scs::empty();
  if (k == "unknown") return Scs::unknown();
  if (k == "creation") return Scs::creation(api_from_json(j.at("api")));
  if (k == "action") return Scs::action(api_from_json(j.at("api")));
  std::vector<Scs> children;
  for (const auto& c : j.at("c")) children.push_back(scs_from_json(c));
  if (k == "seq") return Scs::seq(std::move(children));
  if (k == "if" && children.size() == 3) {
    return Scs::if_else(std::move(children[0]), std::move(children[1]), std::move(children[2]));
  }
  if (k == "while" && children.size() == 2) {
    return Scs::while_loop(std::move(children[0]), std::move(children[1]));
  }
  throw Error("malformed SCS node \"" + k + "\"");
}

}  // namespace idiomforge::detail

#endif  // IDIOMFORGE_SRC_JSON_IO_HPP_
