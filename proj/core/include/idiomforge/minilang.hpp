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

#ifndef IDIOMFORGE_MINILANG_HPP_
#define IDIOMFORGE_MINILANG_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "idiomforge/registry.hpp"

// MiniLang: a small C#-flavoured language.  Corpus files and synthesized
// snippets are both written in it.
//
//   program  := class*
//   class    := 'class' IDENT '{' method* '}'
//   method   := IDENT IDENT '(' [IDENT IDENT {',' IDENT IDENT}] ')' block
//   block    := '{' stmt* '}'
//   stmt     := 'var' IDENT '=' expr ';'
//             | 'if' '(' expr ')' block ['else' (block | if-stmt)]
//             | 'while' '(' expr ')' block
//             | 'return' [expr] ';'
//             | expr '=' expr ';'
//             | expr ';'
//   expr     := postfix ['==' postfix]
//   postfix  := primary {'.' IDENT ['(' args ')']}
//   primary  := INT | STRING | 'true' | 'false' | 'null' | IDENT
//             | 'new' IDENT '(' args ')' | 'default' '(' IDENT ')' | '(' expr ')'
namespace idiomforge::minilang {

class SyntaxError : public Error {
 public:
  SyntaxError(int line, int column, std::string token, const std::string& message);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& token() const { return token_; }

 private:
  int line_;
  int column_;
  std::string token_;
};

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct Expr {
  enum class Kind {
    kIntLit,
    kBoolLit,
    kStringLit,  // text holds the unescaped value
    kNullLit,
    kName,     // text = identifier
    kMember,   // operands = {receiver}, text = field
    kCall,     // operands = {receiver, args...}, text = method
    kNew,      // operands = args, text = type
    kDefault,  // text = type
    kEq,       // operands = {lhs, rhs}
  };

  Kind kind = Kind::kNullLit;
  std::string text;
  std::vector<Expr> operands;
  SourcePos pos;  // position of the identifying token; ignored by ==

  static Expr int_lit(long long v);
  static Expr bool_lit(bool v);
  static Expr string_lit(std::string v);
  static Expr null_lit();
  static Expr name(std::string id);
  static Expr member(Expr receiver, std::string field);
  static Expr call(Expr receiver, std::string method, std::vector<Expr> args);
  static Expr make_new(std::string type, std::vector<Expr> args);
  static Expr default_of(std::string type);
  static Expr eq(Expr lhs, Expr rhs);
  // Parses a literal produced by Registry::default_literal.
  static Expr from_literal(std::string_view source);

  bool operator==(const Expr& other) const {
    return kind == other.kind && text == other.text && operands == other.operands;
  }
};

struct Stmt {
  enum class Kind {
    kVarDecl,  // name, exprs = {init}
    kAssign,   // exprs = {lvalue, rhs}
    kExpr,     // exprs = {e}
    kIf,       // exprs = {cond}, body, else_body
    kWhile,    // exprs = {cond}, body
    kReturn,   // exprs = {} or {e}
    kComment,  // name = text; rendered only, never produced by the parser
  };

  Kind kind = Kind::kExpr;
  std::string name;
  std::vector<Expr> exprs;
  std::vector<Stmt> body;
  std::vector<Stmt> else_body;
  SourcePos pos;

  static Stmt var_decl(std::string name, Expr init);
  static Stmt assign(Expr lvalue, Expr rhs);
  static Stmt expr(Expr e);
  static Stmt if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body = {});
  static Stmt while_loop(Expr cond, std::vector<Stmt> body);
  static Stmt ret(std::optional<Expr> e = std::nullopt);
  static Stmt comment(std::string text);

  bool operator==(const Stmt& other) const {
    return kind == other.kind && name == other.name && exprs == other.exprs &&
           body == other.body && else_body == other.else_body;
  }
};

struct MethodDecl {
  std::string return_type;
  std::string name;
  std::vector<Param> params;
  std::vector<Stmt> body;
  SourcePos pos;
  bool operator==(const MethodDecl& o) const {
    return return_type == o.return_type && name == o.name && params == o.params &&
           body == o.body;
  }
};

struct ClassDecl {
  std::string name;
  std::vector<MethodDecl> methods;
  bool operator==(const ClassDecl& o) const { return name == o.name && methods == o.methods; }
};

struct Program {
  std::vector<ClassDecl> classes;
  bool operator==(const Program&) const = default;
};

bool is_reserved_word(std::string_view word);
const std::vector<std::string>& reserved_words();

Program parse_program(std::string_view source);

// Parses a bare statement list (no class or method wrapper).
std::vector<Stmt> parse_statements(std::string_view source);

std::string render_expr(const Expr& e);
// Two spaces per indent level, one statement per line, braces on their own
// lines.  Output ends with a newline unless `stmts` is empty.
std::string render_statements(const std::vector<Stmt>& stmts, int indent = 0);
std::string render_program(const Program& program);

// ---------------------------------------------------------------------------
// Type resolution.

struct VarInfo {
  std::string name;
  std::optional<std::string> type;  // nullopt when the initializer is untyped
  bool is_param = false;
  const Stmt* decl = nullptr;  // declaring statement for locals
};

struct ExprInfo {
  std::optional<std::string> type;  // "null" for the null literal
  std::optional<ApiRef> api;        // resolved member access
  bool unresolved = false;          // member access that failed to resolve
  int var = -1;                     // Name bound to a variable
  bool type_ref = false;            // Name denoting a registry type
};

struct TypedMethod {
  const ClassDecl* owner = nullptr;
  const MethodDecl* method = nullptr;
  std::vector<VarInfo> vars;
  std::unordered_map<const Expr*, ExprInfo> exprs;
  std::unordered_map<const Stmt*, int> declares;  // VarDecl -> variable

  const ExprInfo& info(const Expr& e) const;
  // Variable bound by a Name expression, or -1.
  int var_of(const Expr& e) const;
};

// Annotations only; the program is shared, never modified.
struct TypedProgram {
  std::shared_ptr<const Program> program;
  std::vector<TypedMethod> methods;
};

TypedMethod resolve_method(const ClassDecl& owner, const MethodDecl& method,
                           const Registry& reg);
TypedProgram resolve_types(std::shared_ptr<const Program> program, const Registry& reg);

}  // namespace idiomforge::minilang

#endif  // IDIOMFORGE_MINILANG_HPP_
