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

#include "idiomforge/minilang.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace idiomforge::minilang {
namespace {

const std::vector<std::string> kReserved = {
    "bool", "class", "default", "else",   "false", "if",   "int",  "new",
    "null", "return", "string", "true",   "var",   "void", "while",
};

// ---------------------------------------------------------------------------
// Lexer

enum class Tok { kIdent, kInt, kString, kPunct, kEnd };

struct Token {
  Tok kind = Tok::kEnd;
  std::string text;  // identifier, digits, unescaped string, or punctuation
  SourcePos pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      Token t;
      t.pos = {line_, col_};
      if (at_end()) {
        t.kind = Tok::kEnd;
        out.push_back(t);
        return out;
      }
      char c = peek();
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::kIdent;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
          t.text += advance();
        }
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t.kind = Tok::kInt;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
      } else if (c == '"') {
        t.kind = Tok::kString;
        advance();
        for (;;) {
          if (at_end() || peek() == '\n') {
            throw SyntaxError(t.pos.line, t.pos.column, "\"", "unterminated string literal");
          }
          char ch = advance();
          if (ch == '"') break;
          if (ch == '\\') {
            if (at_end()) throw SyntaxError(line_, col_, "\\", "bad escape");
            char e = advance();
            switch (e) {
              case 'n': t.text += '\n'; break;
              case 't': t.text += '\t'; break;
              case '\\': t.text += '\\'; break;
              case '"': t.text += '"'; break;
              default:
                throw SyntaxError(line_, col_ - 1, std::string(1, e), "unknown escape sequence");
            }
          } else {
            t.text += ch;
          }
        }
      } else if (c == '=' && peek(1) == '=') {
        t.kind = Tok::kPunct;
        t.text = "==";
        advance();
        advance();
      } else if (std::string_view("{}();,.=").find(c) != std::string_view::npos) {
        t.kind = Tok::kPunct;
        t.text = std::string(1, advance());
      } else {
        throw SyntaxError(line_, col_, std::string(1, c), "unexpected character");
      }
      out.push_back(std::move(t));
    }
  }

 private:
  bool at_end() const { return i_ >= src_.size(); }
  char peek(std::size_t ahead = 0) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }
  char advance() {
    char c = src_[i_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }
  void skip_space_and_comments() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '/' && peek(1) == '/') {
        while (!at_end() && peek() != '\n') advance();
      } else if (peek() == '/' && peek(1) == '*') {
        SourcePos start{line_, col_};
        advance();
        advance();
        while (!at_end() && !(peek() == '*' && peek(1) == '/')) advance();
        if (at_end()) throw SyntaxError(start.line, start.column, "/*", "unterminated comment");
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  explicit Parser(std::string_view src) : toks_(Lexer(src).run()) {}

  Program program() {
    Program p;
    while (!at(Tok::kEnd)) p.classes.push_back(class_decl());
    return p;
  }

  std::vector<Stmt> statements() {
    std::vector<Stmt> out;
    while (!at(Tok::kEnd)) out.push_back(statement());
    return out;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_punct(std::string_view p) const { return at(Tok::kPunct) && cur().text == p; }
  bool at_keyword(std::string_view k) const { return at(Tok::kIdent) && cur().text == k; }

  [[noreturn]] void fail(const std::string& msg) const {
    const auto& t = cur();
    std::string shown = t.kind == Tok::kEnd ? "<eof>" : t.text;
    if (t.kind == Tok::kString) shown = "\"" + t.text + "\"";
    throw SyntaxError(t.pos.line, t.pos.column, shown, msg);
  }

  Token take() { return toks_[i_++]; }

  void expect_punct(std::string_view p) {
    if (!at_punct(p)) fail("expected '" + std::string(p) + "'");
    ++i_;
  }
  void expect_keyword(std::string_view k) {
    if (!at_keyword(k)) fail("expected '" + std::string(k) + "'");
    ++i_;
  }
  std::string identifier(const char* what) {
    if (!at(Tok::kIdent) || is_reserved_word(cur().text)) fail(std::string("expected ") + what);
    return take().text;
  }
  // Type positions accept the builtin keywords as well.
  std::string type_name() {
    if (!at(Tok::kIdent)) fail("expected type name");
    const auto& t = cur().text;
    if (is_reserved_word(t) && !Registry::is_builtin(t)) fail("expected type name");
    return take().text;
  }

  ClassDecl class_decl() {
    expect_keyword("class");
    ClassDecl c;
    c.name = identifier("class name");
    expect_punct("{");
    while (!at_punct("}")) {
      if (at(Tok::kEnd)) fail("expected '}'");
      c.methods.push_back(method_decl());
    }
    expect_punct("}");
    return c;
  }

  MethodDecl method_decl() {
    MethodDecl m;
    m.pos = cur().pos;
    m.return_type = type_name();
    m.name = identifier("method name");
    expect_punct("(");
    if (!at_punct(")")) {
      for (;;) {
        Param p;
        p.type = type_name();
        if (p.type == "void") fail("parameter cannot be void");
        p.name = identifier("parameter name");
        m.params.push_back(std::move(p));
        if (!at_punct(",")) break;
        ++i_;
      }
    }
    expect_punct(")");
    m.body = block();
    return m;
  }

  std::vector<Stmt> block() {
    expect_punct("{");
    std::vector<Stmt> out;
    while (!at_punct("}")) {
      if (at(Tok::kEnd)) fail("expected '}'");
      out.push_back(statement());
    }
    expect_punct("}");
    return out;
  }

  Stmt statement() {
    SourcePos pos = cur().pos;
    Stmt s;
    if (at_keyword("var")) {
      ++i_;
      std::string name = identifier("variable name");
      expect_punct("=");
      s = Stmt::var_decl(std::move(name), expr());
      expect_punct(";");
    } else if (at_keyword("if")) {
      s = if_statement();
    } else if (at_keyword("while")) {
      ++i_;
      expect_punct("(");
      Expr cond = expr();
      expect_punct(")");
      s = Stmt::while_loop(std::move(cond), block());
    } else if (at_keyword("return")) {
      ++i_;
      if (at_punct(";")) {
        s = Stmt::ret();
      } else {
        s = Stmt::ret(expr());
      }
      expect_punct(";");
    } else {
      Expr e = expr();
      if (at_punct("=")) {
        if (e.kind != Expr::Kind::kName && e.kind != Expr::Kind::kMember) {
          fail("left side of assignment must be a variable or field");
        }
        ++i_;
        s = Stmt::assign(std::move(e), expr());
      } else {
        s = Stmt::expr(std::move(e));
      }
      expect_punct(";");
    }
    s.pos = pos;
    return s;
  }

  Stmt if_statement() {
    expect_keyword("if");
    expect_punct("(");
    Expr cond = expr();
    expect_punct(")");
    auto then_body = block();
    std::vector<Stmt> else_body;
    if (at_keyword("else")) {
      ++i_;
      if (at_keyword("if")) {
        SourcePos pos = cur().pos;
        else_body.push_back(if_statement());
        else_body.back().pos = pos;
      } else {
        else_body = block();
      }
    }
    return Stmt::if_else(std::move(cond), std::move(then_body), std::move(else_body));
  }

  Expr expr() {
    Expr lhs = postfix();
    if (at_punct("==")) {
      SourcePos pos = cur().pos;
      ++i_;
      Expr e = Expr::eq(std::move(lhs), postfix());
      e.pos = pos;
      return e;
    }
    return lhs;
  }

  std::vector<Expr> args() {
    expect_punct("(");
    std::vector<Expr> out;
    if (!at_punct(")")) {
      for (;;) {
        out.push_back(expr());
        if (!at_punct(",")) break;
        ++i_;
      }
    }
    expect_punct(")");
    return out;
  }

  Expr postfix() {
    Expr e = primary();
    while (at_punct(".")) {
      ++i_;
      SourcePos pos = cur().pos;
      std::string member = identifier("member name");
      if (at_punct("(")) {
        e = Expr::call(std::move(e), std::move(member), args());
      } else {
        e = Expr::member(std::move(e), std::move(member));
      }
      e.pos = pos;
    }
    return e;
  }

  Expr primary() {
    SourcePos pos = cur().pos;
    Expr e;
    if (at(Tok::kInt)) {
      e.kind = Expr::Kind::kIntLit;
      e.text = take().text;
    } else if (at(Tok::kString)) {
      e = Expr::string_lit(take().text);
    } else if (at_keyword("true") || at_keyword("false")) {
      e = Expr::bool_lit(take().text == "true");
    } else if (at_keyword("null")) {
      ++i_;
      e = Expr::null_lit();
    } else if (at_keyword("new")) {
      ++i_;
      std::string type = identifier("type name");
      e = Expr::make_new(std::move(type), args());
    } else if (at_keyword("default")) {
      ++i_;
      expect_punct("(");
      e = Expr::default_of(type_name());
      expect_punct(")");
    } else if (at_punct("(")) {
      ++i_;
      e = expr();
      expect_punct(")");
      return e;
    } else if (at(Tok::kIdent) && !is_reserved_word(cur().text)) {
      e = Expr::name(take().text);
    } else {
      fail("expected expression");
    }
    e.pos = pos;
    return e;
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Renderer

std::string escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string render_operand(const Expr& e) {
  return e.kind == Expr::Kind::kEq ? "(" + render_expr(e) + ")" : render_expr(e);
}

std::string render_args(const std::vector<Expr>& args, std::size_t from) {
  std::string out = "(";
  for (std::size_t i = from; i < args.size(); ++i) {
    if (i > from) out += ", ";
    out += render_expr(args[i]);
  }
  return out + ")";
}

void render_into(std::string& out, const std::vector<Stmt>& stmts, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& s : stmts) {
    switch (s.kind) {
      case Stmt::Kind::kVarDecl:
        out += pad + "var " + s.name + " = " + render_expr(s.exprs[0]) + ";\n";
        break;
      case Stmt::Kind::kAssign:
        out += pad + render_expr(s.exprs[0]) + " = " + render_expr(s.exprs[1]) + ";\n";
        break;
      case Stmt::Kind::kExpr:
        out += pad + render_expr(s.exprs[0]) + ";\n";
        break;
      case Stmt::Kind::kReturn:
        out += pad + (s.exprs.empty() ? "return;\n" : "return " + render_expr(s.exprs[0]) + ";\n");
        break;
      case Stmt::Kind::kComment:
        out += pad + "// " + s.name + "\n";
        break;
      case Stmt::Kind::kIf:
        out += pad + "if (" + render_expr(s.exprs[0]) + ")\n" + pad + "{\n";
        render_into(out, s.body, indent + 1);
        out += pad + "}\n";
        if (!s.else_body.empty()) {
          out += pad + "else\n" + pad + "{\n";
          render_into(out, s.else_body, indent + 1);
          out += pad + "}\n";
        }
        break;
      case Stmt::Kind::kWhile:
        out += pad + "while (" + render_expr(s.exprs[0]) + ")\n" + pad + "{\n";
        render_into(out, s.body, indent + 1);
        out += pad + "}\n";
        break;
    }
  }
}

// ---------------------------------------------------------------------------
// Resolver

class Resolver {
 public:
  Resolver(const Registry& reg, TypedMethod& out) : reg_(reg), out_(out) {}

  void run(const MethodDecl& m) {
    scopes_.emplace_back();
    for (const auto& p : m.params) {
      VarInfo v;
      v.name = p.name;
      if (reg_.is_known_type(p.type)) v.type = p.type;
      v.is_param = true;
      declare(std::move(v));
    }
    block(m.body);
    scopes_.pop_back();
  }

 private:
  int declare(VarInfo v) {
    int id = static_cast<int>(out_.vars.size());
    scopes_.back()[v.name] = id;
    out_.vars.push_back(std::move(v));
    return id;
  }

  int lookup(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      if (auto f = it->find(name); f != it->end()) return f->second;
    }
    return -1;
  }

  void block(const std::vector<Stmt>& stmts) {
    scopes_.emplace_back();
    for (const auto& s : stmts) statement(s);
    scopes_.pop_back();
  }

  void statement(const Stmt& s) {
    switch (s.kind) {
      case Stmt::Kind::kVarDecl: {
        auto type = expr(s.exprs[0]);
        VarInfo v;
        v.name = s.name;
        if (type && *type != "null" && *type != "void") v.type = type;
        v.decl = &s;
        out_.declares[&s] = declare(std::move(v));
        break;
      }
      case Stmt::Kind::kAssign:
        lvalue(s.exprs[0]);
        expr(s.exprs[1]);
        break;
      case Stmt::Kind::kExpr:
        expr(s.exprs[0]);
        break;
      case Stmt::Kind::kReturn:
        if (!s.exprs.empty()) expr(s.exprs[0]);
        break;
      case Stmt::Kind::kIf:
        expr(s.exprs[0]);
        block(s.body);
        block(s.else_body);
        break;
      case Stmt::Kind::kWhile:
        expr(s.exprs[0]);
        block(s.body);
        break;
      case Stmt::Kind::kComment:
        break;
    }
  }

  void lvalue(const Expr& e) {
    if (e.kind != Expr::Kind::kMember) {
      expr(e);
      return;
    }
    ExprInfo info;
    auto recv = receiver(e.operands[0]);
    if (recv.type) {
      auto ref = reg_.resolve_field(*recv.type, e.text, MemberKind::kFieldSet);
      if (ref && ref->is_static == recv.is_type) {
        info.type = reg_.field_type(*ref);
        info.api = std::move(ref);
      } else {
        info.unresolved = true;
      }
    } else {
      info.unresolved = true;
    }
    out_.exprs[&e] = std::move(info);
  }

  struct Receiver {
    std::optional<std::string> type;
    bool is_type = false;
  };

  // A Name that is not a local and matches a registry type is a type
  // reference.
  Receiver receiver(const Expr& e) {
    if (e.kind == Expr::Kind::kName && lookup(e.text) < 0 && reg_.has_type(e.text)) {
      ExprInfo info;
      info.type_ref = true;
      out_.exprs[&e] = info;
      return {e.text, true};
    }
    auto t = expr(e);
    if (t && (*t == "null" || *t == "void")) t.reset();
    return {t, false};
  }

  std::optional<std::string> expr(const Expr& e) {
    ExprInfo info;
    switch (e.kind) {
      case Expr::Kind::kIntLit: info.type = "int"; break;
      case Expr::Kind::kBoolLit: info.type = "bool"; break;
      case Expr::Kind::kStringLit: info.type = "string"; break;
      case Expr::Kind::kNullLit: info.type = "null"; break;
      case Expr::Kind::kName: {
        int id = lookup(e.text);
        if (id >= 0) {
          info.var = id;
          info.type = out_.vars[static_cast<std::size_t>(id)].type;
        } else if (reg_.has_type(e.text)) {
          info.type_ref = true;
        }
        break;
      }
      case Expr::Kind::kDefault:
        if (reg_.is_known_type(e.text) && e.text != "void") info.type = e.text;
        break;
      case Expr::Kind::kEq:
        expr(e.operands[0]);
        expr(e.operands[1]);
        info.type = "bool";
        break;
      case Expr::Kind::kMember: {
        auto recv = receiver(e.operands[0]);
        std::optional<ApiRef> ref;
        if (recv.type) ref = reg_.resolve_field(*recv.type, e.text, MemberKind::kFieldGet);
        if (ref && ref->is_static == recv.is_type) {
          info.type = ref->return_type;
          info.api = std::move(ref);
        } else {
          info.unresolved = true;
        }
        break;
      }
      case Expr::Kind::kCall: {
        auto recv = receiver(e.operands[0]);
        std::vector<std::optional<std::string>> arg_types;
        for (std::size_t i = 1; i < e.operands.size(); ++i) {
          arg_types.push_back(expr(e.operands[i]));
        }
        std::optional<ApiRef> ref;
        if (recv.type) ref = reg_.resolve_call(*recv.type, e.text, arg_types);
        if (ref && ref->is_static == recv.is_type) {
          info.type = ref->return_type;
          info.api = std::move(ref);
        } else {
          info.unresolved = true;
        }
        break;
      }
      case Expr::Kind::kNew: {
        std::vector<std::optional<std::string>> arg_types;
        for (const auto& a : e.operands) arg_types.push_back(expr(a));
        auto ref = reg_.resolve_call(e.text, "new", arg_types);
        if (ref) {
          info.type = ref->return_type;
          info.api = std::move(ref);
        } else {
          info.unresolved = true;
        }
        break;
      }
    }
    auto type = info.type;
    out_.exprs[&e] = std::move(info);
    return type;
  }

  const Registry& reg_;
  TypedMethod& out_;
  std::vector<std::map<std::string, int>> scopes_;
};

}  // namespace

SyntaxError::SyntaxError(int line, int column, std::string token, const std::string& message)
    : Error("syntax error at " + std::to_string(line) + ":" + std::to_string(column) +
            " near '" + token + "': " + message),
      line_(line),
      column_(column),
      token_(std::move(token)) {}

Expr Expr::int_lit(long long v) {
  Expr e;
  e.kind = Kind::kIntLit;
  e.text = std::to_string(v);
  return e;
}

Expr Expr::bool_lit(bool v) {
  Expr e;
  e.kind = Kind::kBoolLit;
  e.text = v ? "true" : "false";
  return e;
}

Expr Expr::string_lit(std::string v) {
  Expr e;
  e.kind = Kind::kStringLit;
  e.text = std::move(v);
  return e;
}

Expr Expr::null_lit() {
  Expr e;
  e.kind = Kind::kNullLit;
  e.text = "null";
  return e;
}

Expr Expr::name(std::string id) {
  Expr e;
  e.kind = Kind::kName;
  e.text = std::move(id);
  return e;
}

Expr Expr::member(Expr receiver, std::string field) {
  Expr e;
  e.kind = Kind::kMember;
  e.text = std::move(field);
  e.operands.push_back(std::move(receiver));
  return e;
}

Expr Expr::call(Expr receiver, std::string method, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::kCall;
  e.text = std::move(method);
  e.operands.reserve(args.size() + 1);
  e.operands.push_back(std::move(receiver));
  for (auto& a : args) e.operands.push_back(std::move(a));
  return e;
}

Expr Expr::make_new(std::string type, std::vector<Expr> args) {
  Expr e;
  e.kind = Kind::kNew;
  e.text = std::move(type);
  e.operands = std::move(args);
  return e;
}

Expr Expr::default_of(std::string type) {
  Expr e;
  e.kind = Kind::kDefault;
  e.text = std::move(type);
  return e;
}

Expr Expr::eq(Expr lhs, Expr rhs) {
  Expr e;
  e.kind = Kind::kEq;
  e.text = "==";
  e.operands.push_back(std::move(lhs));
  e.operands.push_back(std::move(rhs));
  return e;
}

Expr Expr::from_literal(std::string_view source) {
  auto stmts = parse_statements(std::string(source) + ";");
  if (stmts.size() != 1 || stmts[0].kind != Stmt::Kind::kExpr) {
    throw Error("not a literal: " + std::string(source));
  }
  return std::move(stmts[0].exprs[0]);
}

Stmt Stmt::var_decl(std::string name, Expr init) {
  Stmt s;
  s.kind = Kind::kVarDecl;
  s.name = std::move(name);
  s.exprs.push_back(std::move(init));
  return s;
}

Stmt Stmt::assign(Expr lvalue, Expr rhs) {
  Stmt s;
  s.kind = Kind::kAssign;
  s.exprs.push_back(std::move(lvalue));
  s.exprs.push_back(std::move(rhs));
  return s;
}

Stmt Stmt::expr(Expr e) {
  Stmt s;
  s.kind = Kind::kExpr;
  s.exprs.push_back(std::move(e));
  return s;
}

Stmt Stmt::if_else(Expr cond, std::vector<Stmt> then_body, std::vector<Stmt> else_body) {
  Stmt s;
  s.kind = Kind::kIf;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(then_body);
  s.else_body = std::move(else_body);
  return s;
}

Stmt Stmt::while_loop(Expr cond, std::vector<Stmt> body) {
  Stmt s;
  s.kind = Kind::kWhile;
  s.exprs.push_back(std::move(cond));
  s.body = std::move(body);
  return s;
}

Stmt Stmt::ret(std::optional<Expr> e) {
  Stmt s;
  s.kind = Kind::kReturn;
  if (e) s.exprs.push_back(std::move(*e));
  return s;
}

Stmt Stmt::comment(std::string text) {
  Stmt s;
  s.kind = Kind::kComment;
  s.name = std::move(text);
  return s;
}

bool is_reserved_word(std::string_view word) {
  return std::binary_search(kReserved.begin(), kReserved.end(), word);
}

const std::vector<std::string>& reserved_words() { return kReserved; }

Program parse_program(std::string_view source) { return Parser(source).program(); }

std::vector<Stmt> parse_statements(std::string_view source) {
  return Parser(source).statements();
}

std::string render_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kIntLit:
    case Expr::Kind::kBoolLit:
    case Expr::Kind::kName:
      return e.text;
    case Expr::Kind::kNullLit:
      return "null";
    case Expr::Kind::kStringLit:
      return escape(e.text);
    case Expr::Kind::kDefault:
      return "default(" + e.text + ")";
    case Expr::Kind::kEq:
      return render_operand(e.operands[0]) + " == " + render_operand(e.operands[1]);
    case Expr::Kind::kMember:
      return render_operand(e.operands[0]) + "." + e.text;
    case Expr::Kind::kCall:
      return render_operand(e.operands[0]) + "." + e.text + render_args(e.operands, 1);
    case Expr::Kind::kNew:
      return "new " + e.text + render_args(e.operands, 0);
  }
  return {};
}

std::string render_statements(const std::vector<Stmt>& stmts, int indent) {
  std::string out;
  render_into(out, stmts, indent);
  return out;
}

std::string render_program(const Program& program) {
  std::string out;
  for (std::size_t c = 0; c < program.classes.size(); ++c) {
    const auto& cls = program.classes[c];
    if (c) out += "\n";
    out += "class " + cls.name + "\n{\n";
    for (std::size_t m = 0; m < cls.methods.size(); ++m) {
      const auto& method = cls.methods[m];
      if (m) out += "\n";
      out += "  " + method.return_type + " " + method.name + "(";
      for (std::size_t i = 0; i < method.params.size(); ++i) {
        if (i) out += ", ";
        out += method.params[i].type + " " + method.params[i].name;
      }
      out += ")\n  {\n";
      render_into(out, method.body, 2);
      out += "  }\n";
    }
    out += "}\n";
  }
  return out;
}

const ExprInfo& TypedMethod::info(const Expr& e) const {
  static const ExprInfo kNone;
  auto it = exprs.find(&e);
  return it == exprs.end() ? kNone : it->second;
}

int TypedMethod::var_of(const Expr& e) const {
  return e.kind == Expr::Kind::kName ? info(e).var : -1;
}

TypedMethod resolve_method(const ClassDecl& owner, const MethodDecl& method, const Registry& reg) {
  TypedMethod out;
  out.owner = &owner;
  out.method = &method;
  Resolver(reg, out).run(method);
  return out;
}

TypedProgram resolve_types(std::shared_ptr<const Program> program, const Registry& reg) {
  TypedProgram out;
  out.program = std::move(program);
  for (const auto& cls : out.program->classes) {
    for (const auto& m : cls.methods) out.methods.push_back(resolve_method(cls, m, reg));
  }
  return out;
}

}  // namespace idiomforge::minilang
