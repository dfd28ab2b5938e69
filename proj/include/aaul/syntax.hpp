// ASCII surface syntax for formulas and update literals.
//
//   formula := iff
//   iff     := imp ("<->" imp)*            left-associative
//   imp     := or ("->" imp)?              right-associative
//   or      := and ("|" and)*
//   and     := unary ("&" unary)*
//   unary   := "~" unary | "[" agent "]" unary | "<" agent ">" unary
//            | "[" updlit "]" unary | "<" updlit ">" unary
//            | "[*]" unary | "<*>" unary
//            | atom | "true" | "false" | "(" formula ")"
//   updlit  := "{" clause ("," clause)* "}"
//   clause  := "(" formula "," agent "," formula ")"

#pragma once

#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "aaul/formula.hpp"

namespace aaul {

class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& what, std::size_t pos)
      : std::runtime_error("at offset " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

inline bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!is_ident_char(c)) return false;
  return true;
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Formula formula_to_end() {
    Formula f = iff_level();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return f;
  }

  Update update_to_end() {
    skip_ws();
    Update u = update_literal();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return u;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(std::string_view tok) {
    skip_ws();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) {
      if (pos_ >= text_.size()) fail("expected '" + std::string(tok) + "' but input ended");
      fail("expected '" + std::string(tok) + "'");
    }
  }

  bool at_ident() {
    skip_ws();
    return pos_ < text_.size() && is_ident_char(text_[pos_]);
  }

  std::string identifier(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    if (start == pos_) fail(std::string("expected ") + what);
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string agent() {
    std::string a = identifier("agent name");
    if (a == "true" || a == "false") fail("'" + a + "' is not an agent name");
    return a;
  }

  Formula iff_level() {
    Formula f = imp_level();
    while (accept("<->")) f = iff(f, imp_level());
    return f;
  }

  Formula imp_level() {
    Formula f = or_level();
    if (accept("->")) return implies(f, imp_level());
    return f;
  }

  Formula or_level() {
    Formula f = and_level();
    while (accept("|")) f = disj(f, and_level());
    return f;
  }

  Formula and_level() {
    Formula f = unary();
    while (accept("&")) f = conj(f, unary());
    return f;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (accept("~")) return neg(unary());
    if (accept("[*]")) return arb_box(unary());
    if (accept("<*>")) return arb_diamond(unary());
    if (peek("<->")) fail("unexpected '<->'");
    if (accept("[")) {
      if (peek("{")) {
        Update u = update_literal();
        expect("]");
        return update_box(std::move(u), unary());
      }
      std::string a = agent();
      expect("]");
      return box(std::move(a), unary());
    }
    if (accept("<")) {
      if (peek("{")) {
        Update u = update_literal();
        expect(">");
        return update_diamond(std::move(u), unary());
      }
      std::string a = agent();
      expect(">");
      return diamond(std::move(a), unary());
    }
    if (accept("(")) {
      Formula f = iff_level();
      expect(")");
      return f;
    }
    if (at_ident()) {
      std::string id = identifier("atom");
      if (id == "true") return top();
      if (id == "false") return bot();
      return atom(std::move(id));
    }
    fail("unknown token '" + std::string(1, text_[pos_]) + "'");
  }

  Update update_literal() {
    expect("{");
    Update u;
    do {
      expect("(");
      Formula pre = iff_level();
      expect(",");
      std::string a = agent();
      expect(",");
      Formula post = iff_level();
      expect(")");
      u.clauses.push_back({std::move(pre), std::move(a), std::move(post)});
    } while (accept(","));
    expect("}");
    return u;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Binding strength, loosest first.
enum Prec { kIff = 1, kImp = 2, kOr = 3, kAnd = 4, kUnary = 5 };

inline int precedence(Op op) {
  switch (op) {
    case Op::Iff:
      return kIff;
    case Op::Implies:
      return kImp;
    case Op::Or:
      return kOr;
    case Op::And:
      return kAnd;
    default:
      return kUnary;
  }
}

inline void print_update_to(const Update& u, std::string& out);

inline void print_to(const Formula& f, int min_prec, std::string& out) {
  const int p = precedence(f.op());
  const bool parens = p < min_prec;
  if (parens) out += '(';
  switch (f.op()) {
    case Op::Atom:
      out += f.name();
      break;
    case Op::Top:
      out += "true";
      break;
    case Op::Bot:
      out += "false";
      break;
    case Op::Not:
      out += '~';
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::Box:
      out += '[' + f.name() + ']';
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::Diamond:
      out += '<' + f.name() + '>';
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::UpdateBox:
      out += '[';
      print_update_to(f.update(), out);
      out += ']';
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::UpdateDiamond:
      out += '<';
      print_update_to(f.update(), out);
      out += '>';
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::ArbBox:
      out += "[*]";
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::ArbDiamond:
      out += "<*>";
      print_to(f.lhs(), kUnary, out);
      break;
    case Op::And:
    case Op::Or:
    case Op::Iff: {
      const char* sym = f.op() == Op::And ? " & " : f.op() == Op::Or ? " | " : " <-> ";
      print_to(f.lhs(), p, out);
      out += sym;
      print_to(f.rhs(), p + 1, out);
      break;
    }
    case Op::Implies:
      print_to(f.lhs(), p + 1, out);
      out += " -> ";
      print_to(f.rhs(), p, out);
      break;
  }
  if (parens) out += ')';
}

inline void print_update_to(const Update& u, std::string& out) {
  out += '{';
  for (std::size_t i = 0; i < u.clauses.size(); ++i) {
    if (i) out += ", ";
    const Clause& c = u.clauses[i];
    out += '(';
    print_to(c.pre, kIff, out);
    out += ", " + c.agent + ", ";
    print_to(c.post, kIff, out);
    out += ')';
  }
  out += '}';
}

}  // namespace detail

inline Formula parse_formula(std::string_view text) { return detail::Parser(text).formula_to_end(); }

// Parses a bare update literal such as "{(true,a,p), (p,b,true)}".
inline Update parse_update(std::string_view text) { return detail::Parser(text).update_to_end(); }

// Canonical text with minimal parentheses; parse_formula inverts it exactly.
inline std::string print_formula(const Formula& f) {
  std::string out;
  detail::print_to(f, detail::kIff, out);
  return out;
}

inline std::string print_update(const Update& u) {
  std::string out;
  detail::print_update_to(u, out);
  return out;
}

}  // namespace aaul
