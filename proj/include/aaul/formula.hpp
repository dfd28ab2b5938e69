// AST for arbitrary arrow update logic formulas and arrow updates.
//
// Formulas are immutable, reference-counted trees (DAGs when subterms are
// shared). Copying a Formula copies a handle, never the tree.

#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace aaul {

enum class Op {
  Atom,
  Top,
  Bot,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Box,
  Diamond,
  UpdateBox,
  UpdateDiamond,
  ArbBox,
  ArbDiamond,
};

struct Node;
struct Update;

class Formula {
 public:
  Formula();  // Top

  Op op() const;
  // Atom name for Atom, agent for Box/Diamond, empty otherwise.
  const std::string& name() const;
  // Single operand of unary nodes; left operand of binary nodes.
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Update& update() const;

  const Node* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }

 private:
  friend Formula make_node(Node n);
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Clause {
  Formula pre;
  std::string agent;
  Formula post;

  friend bool operator==(const Clause& a, const Clause& b) {
    return a.agent == b.agent && a.pre == b.pre && a.post == b.post;
  }
};

struct Update {
  std::vector<Clause> clauses;

  friend bool operator==(const Update& a, const Update& b) { return a.clauses == b.clauses; }
};

struct Node {
  Op op = Op::Top;
  std::string name;
  // One operand for unary nodes, two for binary ones.
  std::vector<Formula> kids;
  std::shared_ptr<const Update> update;
};

// Any malformed construction, e.g. an update with no clauses.
class formula_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline Formula make_node(Node n) { return Formula(std::make_shared<const Node>(std::move(n))); }

inline Formula::Formula() {
  static const std::shared_ptr<const Node> top_node = std::make_shared<const Node>();
  node_ = top_node;
}

inline Op Formula::op() const { return node_->op; }
inline const std::string& Formula::name() const { return node_->name; }
inline const Formula& Formula::lhs() const { return node_->kids.at(0); }
inline const Formula& Formula::rhs() const { return node_->kids.at(1); }
inline const Update& Formula::update() const { return *node_->update; }

inline bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.op != y.op || x.name != y.name) return false;
  switch (x.op) {
    case Op::Atom:
    case Op::Top:
    case Op::Bot:
      return true;
    case Op::Not:
    case Op::Box:
    case Op::Diamond:
    case Op::ArbBox:
    case Op::ArbDiamond:
    case Op::And:
    case Op::Or:
    case Op::Implies:
    case Op::Iff:
      return x.kids == y.kids;
    case Op::UpdateBox:
    case Op::UpdateDiamond:
      return *x.update == *y.update && x.kids == y.kids;
  }
  return false;
}

// Constructors.

inline Formula atom(std::string name) {
  Node n;
  n.op = Op::Atom;
  n.name = std::move(name);
  return make_node(std::move(n));
}

inline Formula top() { return Formula(); }

inline Formula bot() {
  Node n;
  n.op = Op::Bot;
  return make_node(std::move(n));
}

namespace detail {
inline Formula unary(Op op, Formula f, std::string name = {}) {
  Node n;
  n.op = op;
  n.name = std::move(name);
  n.kids.push_back(std::move(f));
  return make_node(std::move(n));
}
inline Formula binary(Op op, Formula a, Formula b) {
  Node n;
  n.op = op;
  n.kids.push_back(std::move(a));
  n.kids.push_back(std::move(b));
  return make_node(std::move(n));
}
inline Formula with_update(Op op, Update u, Formula f) {
  if (u.clauses.empty()) throw formula_error("arrow update needs at least one clause");
  Node n;
  n.op = op;
  n.update = std::make_shared<const Update>(std::move(u));
  n.kids.push_back(std::move(f));
  return make_node(std::move(n));
}
}  // namespace detail

inline Formula neg(Formula f) { return detail::unary(Op::Not, std::move(f)); }
inline Formula conj(Formula a, Formula b) { return detail::binary(Op::And, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return detail::binary(Op::Or, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) { return detail::binary(Op::Implies, std::move(a), std::move(b)); }
inline Formula iff(Formula a, Formula b) { return detail::binary(Op::Iff, std::move(a), std::move(b)); }
inline Formula box(std::string agent, Formula f) { return detail::unary(Op::Box, std::move(f), std::move(agent)); }
inline Formula diamond(std::string agent, Formula f) {
  return detail::unary(Op::Diamond, std::move(f), std::move(agent));
}
inline Formula update_box(Update u, Formula f) { return detail::with_update(Op::UpdateBox, std::move(u), std::move(f)); }
inline Formula update_diamond(Update u, Formula f) {
  return detail::with_update(Op::UpdateDiamond, std::move(u), std::move(f));
}
inline Formula arb_box(Formula f) { return detail::unary(Op::ArbBox, std::move(f)); }
inline Formula arb_diamond(Formula f) { return detail::unary(Op::ArbDiamond, std::move(f)); }

// Left-nested conjunction; the empty conjunction is Top.
inline Formula conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = conj(acc, fs[i]);
  return acc;
}

// Left-nested disjunction; the empty disjunction is Bot.
inline Formula disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = disj(acc, fs[i]);
  return acc;
}

inline bool is_unary(Op op) {
  return op == Op::Not || op == Op::Box || op == Op::Diamond || op == Op::UpdateBox || op == Op::UpdateDiamond ||
         op == Op::ArbBox || op == Op::ArbDiamond;
}

inline bool is_binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Implies || op == Op::Iff; }

// True iff no [*] / <*> occurs anywhere, including inside update clauses.
inline bool is_aul_pure(const Formula& f) {
  std::unordered_map<const Node*, bool> seen;
  auto go = [&](auto&& self, const Formula& g) -> bool {
    if (auto it = seen.find(g.id()); it != seen.end()) return it->second;
    bool r = true;
    switch (g.op()) {
      case Op::ArbBox:
      case Op::ArbDiamond:
        r = false;
        break;
      case Op::UpdateBox:
      case Op::UpdateDiamond:
        for (const Clause& c : g.update().clauses) r = r && self(self, c.pre) && self(self, c.post);
        r = r && self(self, g.lhs());
        break;
      default:
        if (is_unary(g.op())) r = self(self, g.lhs());
        if (is_binary(g.op())) r = self(self, g.lhs()) && self(self, g.rhs());
    }
    seen.emplace(g.id(), r);
    return r;
  };
  return go(go, f);
}

inline bool is_aul_pure(const Update& u) {
  for (const Clause& c : u.clauses)
    if (!is_aul_pure(c.pre) || !is_aul_pure(c.post)) return false;
  return true;
}

struct Signature {
  std::set<std::string> props;
  std::set<std::string> agents;

  friend bool operator==(const Signature&, const Signature&) = default;
};

// Every atom and agent occurring in f, including inside update clauses.
inline Signature signature(const Formula& f) {
  Signature sig;
  std::set<const Node*> seen;
  auto go = [&](auto&& self, const Formula& g) -> void {
    if (!seen.insert(g.id()).second) return;
    switch (g.op()) {
      case Op::Atom:
        sig.props.insert(g.name());
        return;
      case Op::Box:
      case Op::Diamond:
        sig.agents.insert(g.name());
        break;
      case Op::UpdateBox:
      case Op::UpdateDiamond:
        for (const Clause& c : g.update().clauses) {
          sig.agents.insert(c.agent);
          self(self, c.pre);
          self(self, c.post);
        }
        break;
      default:
        break;
    }
    if (is_unary(g.op())) self(self, g.lhs());
    if (is_binary(g.op())) {
      self(self, g.lhs());
      self(self, g.rhs());
    }
  };
  go(go, f);
  return sig;
}

// Rewrites every abbreviation into the core fragment
// {Atom, Top, Not, And, Box, UpdateBox, ArbBox}. Shared subterms stay shared.
class Desugarer {
 public:
  Formula operator()(const Formula& f) { return run(f); }

  Update operator()(const Update& u) {
    Update out;
    out.clauses.reserve(u.clauses.size());
    for (const Clause& c : u.clauses) out.clauses.push_back({run(c.pre), c.agent, run(c.post)});
    return out;
  }

 private:
  Formula run(const Formula& f) {
    if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second.second;
    Formula r = rewrite(f);
    memo_.emplace(f.id(), std::make_pair(f, r));
    return r;
  }

  Formula rewrite(const Formula& f) {
    switch (f.op()) {
      case Op::Atom:
      case Op::Top:
        return f;
      case Op::Bot:
        return neg(top());
      case Op::Not:
        return neg(run(f.lhs()));
      case Op::And:
        return conj(run(f.lhs()), run(f.rhs()));
      case Op::Or:
        return neg(conj(neg(run(f.lhs())), neg(run(f.rhs()))));
      case Op::Implies:
        return neg(conj(run(f.lhs()), neg(run(f.rhs()))));
      case Op::Iff: {
        Formula a = run(f.lhs());
        Formula b = run(f.rhs());
        return conj(neg(conj(a, neg(b))), neg(conj(b, neg(a))));
      }
      case Op::Box:
        return box(f.name(), run(f.lhs()));
      case Op::Diamond:
        return neg(box(f.name(), neg(run(f.lhs()))));
      case Op::UpdateBox:
        return update_box((*this)(f.update()), run(f.lhs()));
      case Op::UpdateDiamond:
        return neg(update_box((*this)(f.update()), neg(run(f.lhs()))));
      case Op::ArbBox:
        return arb_box(run(f.lhs()));
      case Op::ArbDiamond:
        return neg(arb_box(neg(run(f.lhs()))));
    }
    throw formula_error("unknown operator");
  }

  // Keeps the source formula alive so its address stays a valid key.
  std::unordered_map<const Node*, std::pair<Formula, Formula>> memo_;
};

inline Formula desugar(const Formula& f) { return Desugarer{}(f); }

inline bool is_core(const Formula& f) {
  switch (f.op()) {
    case Op::Atom:
    case Op::Top:
      return true;
    case Op::Not:
    case Op::Box:
    case Op::ArbBox:
      return is_core(f.lhs());
    case Op::And:
      return is_core(f.lhs()) && is_core(f.rhs());
    case Op::UpdateBox:
      for (const Clause& c : f.update().clauses)
        if (!is_core(c.pre) || !is_core(c.post)) return false;
      return is_core(f.lhs());
    default:
      return false;
  }
}

}  // namespace aaul
