// Reference evaluator used to cross-check Checker.
//
// It shares no evaluation code with Checker: it works pointwise on surface
// syntax (no desugaring, no truth-set memo), and decides [*]phi by writing
// each union of arrow blocks out as update text built from characteristic
// formulas, parsing it back, and running it through apply_update.

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "aaul/bisim.hpp"
#include "aaul/checker.hpp"
#include "aaul/kripke.hpp"
#include "aaul/syntax.hpp"
#include "aaul/updates.hpp"

namespace aaul {

class BruteForceOracle {
 public:
  explicit BruteForceOracle(Budget budget = {}) : budget_(budget) {}

  bool holds(const KripkeModel& m, StateId s, const Formula& f) {
    if (s >= m.num_states()) throw model_error("unknown state");
    synthesized_.clear();
    return eval(m, s, f, 0);
  }

 private:
  // Parsed single-clause updates for every arrow block of one model, with
  // the truth sets of their formulas on that model.
  struct Synthesized {
    std::vector<Clause> clauses;
    Clause nothing;
    std::unordered_map<const Node*, StateSet> truth;
  };

  void enter(std::size_t depth) const {
    if (depth > budget_.max_recursion_depth)
      throw budget_exceeded("recursion depth exceeds " + std::to_string(budget_.max_recursion_depth));
  }

  StateSet pointwise(const KripkeModel& m, const Formula& f, std::size_t depth) {
    StateSet out(m.num_states());
    for (StateId t = 0; t < m.num_states(); ++t) out[t] = eval(m, t, f, depth);
    return out;
  }

  bool eval(const KripkeModel& m, StateId s, const Formula& f, std::size_t depth) {
    switch (f.op()) {
      case Op::Atom:
        return m.truth_set(f.name()).test(s);
      case Op::Top:
        return true;
      case Op::Bot:
        return false;
      case Op::Not:
        return !eval(m, s, f.lhs(), depth);
      case Op::And:
        return eval(m, s, f.lhs(), depth) && eval(m, s, f.rhs(), depth);
      case Op::Or:
        return eval(m, s, f.lhs(), depth) || eval(m, s, f.rhs(), depth);
      case Op::Implies:
        return !eval(m, s, f.lhs(), depth) || eval(m, s, f.rhs(), depth);
      case Op::Iff:
        return eval(m, s, f.lhs(), depth) == eval(m, s, f.rhs(), depth);
      case Op::Box:
      case Op::Diamond: {
        enter(depth + 1);
        const bool universal = f.op() == Op::Box;
        const StateSet& row = m.successors(m.agent_id(f.name()), s);
        for (auto t = row.find_first(); t != StateSet::npos; t = row.find_next(t))
          if (eval(m, t, f.lhs(), depth + 1) != universal) return !universal;
        return universal;
      }
      case Op::UpdateBox:
      case Op::UpdateDiamond: {
        // Updates are functional, so box and diamond coincide.
        enter(depth + 1);
        Evaluator ev = [&](const KripkeModel& base, const Formula& g) { return pointwise(base, g, depth + 1); };
        return eval(apply_update(m, f.update(), ev), s, f.lhs(), depth + 1);
      }
      case Op::ArbBox:
      case Op::ArbDiamond:
        enter(depth + 1);
        return quantify(m, s, f.lhs(), f.op() == Op::ArbBox, depth + 1);
    }
    throw formula_error("unknown operator");
  }

  Synthesized& synthesize(const KripkeModel& m, const Partition& part, const std::vector<ArrowBlock>& blocks,
                          std::size_t depth) {
    auto key = m.fingerprint();
    if (auto it = synthesized_.find(key); it != synthesized_.end()) return *it->second;
    auto syn = std::make_unique<Synthesized>();
    CharacteristicFormulas chi(m, part);
    for (const ArrowBlock& b : blocks) {
      Update one{{Clause{chi.block(b.source_block), m.agents()[b.agent], chi.block(b.target_block)}}};
      syn->clauses.push_back(parse_update(print_update(one)).clauses.front());
    }
    const std::string agent = m.num_agents() ? m.agents().front() : "a";
    syn->nothing = parse_update("{(false, " + agent + ", false)}").clauses.front();
    for (const Clause& c : syn->clauses) {
      syn->truth.emplace(c.pre.id(), pointwise(m, c.pre, depth));
      syn->truth.emplace(c.post.id(), pointwise(m, c.post, depth));
    }
    syn->truth.emplace(syn->nothing.pre.id(), StateSet(m.num_states()));
    syn->truth.emplace(syn->nothing.post.id(), StateSet(m.num_states()));
    return *synthesized_.emplace(std::move(key), std::move(syn)).first->second;
  }

  bool quantify(const KripkeModel& m, StateId s, const Formula& body, bool universal, std::size_t depth) {
    const Partition part = coarsest_partition(m);
    const auto blocks = arrow_blocks(m, part);
    detail::check_block_budget(blocks.size(), budget_);
    Synthesized& syn = synthesize(m, part, blocks, depth);
    Evaluator cached = [&](const KripkeModel& base, const Formula& g) {
      if (auto it = syn.truth.find(g.id()); it != syn.truth.end()) return it->second;
      return pointwise(base, g, depth);
    };
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blocks.size()); ++mask) {
      Update u;
      for (std::size_t i = 0; i < blocks.size(); ++i)
        if ((mask >> i) & 1u) u.clauses.push_back(syn.clauses[i]);
      if (u.clauses.empty()) u.clauses.push_back(syn.nothing);
      if (eval(apply_update(m, u, cached), s, body, depth) != universal) return !universal;
    }
    return universal;
  }

  Budget budget_;
  std::unordered_map<std::vector<std::uint64_t>, std::unique_ptr<Synthesized>, detail::BlockHash> synthesized_;
};

inline bool brute_force_arb_oracle(const KripkeModel& m, StateId s, const Formula& f, Budget b = {}) {
  return BruteForceOracle(b).holds(m, s, f);
}

}  // namespace aaul
