// Model checking for arbitrary arrow update logic.
//
// Formulas are evaluated bottom-up to truth sets. [*]phi is decided on the
// current model by enumerating every union of its arrow blocks (see
// bisim.hpp): each union is the result of some AUL arrow update, and every
// AUL arrow update produces one of them. The domain is recomputed at every
// nesting level because updates change which states are bisimilar.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/container_hash/hash.hpp>

#include "aaul/bisim.hpp"
#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"
#include "aaul/updates.hpp"

namespace aaul {

struct Budget {
  // Largest arrow-block count a single [*] may enumerate (2^n submodels).
  std::size_t max_arrow_blocks = 20;
  // Largest nesting of modal, update and quantifier operators.
  std::size_t max_recursion_depth = 64;
};

class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

struct BlockHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const { return boost::hash_range(v.begin(), v.end()); }
};

// Relations of the submodel that keeps exactly the blocks selected by mask.
inline Relations union_of_blocks(const KripkeModel& m, const std::vector<ArrowBlock>& blocks, std::uint64_t mask) {
  Relations rel = m.empty_relations();
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    for (const auto& [s, t] : blocks[i].arrows) rel[blocks[i].agent][s].set(t);
  }
  return rel;
}

inline void check_block_budget(std::size_t count, const Budget& budget) {
  if (count > budget.max_arrow_blocks)
    throw budget_exceeded("quantifier needs " + std::to_string(count) + " arrow blocks, budget is " +
                          std::to_string(budget.max_arrow_blocks));
  if (count >= 63) throw budget_exceeded("too many arrow blocks to enumerate");
}

// The update realizing a union of blocks: one clause per retained block,
// or a clause that matches nothing when the union is empty.
inline Update update_for_union(const KripkeModel& m, const Partition& part, const std::vector<ArrowBlock>& blocks,
                               std::uint64_t mask) {
  CharacteristicFormulas chi(m, part);
  Update u;
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (!((mask >> i) & 1u)) continue;
    const ArrowBlock& b = blocks[i];
    u.clauses.push_back({chi.block(b.source_block), m.agents()[b.agent], chi.block(b.target_block)});
  }
  if (u.clauses.empty()) u.clauses.push_back({bot(), m.num_agents() ? m.agents().front() : "a", bot()});
  return u;
}

}  // namespace detail

class Checker {
 public:
  explicit Checker(Budget budget = {}) : budget_(budget) {}

  const Budget& budget() const { return budget_; }

  StateSet truth_set(const KripkeModel& m, const Formula& f) {
    reset();
    Formula core = desugar_(f);
    return eval_in(m, core, 0);
  }

  bool satisfies(const KripkeModel& m, StateId s, const Formula& f) {
    if (s >= m.num_states()) throw model_error("unknown state");
    return truth_set(m, f).test(s);
  }

  bool satisfies(const KripkeModel& m, std::string_view s, const Formula& f) {
    return satisfies(m, m.state_id(s), f);
  }

  // For f = <*>phi: an AUL-pure update after which phi holds at s, built
  // from characteristic formulas, or nullopt if none exists.
  std::optional<Update> witness_update(const KripkeModel& m, StateId s, const Formula& f) {
    if (f.op() != Op::ArbDiamond) throw formula_error("witness_update expects a formula of the form <*>phi");
    if (s >= m.num_states()) throw model_error("unknown state");
    reset();
    Formula body = desugar_(f.lhs());
    const Partition part = coarsest_partition(m);
    const auto blocks = arrow_blocks(m, part);
    detail::check_block_budget(blocks.size(), budget_);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blocks.size()); ++mask) {
      KripkeModel sub = m.with_relations(detail::union_of_blocks(m, blocks, mask));
      if (eval_in(sub, body, 1).test(s)) return detail::update_for_union(m, part, blocks, mask);
    }
    return std::nullopt;
  }

  // Evaluator handle for apply_update; clause formulas may be surface syntax.
  Evaluator evaluator() {
    return [this](const KripkeModel& m, const Formula& f) { return truth_set(m, f); };
  }

 private:
  using Memo = std::unordered_map<const Node*, std::pair<Formula, StateSet>>;

  static constexpr std::size_t kMaxMemoEntries = std::size_t{1} << 18;

  void reset() {
    memo_.clear();
    memo_entries_ = 0;
    desugar_ = Desugarer{};
  }

  StateSet eval_in(const KripkeModel& m, const Formula& f, std::size_t depth) {
    auto key = m.fingerprint();
    auto it = memo_.find(key);
    if (it == memo_.end()) {
      if (memo_entries_ >= kMaxMemoEntries) {
        Memo scratch;
        return eval(m, scratch, f, depth);
      }
      it = memo_.emplace(std::move(key), Memo{}).first;
    }
    return eval(m, it->second, f, depth);
  }

  StateSet eval(const KripkeModel& m, Memo& memo, const Formula& f, std::size_t depth) {
    if (auto it = memo.find(f.id()); it != memo.end()) return it->second.second;
    StateSet r = compute(m, memo, f, depth);
    if (memo_entries_ < kMaxMemoEntries) {
      memo.emplace(f.id(), std::make_pair(f, r));
      ++memo_entries_;
    }
    return r;
  }

  void enter(std::size_t depth) const {
    if (depth > budget_.max_recursion_depth)
      throw budget_exceeded("recursion depth exceeds " + std::to_string(budget_.max_recursion_depth));
  }

  StateSet compute(const KripkeModel& m, Memo& memo, const Formula& f, std::size_t depth) {
    const std::size_t n = m.num_states();
    switch (f.op()) {
      case Op::Atom:
        return m.truth_set(f.name());
      case Op::Top: {
        StateSet all(n);
        return all.set();
      }
      case Op::Not:
        return ~eval(m, memo, f.lhs(), depth);
      case Op::And:
        return eval(m, memo, f.lhs(), depth) & eval(m, memo, f.rhs(), depth);
      case Op::Box: {
        enter(depth + 1);
        const std::size_t a = m.agent_id(f.name());
        const StateSet body = eval(m, memo, f.lhs(), depth + 1);
        StateSet r(n);
        for (StateId s = 0; s < n; ++s) r[s] = m.successors(a, s).is_subset_of(body);
        return r;
      }
      case Op::UpdateBox: {
        enter(depth + 1);
        Evaluator clause_eval = [&](const KripkeModel& base, const Formula& g) {
          return eval_in(base, g, depth + 1);
        };
        KripkeModel next = apply_update(m, f.update(), clause_eval);
        return eval_in(next, f.lhs(), depth + 1);
      }
      case Op::ArbBox:
        enter(depth + 1);
        return arb_box(m, f.lhs(), depth + 1);
      default:
        throw formula_error("internal: formula not desugared");
    }
  }

  StateSet arb_box(const KripkeModel& m, const Formula& body, std::size_t depth) {
    StateSet acc(m.num_states());
    acc.set();
    if (body.op() == Op::Top) return acc;
    const Partition part = coarsest_partition(m);
    const auto blocks = arrow_blocks(m, part);
    detail::check_block_budget(blocks.size(), budget_);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << blocks.size()); ++mask) {
      KripkeModel sub = m.with_relations(detail::union_of_blocks(m, blocks, mask));
      acc &= eval_in(sub, body, depth);
      // An empty intersection cannot grow back.
      if (acc.none()) break;
    }
    return acc;
  }

  Budget budget_;
  Desugarer desugar_;
  std::unordered_map<std::vector<std::uint64_t>, Memo, detail::BlockHash> memo_;
  std::size_t memo_entries_ = 0;
};

inline bool satisfies(const KripkeModel& m, StateId s, const Formula& f, Budget b = {}) {
  return Checker(b).satisfies(m, s, f);
}

inline StateSet truth_set(const KripkeModel& m, const Formula& f, Budget b = {}) { return Checker(b).truth_set(m, f); }

inline std::optional<Update> witness_update(const KripkeModel& m, StateId s, const Formula& f, Budget b = {}) {
  return Checker(b).witness_update(m, s, f);
}

}  // namespace aaul
