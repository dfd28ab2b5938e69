// Arrow update execution: M*U keeps exactly the arrows that match at least
// one clause, with every clause formula evaluated on the input model.

#pragma once

#include <functional>
#include <vector>

#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"

namespace aaul {

// Truth set of a formula on a model. Supplied by the checker so that this
// module does not depend on it.
using Evaluator = std::function<StateSet(const KripkeModel&, const Formula&)>;

struct Arrow {
  StateId source;
  std::string agent;
  StateId target;
};

inline bool arrow_matches(const KripkeModel& m, const Arrow& arrow, const Clause& clause, const Evaluator& eval) {
  if (!m.has_arrow(m.agent_id(arrow.agent), arrow.source, arrow.target))
    throw model_error("arrow is not in the model");
  if (clause.agent != arrow.agent) return false;
  return eval(m, clause.pre).test(arrow.source) && eval(m, clause.post).test(arrow.target);
}

// Clauses naming an agent the model does not declare match nothing.
inline KripkeModel apply_update(const KripkeModel& m, const Update& u, const Evaluator& eval) {
  if (u.clauses.empty()) throw formula_error("arrow update needs at least one clause");
  Relations out = m.empty_relations();
  for (const Clause& c : u.clauses) {
    if (!m.has_agent(c.agent)) continue;
    const std::size_t a = m.agent_id(c.agent);
    const StateSet pre = eval(m, c.pre);
    const StateSet post = eval(m, c.post);
    for (auto s = pre.find_first(); s != StateSet::npos; s = pre.find_next(s)) out[a][s] |= m.successors(a, s) & post;
  }
  return m.with_relations(std::move(out));
}

}  // namespace aaul
