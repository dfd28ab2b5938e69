// Coarsest bisimulation by signature-based partition refinement, plus the
// two derived objects the quantifier needs: characteristic formulas of
// classes, and the decomposition of each relation into arrow blocks.
//
// Modal (and AUL) formulas cannot tell bisimilar states apart, and on a
// finite model each class has a characteristic formula. So the state sets
// an update clause can name are exactly the unions of classes, and the
// arrow sets an update can retain are exactly the unions of arrow blocks.

#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <tuple>
#include <utility>
#include <vector>

#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"

namespace aaul {

struct Partition {
  // Blocks ordered by their smallest state; each block sorted.
  std::vector<std::vector<StateId>> blocks;
  std::vector<std::size_t> block_index;
  // levels[k][s] is the class of s after k refinement rounds; levels[0] is
  // the valuation split and levels.back() equals block_index.
  std::vector<std::vector<std::size_t>> levels;

  std::size_t rounds() const { return levels.size() - 1; }
  std::size_t size() const { return blocks.size(); }

  StateSet block_set(std::size_t b) const {
    StateSet out(block_index.size());
    for (StateId s : blocks[b]) out.set(s);
    return out;
  }
};

namespace detail {

// Renumbers keys by first occurrence in state order.
template <typename Key>
std::vector<std::size_t> number_by_first_occurrence(const std::vector<Key>& keys, std::size_t& count) {
  std::map<Key, std::size_t> ids;
  std::vector<std::size_t> out(keys.size());
  for (std::size_t s = 0; s < keys.size(); ++s) out[s] = ids.emplace(keys[s], ids.size()).first->second;
  count = ids.size();
  return out;
}

}  // namespace detail

inline Partition coarsest_partition(const KripkeModel& m) {
  const std::size_t n = m.num_states();
  Partition part;

  std::vector<std::vector<bool>> valuation(n, std::vector<bool>(m.props().size()));
  for (std::size_t p = 0; p < m.props().size(); ++p)
    for (StateId s = 0; s < n; ++s) valuation[s][p] = m.frame().truth[p].test(s);
  std::size_t count = 0;
  part.levels.push_back(detail::number_by_first_occurrence(valuation, count));

  // Each round splits by (current class, successor classes per agent). The
  // round that changes nothing is counted too, so rounds() >= 1.
  while (true) {
    const auto& cur = part.levels.back();
    using Sig = std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>>;
    std::vector<Sig> sigs(n);
    for (StateId s = 0; s < n; ++s) {
      sigs[s].first = cur[s];
      auto& succ = sigs[s].second;
      for (std::size_t a = 0; a < m.num_agents(); ++a) {
        const StateSet& row = m.successors(a, s);
        for (auto t = row.find_first(); t != StateSet::npos; t = row.find_next(t)) succ.emplace_back(a, cur[t]);
      }
      std::sort(succ.begin(), succ.end());
      succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
    }
    const std::size_t before = count;
    part.levels.push_back(detail::number_by_first_occurrence(sigs, count));
    if (count == before) break;
  }

  part.block_index = part.levels.back();
  part.blocks.assign(count, {});
  for (StateId s = 0; s < n; ++s) part.blocks[part.block_index[s]].push_back(s);
  return part;
}

inline bool bisimilar(const KripkeModel& m, StateId s, StateId t) {
  if (s >= m.num_states() || t >= m.num_states()) throw model_error("unknown state");
  const Partition part = coarsest_partition(m);
  return part.block_index[s] == part.block_index[t];
}

inline bool bisimilar(const KripkeModel& m, std::string_view s, std::string_view t) {
  return bisimilar(m, m.state_id(s), m.state_id(t));
}

// Builds characteristic formulas level by level, sharing subformulas.
class CharacteristicFormulas {
 public:
  CharacteristicFormulas(const KripkeModel& m, const Partition& part) : m_(m), part_(part) {
    memo_.resize(part.levels.size());
  }

  // Formula true exactly on final block b.
  Formula block(std::size_t b) { return at_level(part_.rounds(), part_.blocks.at(b).front()); }

 private:
  Formula at_level(std::size_t level, StateId rep) {
    const std::size_t cls = part_.levels[level][rep];
    auto& slot = memo_[level];
    if (auto it = slot.find(cls); it != slot.end()) return it->second;

    std::vector<Formula> parts;
    for (std::size_t p = 0; p < m_.props().size(); ++p) {
      Formula lit = atom(m_.props()[p]);
      parts.push_back(m_.frame().truth[p].test(rep) ? lit : neg(lit));
    }
    if (level > 0) {
      const auto& prev = part_.levels[level - 1];
      for (std::size_t a = 0; a < m_.num_agents(); ++a) {
        const StateSet& row = m_.successors(a, rep);
        std::map<std::size_t, StateId> succ;  // previous-level class -> representative
        for (auto t = row.find_first(); t != StateSet::npos; t = row.find_next(t)) succ.emplace(prev[t], t);
        std::vector<Formula> options;
        for (const auto& [_, t] : succ) options.push_back(at_level(level - 1, t));
        for (const Formula& o : options) parts.push_back(diamond(m_.agents()[a], o));
        parts.push_back(box(m_.agents()[a], disj_all(options)));
      }
    }
    Formula f = conj_all(parts);
    slot.emplace(cls, f);
    return f;
  }

  const KripkeModel& m_;
  const Partition& part_;
  std::vector<std::map<std::size_t, Formula>> memo_;
};

inline Formula characteristic_formula(const KripkeModel& m, const Partition& part, std::size_t block) {
  return CharacteristicFormulas(m, part).block(block);
}

struct ArrowBlock {
  std::size_t agent;
  std::size_t source_block;
  std::size_t target_block;
  std::vector<std::pair<StateId, StateId>> arrows;
};

// Nonempty blocks ordered by (agent, source block, target block).
inline std::vector<ArrowBlock> arrow_blocks(const KripkeModel& m, const Partition& part) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<std::pair<StateId, StateId>>> groups;
  for (std::size_t a = 0; a < m.num_agents(); ++a)
    for (const auto& [s, t] : m.arrows(a))
      groups[{a, part.block_index[s], part.block_index[t]}].emplace_back(s, t);
  std::vector<ArrowBlock> out;
  out.reserve(groups.size());
  for (auto& [key, arrows] : groups)
    out.push_back({std::get<0>(key), std::get<1>(key), std::get<2>(key), std::move(arrows)});
  return out;
}

}  // namespace aaul
