// Bounded model search: enumerate every pointed model with up to N states
// over fixed agents and propositions, and report the first one that
// satisfies a formula at its point (state s0).
//
// Exponential in N^2 * |agents|. Absence of a model up to N states says
// nothing about satisfiability in general.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aaul/checker.hpp"
#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"

namespace aaul {

struct SatSearchOptions {
  std::size_t max_states = 2;
  std::vector<std::string> agents;
  std::vector<std::string> props;
  Budget budget;
  // Refuse to start a state count whose candidate total would pass this.
  std::uint64_t max_models = 2'000'000;
};

struct SatSearchResult {
  std::optional<KripkeModel> model;
  std::uint64_t examined = 0;
  // Candidates whose check ran out of quantifier budget.
  std::uint64_t skipped = 0;
  // Largest state count searched exhaustively.
  std::size_t searched_up_to = 0;
  bool hit_model_cap = false;
};

namespace detail {

// Candidates for n states: valuations of s1..s(n-1) are non-decreasing
// (any model is isomorphic to one of these), relations are unconstrained.
inline std::optional<std::uint64_t> candidate_count(std::size_t n, std::size_t agents, std::size_t props) {
  const std::size_t rel_bits = n * n * agents;
  const std::size_t val_bits = props;
  if (rel_bits >= 63 || val_bits >= 20) return std::nullopt;
  const std::uint64_t labels = std::uint64_t{1} << val_bits;
  // labels choices for s0 times multisets of size n-1 from labels.
  double multisets = 1;
  for (std::size_t i = 1; i < n; ++i) multisets = multisets * double(labels + i - 1) / double(i);
  const double total = double(labels) * multisets * double(std::uint64_t{1} << rel_bits);
  if (total > 9e18) return std::nullopt;
  return static_cast<std::uint64_t>(total + 0.5);
}

}  // namespace detail

inline SatSearchResult sat_search(const Formula& f, const SatSearchOptions& opt) {
  for (const std::string& a : signature(f).agents) {
    bool known = false;
    for (const std::string& b : opt.agents) known = known || a == b;
    if (!known) throw model_error("formula uses agent '" + a + "' which is not in the agent list");
  }
  SatSearchResult res;
  Checker checker(opt.budget);
  const std::size_t np = opt.props.size();
  const std::size_t na = opt.agents.size();
  std::uint64_t spent = 0;

  for (std::size_t n = 1; n <= opt.max_states; ++n) {
    const auto count = detail::candidate_count(n, na, np);
    if (!count || spent + *count > opt.max_models) {
      res.hit_model_cap = true;
      return res;
    }
    spent += *count;

    std::vector<std::uint64_t> labels(n, 0);
    const std::uint64_t label_limit = std::uint64_t{1} << np;
    const std::size_t rel_bits = n * n * na;
    while (true) {
      ModelBuilder mb;
      for (std::size_t s = 0; s < n; ++s) mb.add_state("s" + std::to_string(s));
      for (const std::string& a : opt.agents) mb.add_agent(a);
      for (std::size_t p = 0; p < np; ++p) {
        std::vector<std::string> where;
        for (std::size_t s = 0; s < n; ++s)
          if ((labels[s] >> p) & 1u) where.push_back("s" + std::to_string(s));
        mb.add_prop(opt.props[p], where);
      }
      mb.set_point("s0");
      const KripkeModel frame_model = mb.build();

      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << rel_bits); ++bits) {
        Relations rel = frame_model.empty_relations();
        std::size_t i = 0;
        for (std::size_t a = 0; a < na; ++a)
          for (std::size_t s = 0; s < n; ++s)
            for (std::size_t t = 0; t < n; ++t, ++i)
              if ((bits >> i) & 1u) rel[a][s].set(t);
        KripkeModel m = frame_model.with_relations(std::move(rel));
        ++res.examined;
        try {
          if (checker.satisfies(m, 0, f)) {
            res.model = std::move(m);
            res.searched_up_to = n - 1;
            return res;
          }
        } catch (const budget_exceeded&) {
          ++res.skipped;
        }
      }

      // Next label tuple: s0 free, s1..s(n-1) non-decreasing.
      std::size_t pos = n;
      while (pos-- > 0) {
        if (labels[pos] + 1 < label_limit) {
          ++labels[pos];
          for (std::size_t j = std::max<std::size_t>(pos + 1, 1); j < n; ++j) labels[j] = pos == 0 ? 0 : labels[pos];
          break;
        }
      }
      if (pos == static_cast<std::size_t>(-1)) break;
    }
    res.searched_up_to = n;
  }
  return res;
}

}  // namespace aaul
