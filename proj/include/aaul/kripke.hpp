// Finite multi-agent Kripke models, their text format and DOT export.
//
// A model is split into an immutable Frame (states, agents, valuation,
// point) and the per-agent accessibility relations. Arrow updates only
// touch the relations, so derived models share the frame.
//
// Text format (line oriented, '#' starts a comment):
//
//   states: s0 s1 s2
//   agent a: s0->s0 s1->s1
//   agent b: s0->s1 s1->s0
//   val p: s0
//   point: s0

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "aaul/syntax.hpp"

namespace aaul {

using StateId = std::size_t;
using StateSet = boost::dynamic_bitset<std::uint64_t>;

class model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Frame {
  std::vector<std::string> states;
  std::vector<std::string> agents;
  // Declared propositions in order, each with a nonempty truth set.
  std::vector<std::string> props;
  std::vector<StateSet> truth;
  std::optional<StateId> point;

  std::unordered_map<std::string, StateId> state_index;
  std::unordered_map<std::string, std::size_t> agent_index;
  std::unordered_map<std::string, std::size_t> prop_index;

  friend bool operator==(const Frame& a, const Frame& b) {
    return a.states == b.states && a.agents == b.agents && a.props == b.props && a.truth == b.truth &&
           a.point == b.point;
  }
};

// relations[agent][source] = set of targets.
using Relations = std::vector<std::vector<StateSet>>;

class KripkeModel {
 public:
  KripkeModel(std::shared_ptr<const Frame> frame, Relations rel) : frame_(std::move(frame)), rel_(std::move(rel)) {
    const std::size_t n = frame_->states.size();
    if (rel_.size() != frame_->agents.size()) throw model_error("relation count does not match agent count");
    for (const auto& per_agent : rel_) {
      if (per_agent.size() != n) throw model_error("relation row count does not match state count");
      for (const auto& row : per_agent)
        if (row.size() != n) throw model_error("relation row has wrong width");
    }
  }

  const Frame& frame() const { return *frame_; }
  const std::shared_ptr<const Frame>& shared_frame() const { return frame_; }
  const Relations& relations() const { return rel_; }

  std::size_t num_states() const { return frame_->states.size(); }
  std::size_t num_agents() const { return frame_->agents.size(); }
  const std::vector<std::string>& states() const { return frame_->states; }
  const std::vector<std::string>& agents() const { return frame_->agents; }
  const std::vector<std::string>& props() const { return frame_->props; }
  std::optional<StateId> point() const { return frame_->point; }

  StateId state_id(std::string_view name) const {
    auto it = frame_->state_index.find(std::string(name));
    if (it == frame_->state_index.end()) throw model_error("unknown state '" + std::string(name) + "'");
    return it->second;
  }

  bool has_agent(std::string_view a) const { return frame_->agent_index.count(std::string(a)) != 0; }

  std::size_t agent_id(std::string_view a) const {
    auto it = frame_->agent_index.find(std::string(a));
    if (it == frame_->agent_index.end()) throw model_error("unknown agent '" + std::string(a) + "'");
    return it->second;
  }

  const StateSet& successors(std::size_t agent, StateId s) const { return rel_[agent][s]; }

  bool has_arrow(std::size_t agent, StateId s, StateId t) const { return rel_[agent][s].test(t); }

  // Undeclared propositions are false everywhere.
  StateSet truth_set(std::string_view prop) const {
    auto it = frame_->prop_index.find(std::string(prop));
    if (it == frame_->prop_index.end()) return StateSet(num_states());
    return frame_->truth[it->second];
  }

  std::vector<std::pair<StateId, StateId>> arrows(std::size_t agent) const {
    std::vector<std::pair<StateId, StateId>> out;
    for (StateId s = 0; s < num_states(); ++s)
      for (auto t = rel_[agent][s].find_first(); t != StateSet::npos; t = rel_[agent][s].find_next(t))
        out.emplace_back(s, t);
    return out;
  }

  std::size_t num_arrows() const {
    std::size_t n = 0;
    for (const auto& per_agent : rel_)
      for (const auto& row : per_agent) n += row.count();
    return n;
  }

  // Same frame, different arrows.
  KripkeModel with_relations(Relations rel) const { return KripkeModel(frame_, std::move(rel)); }

  Relations empty_relations() const {
    return Relations(num_agents(), std::vector<StateSet>(num_states(), StateSet(num_states())));
  }

  // Flattened relation bits; equal fingerprints on one frame mean equal models.
  std::vector<std::uint64_t> fingerprint() const {
    std::vector<std::uint64_t> out;
    for (const auto& per_agent : rel_)
      for (const auto& row : per_agent) boost::to_block_range(row, std::back_inserter(out));
    return out;
  }

  friend bool operator==(const KripkeModel& a, const KripkeModel& b) {
    return (a.frame_ == b.frame_ || *a.frame_ == *b.frame_) && a.rel_ == b.rel_;
  }
  friend bool operator!=(const KripkeModel& a, const KripkeModel& b) { return !(a == b); }

 private:
  std::shared_ptr<const Frame> frame_;
  Relations rel_;
};

// Incremental construction with validation. Duplicate arrows collapse.
class ModelBuilder {
 public:
  StateId add_state(const std::string& name) {
    if (!is_identifier(name)) throw model_error("invalid state name '" + name + "'");
    if (!state_index_.emplace(name, states_.size()).second) throw model_error("duplicate state '" + name + "'");
    states_.push_back(name);
    return states_.size() - 1;
  }

  std::size_t add_agent(const std::string& name) {
    if (!is_identifier(name)) throw model_error("invalid agent name '" + name + "'");
    if (!agent_index_.emplace(name, agents_.size()).second) throw model_error("duplicate agent '" + name + "'");
    agents_.push_back(name);
    arrows_.emplace_back();
    return agents_.size() - 1;
  }

  void add_arrow(const std::string& agent, const std::string& from, const std::string& to) {
    auto it = agent_index_.find(agent);
    if (it == agent_index_.end()) throw model_error("unknown agent '" + agent + "'");
    arrows_[it->second].emplace_back(from, to);
  }

  void add_prop(const std::string& prop, std::vector<std::string> states) {
    if (!is_identifier(prop)) throw model_error("invalid proposition name '" + prop + "'");
    for (const auto& [name, _] : val_)
      if (name == prop) throw model_error("duplicate proposition '" + prop + "'");
    val_.emplace_back(prop, std::move(states));
  }

  void set_point(const std::string& state) { point_ = state; }

  KripkeModel build() const {
    auto frame = std::make_shared<Frame>();
    frame->states = states_;
    frame->state_index = state_index_;
    frame->agents = agents_;
    frame->agent_index = agent_index_;
    const std::size_t n = states_.size();
    auto lookup = [&](const std::string& s) -> StateId {
      auto it = state_index_.find(s);
      if (it == state_index_.end()) throw model_error("reference to undeclared state '" + s + "'");
      return it->second;
    };
    for (const auto& [prop, members] : val_) {
      StateSet set(n);
      for (const auto& s : members) set.set(lookup(s));
      if (set.none()) continue;
      frame->prop_index.emplace(prop, frame->props.size());
      frame->props.push_back(prop);
      frame->truth.push_back(std::move(set));
    }
    if (point_) frame->point = lookup(*point_);
    Relations rel(agents_.size(), std::vector<StateSet>(n, StateSet(n)));
    for (std::size_t a = 0; a < agents_.size(); ++a)
      for (const auto& [from, to] : arrows_[a]) rel[a][lookup(from)].set(lookup(to));
    return KripkeModel(std::move(frame), std::move(rel));
  }

 private:
  std::vector<std::string> states_;
  std::unordered_map<std::string, StateId> state_index_;
  std::vector<std::string> agents_;
  std::unordered_map<std::string, std::size_t> agent_index_;
  std::vector<std::vector<std::pair<std::string, std::string>>> arrows_;
  std::vector<std::pair<std::string, std::vector<std::string>>> val_;
  std::optional<std::string> point_;
};

namespace detail {

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace detail

inline KripkeModel load_model(std::string_view text) {
  ModelBuilder builder;
  bool have_states = false;
  std::vector<std::pair<std::size_t, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t no = 0;
    while (std::getline(in, line)) {
      ++no;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      line = detail::trim(line);
      if (!line.empty()) lines.emplace_back(no, line);
    }
  }
  auto err = [](std::size_t no, const std::string& msg) { return model_error("line " + std::to_string(no) + ": " + msg); };

  // States first, wherever they appear, so arrows may precede them.
  for (const auto& [no, line] : lines) {
    if (line.rfind("states:", 0) != 0) continue;
    if (have_states) throw err(no, "duplicate 'states:' line");
    have_states = true;
    try {
      for (const auto& s : detail::split_ws(std::string_view(line).substr(7))) builder.add_state(s);
    } catch (const model_error& e) {
      throw err(no, e.what());
    }
  }
  if (!have_states) throw model_error("missing 'states:' line");

  bool have_point = false;
  for (const auto& [no, line] : lines) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw err(no, "expected 'keyword: ...'");
    const auto head = detail::split_ws(std::string_view(line).substr(0, colon));
    const auto body = detail::split_ws(std::string_view(line).substr(colon + 1));
    try {
      if (head.size() == 1 && head[0] == "states") continue;
      if (head.size() == 2 && head[0] == "agent") {
        builder.add_agent(head[1]);
        for (const auto& arrow : body) {
          const auto sep = arrow.find("->");
          if (sep == std::string::npos) throw model_error("malformed arrow '" + arrow + "'");
          builder.add_arrow(head[1], arrow.substr(0, sep), arrow.substr(sep + 2));
        }
      } else if (head.size() == 2 && head[0] == "val") {
        builder.add_prop(head[1], body);
      } else if (head.size() == 1 && head[0] == "point") {
        if (have_point) throw model_error("duplicate 'point:' line");
        if (body.size() != 1) throw model_error("'point:' takes exactly one state");
        have_point = true;
        builder.set_point(body[0]);
      } else {
        throw model_error("unknown directive '" + detail::trim(std::string_view(line).substr(0, colon)) + "'");
      }
    } catch (const model_error& e) {
      throw err(no, e.what());
    }
  }
  try {
    return builder.build();
  } catch (const model_error& e) {
    throw model_error(std::string("invalid model: ") + e.what());
  }
}

inline std::string save_model(const KripkeModel& m) {
  std::string out = "states:";
  for (const auto& s : m.states()) out += ' ' + s;
  out += '\n';
  for (std::size_t a = 0; a < m.num_agents(); ++a) {
    out += "agent " + m.agents()[a] + ':';
    for (const auto& [s, t] : m.arrows(a)) out += ' ' + m.states()[s] + "->" + m.states()[t];
    out += '\n';
  }
  for (std::size_t p = 0; p < m.props().size(); ++p) {
    out += "val " + m.props()[p] + ':';
    const StateSet& set = m.frame().truth[p];
    for (auto s = set.find_first(); s != StateSet::npos; s = set.find_next(s)) out += ' ' + m.states()[s];
    out += '\n';
  }
  if (m.point()) out += "point: " + m.states()[*m.point()] + '\n';
  return out;
}

inline std::string export_dot(const KripkeModel& m) {
  auto quote = [](const std::string& s) { return '"' + s + '"'; };
  std::string out = "digraph kripke {\n";
  for (StateId s = 0; s < m.num_states(); ++s) {
    std::string label = m.states()[s];
    for (std::size_t p = 0; p < m.props().size(); ++p)
      if (m.frame().truth[p].test(s)) label += "\\n" + m.props()[p];
    const bool pointed = m.point() && *m.point() == s;
    out += "  " + quote(m.states()[s]) + " [label=" + quote(label) + ", shape=" +
           (pointed ? "doublecircle" : "circle") + "];\n";
  }
  for (std::size_t a = 0; a < m.num_agents(); ++a)
    for (const auto& [s, t] : m.arrows(a))
      out += "  " + quote(m.states()[s]) + " -> " + quote(m.states()[t]) + " [label=" + quote(m.agents()[a]) + "];\n";
  out += "}\n";
  return out;
}

}  // namespace aaul
