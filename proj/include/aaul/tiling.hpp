// Wang tiling instances, a periodic tiling solver, the reduction formula
// psi_types, and finite torus versions of the model that witnesses it.
//
// Coordinates follow the reduction: a cell is (n, m), "up" increments m and
// "right" increments n. Direction agents are named u, d, l, r.
//
// Tile file format: one tile per line, '#' comments, optional color list.
//
//   colors: red blue            # optional; if present, colors must be declared
//   tile t0 N=red E=blue S=red W=blue

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aaul/checker.hpp"
#include "aaul/formula.hpp"
#include "aaul/kripke.hpp"
#include "aaul/syntax.hpp"

namespace aaul {

class tiling_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum Side : std::size_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

inline constexpr std::array<char, 4> kSideLetter{'N', 'E', 'S', 'W'};

struct TileType {
  std::string name;
  std::array<std::size_t, 4> side;  // color index per Side

  friend bool operator==(const TileType&, const TileType&) = default;
};

struct TileInstance {
  std::vector<std::string> colors;
  std::vector<TileType> types;

  const std::string& color(std::size_t tile, Side s) const { return colors[types[tile].side[s]]; }

  friend bool operator==(const TileInstance&, const TileInstance&) = default;
};

inline TileInstance parse_tiles(std::string_view text) {
  TileInstance inst;
  std::map<std::string, std::size_t> color_index;
  std::map<std::string, std::size_t> names;
  bool declared_colors = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t no = 0;
  auto fail = [&](const std::string& msg) { throw tiling_error("line " + std::to_string(no) + ": " + msg); };
  while (std::getline(in, line)) {
    ++no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream words(line);
    std::string head;
    if (!(words >> head)) continue;
    if (head == "colors:") {
      if (declared_colors || !inst.types.empty()) fail("'colors:' must come once, before any tile");
      declared_colors = true;
      std::string c;
      while (words >> c) {
        if (!is_identifier(c)) fail("invalid color '" + c + "'");
        if (color_index.emplace(c, inst.colors.size()).second) inst.colors.push_back(c);
      }
      continue;
    }
    if (head != "tile") fail("expected 'tile' or 'colors:'");
    TileType t;
    if (!(words >> t.name) || !is_identifier(t.name)) fail("missing or invalid tile name");
    if (!names.emplace(t.name, inst.types.size()).second) fail("duplicate tile name '" + t.name + "'");
    std::array<bool, 4> seen{};
    std::string field;
    while (words >> field) {
      const auto eq = field.find('=');
      if (eq != 1) fail("expected SIDE=color, got '" + field + "'");
      std::size_t side = 4;
      for (std::size_t s = 0; s < 4; ++s)
        if (field[0] == kSideLetter[s]) side = s;
      if (side == 4) fail("unknown side '" + field.substr(0, 1) + "'");
      if (seen[side]) fail("side " + field.substr(0, 1) + " given twice");
      const std::string c = field.substr(2);
      if (!is_identifier(c)) fail("invalid color '" + c + "'");
      auto it = color_index.find(c);
      if (it == color_index.end()) {
        if (declared_colors) fail("unknown color '" + c + "'");
        it = color_index.emplace(c, inst.colors.size()).first;
        inst.colors.push_back(c);
      }
      seen[side] = true;
      t.side[side] = it->second;
    }
    for (std::size_t s = 0; s < 4; ++s)
      if (!seen[s]) fail("tile '" + t.name + "' is missing side " + std::string(1, kSideLetter[s]));
    inst.types.push_back(std::move(t));
  }
  if (inst.types.empty()) throw tiling_error("no tiles");
  return inst;
}

struct PeriodicTiling {
  std::size_t period = 0;
  std::vector<std::size_t> grid;  // tile index of (n, m) at n * period + m

  std::size_t at(std::size_t n, std::size_t m) const { return grid[n * period + m]; }
  std::size_t& at(std::size_t n, std::size_t m) { return grid[n * period + m]; }

  friend bool operator==(const PeriodicTiling&, const PeriodicTiling&) = default;
};

// Torus constraints: N(n,m) = S(n,m+1) and E(n,m) = W(n+1,m), indices mod k.
inline bool is_valid_torus_tiling(const TileInstance& inst, const PeriodicTiling& t) {
  const std::size_t k = t.period;
  if (k == 0 || t.grid.size() != k * k) return false;
  for (std::size_t i : t.grid)
    if (i >= inst.types.size()) return false;
  for (std::size_t n = 0; n < k; ++n)
    for (std::size_t m = 0; m < k; ++m) {
      const TileType& here = inst.types[t.at(n, m)];
      if (here.side[kNorth] != inst.types[t.at(n, (m + 1) % k)].side[kSouth]) return false;
      if (here.side[kEast] != inst.types[t.at((n + 1) % k, m)].side[kWest]) return false;
    }
  return true;
}

namespace detail {

class TorusSolver {
 public:
  TorusSolver(const TileInstance& inst, std::size_t k) : inst_(inst), k_(k) {}

  std::optional<PeriodicTiling> solve() {
    const std::size_t cells = k_ * k_;
    std::vector<std::vector<bool>> domains(cells, std::vector<bool>(inst_.types.size(), true));
    assigned_.assign(cells, kUnassigned);
    if (!search(0, domains)) return std::nullopt;
    return PeriodicTiling{k_, assigned_};
  }

  std::size_t nodes() const { return nodes_; }

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);

  struct Link {
    std::size_t cell;
    Side mine;
    Side theirs;
  };

  std::array<Link, 4> links(std::size_t cell) const {
    const std::size_t n = cell / k_, m = cell % k_;
    auto idx = [&](std::size_t a, std::size_t b) { return a * k_ + b; };
    return {{{idx(n, (m + 1) % k_), kNorth, kSouth},
             {idx(n, (m + k_ - 1) % k_), kSouth, kNorth},
             {idx((n + 1) % k_, m), kEast, kWest},
             {idx((n + k_ - 1) % k_, m), kWest, kEast}}};
  }

  bool fits(std::size_t tile, Side mine, std::size_t other, Side theirs) const {
    return inst_.types[tile].side[mine] == inst_.types[other].side[theirs];
  }

  bool search(std::size_t cell, const std::vector<std::vector<bool>>& domains) {
    if (cell == k_ * k_) return true;
    for (std::size_t t = 0; t < inst_.types.size(); ++t) {
      if (!domains[cell][t]) continue;
      ++nodes_;
      bool ok = true;
      for (const Link& l : links(cell)) {
        const std::size_t other = l.cell == cell ? t : assigned_[l.cell];
        if (other != kUnassigned && !fits(t, l.mine, other, l.theirs)) ok = false;
      }
      if (!ok) continue;
      assigned_[cell] = t;
      // Forward check: prune unassigned neighbours.
      auto next = domains;
      for (const Link& l : links(cell)) {
        if (l.cell == cell || assigned_[l.cell] != kUnassigned) continue;
        bool any = false;
        for (std::size_t u = 0; u < inst_.types.size(); ++u) {
          if (next[l.cell][u] && !fits(t, l.mine, u, l.theirs)) next[l.cell][u] = false;
          any = any || next[l.cell][u];
        }
        if (!any) ok = false;
      }
      if (ok && search(cell + 1, next)) return true;
      assigned_[cell] = kUnassigned;
    }
    return false;
  }

  const TileInstance& inst_;
  std::size_t k_;
  std::vector<std::size_t> assigned_;
  std::size_t nodes_ = 0;
};

}  // namespace detail

// Lexicographically first k-periodic tiling (cells in (n, m) order, tiles in
// instance order), or nullopt if none exists for this period.
inline std::optional<PeriodicTiling> find_periodic_tiling(const TileInstance& inst, std::size_t k) {
  if (k == 0) throw tiling_error("period must be at least 1");
  return detail::TorusSolver(inst, k).solve();
}

// Rows from the top (largest m) down, tiles left to right (increasing n).
inline std::string format_tiling(const TileInstance& inst, const PeriodicTiling& t) {
  std::string out;
  for (std::size_t row = t.period; row-- > 0;) {
    for (std::size_t n = 0; n < t.period; ++n) {
      if (n) out += ' ';
      out += inst.types[t.at(n, row)].name;
    }
    out += '\n';
  }
  return out;
}

// Proposition and agent names used by the encoding and the witness models.
namespace names {
inline constexpr const char* kOrigin = "p";
inline std::string tile(const std::string& t) { return "p_" + t; }
inline std::string color(Side s, const std::string& c) { return std::string(1, kSideLetter[s]) + "_" + c; }
inline std::string cell(std::size_t n, std::size_t m) { return "cell_" + std::to_string(n) + "_" + std::to_string(m); }
inline const std::array<std::string, 4> kDirections{"u", "d", "l", "r"};
}  // namespace names

// psi_types together with each of its named parts.
struct TilingEncoding {
  Formula psi_types;
  // The 24 top-level conjuncts in order.
  std::vector<std::pair<std::string, Formula>> conjuncts;
  // Every named subformula, including refl_a and the conjuncts.
  std::map<std::string, Formula> parts;
  std::map<std::string, Update> updates;  // U_u, U_d, U_l, U_r
  std::vector<std::pair<std::string, std::string>> commute_pairs;

  const Formula& part(const std::string& name) const {
    auto it = parts.find(name);
    if (it == parts.end()) throw tiling_error("no subformula named '" + name + "'");
    return it->second;
  }
};

inline TilingEncoding encode(const TileInstance& inst) {
  const Formula T = top();
  const Formula p = atom(names::kOrigin);
  auto dia = [](const std::string& x, Formula f) { return diamond(x, std::move(f)); };
  auto bx = [](const std::string& x, Formula f) { return box(x, std::move(f)); };
  const Formula dead = bx("a", bot());        // no a-arrow
  const Formula alive = dia("a", T);          // has an a-arrow
  const Formula b_alive = dia("b", dia("b", T));

  TilingEncoding enc;
  auto add = [&](const std::string& name, Formula f) {
    enc.parts[name] = f;
    return f;
  };

  const Formula refl = add("refl_a", conj(dia("a", alive), arb_box(neg(dia("a", dead)))));
  // The b-successors of the current state keep all their a-arrows.
  const Formula keep_b = conj(dia("b", T), bx("b", alive));
  const Formula b_closed = arb_box(implies(alive, bx("b", bx("b", alive))));

  std::vector<std::pair<std::string, Formula>> conjuncts;
  conjuncts.emplace_back("psi1", add("psi1", conj_all({refl, p, dia("b", T), bx("b", neg(p))})));
  conjuncts.emplace_back("psi2", add("psi2", conj(bx("b", conj(refl, dia("b", p))), b_closed)));

  for (const std::string& x : names::kDirections) {
    const Formula psi3 = bx("b", conj(dia(x, conj_all({neg(p), refl, dia("b", p)})),
                                      arb_box(implies(dia(x, alive), bx(x, alive)))));
    const Formula psi4 = arb_box(implies(alive, bx("b", bx(x, bx("b", alive)))));

    Update ux{{{disj(p, dead), "b", T}, {T, "a", T}, {dead, x, T}}};
    enc.updates["U_" + x] = ux;
    const Formula goal = conj(dia(x, alive), dia("b", dia("b", dead)));
    const Formula propd = bx("b", arb_box(implies(conj_all({dead, dia(x, alive), dia("b", keep_b), arb_diamond(goal)}),
                                                  update_box(ux, arb_diamond(goal)))));

    const Formula ret =
        bx("b", arb_diamond(conj_all({dead, dia("b", T),
                                      dia(x, arb_diamond(conj_all({alive, dia("b", keep_b), b_closed})))})));

    conjuncts.emplace_back("psi3_" + x, add("psi3_" + x, psi3));
    conjuncts.emplace_back("psi4_" + x, add("psi4_" + x, psi4));
    conjuncts.emplace_back("propd_" + x, add("propd_" + x, propd));
    conjuncts.emplace_back("return_" + x, add("return_" + x, ret));
  }

  auto dead_after = [&](const std::string& x, const std::string& y) { return bx(x, bx(y, dead)); };
  const Formula inverse = bx("b", arb_box(implies(dead, conj_all({dead_after("u", "d"), dead_after("d", "u"),
                                                                   dead_after("l", "r"), dead_after("r", "l")}))));
  conjuncts.emplace_back("inverse", add("inverse", inverse));

  enc.commute_pairs = {{"u", "l"}, {"u", "r"}, {"d", "l"}, {"d", "r"}, {"l", "u"}, {"l", "d"}, {"r", "u"}, {"r", "d"}};
  std::vector<Formula> squares;
  for (const auto& [x, y] : enc.commute_pairs) squares.push_back(implies(dia(x, dia(y, dead)), dead_after(y, x)));
  conjuncts.emplace_back("commute", add("commute", bx("b", arb_box(conj_all(squares)))));

  // Exactly one tile type: the whole conjunction sits under box_b.
  std::vector<Formula> tile_atoms;
  for (const TileType& t : inst.types) tile_atoms.push_back(atom(names::tile(t.name)));
  std::vector<Formula> one_tile{disj_all(tile_atoms)};
  for (std::size_t i = 0; i < tile_atoms.size(); ++i)
    for (std::size_t j = i + 1; j < tile_atoms.size(); ++j) one_tile.push_back(neg(conj(tile_atoms[i], tile_atoms[j])));
  conjuncts.emplace_back("one_tile", add("one_tile", bx("b", conj_all(one_tile))));

  std::vector<Formula> one_color;
  for (Side s : {kNorth, kSouth, kEast, kWest}) {
    std::vector<Formula> per_color;
    for (const std::string& c : inst.colors) {
      std::vector<Formula> others;
      for (const std::string& d : inst.colors)
        if (d != c) others.push_back(neg(atom(names::color(s, d))));
      per_color.push_back(implies(atom(names::color(s, c)), conj_all(others)));
    }
    one_color.push_back(bx("b", conj_all(per_color)));
  }
  conjuncts.emplace_back("one_color", add("one_color", conj_all(one_color)));

  std::vector<Formula> tile_colors;
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    std::vector<Formula> sides;
    for (Side s : {kNorth, kSouth, kEast, kWest}) sides.push_back(atom(names::color(s, inst.color(i, s))));
    tile_colors.push_back(implies(tile_atoms[i], conj_all(sides)));
  }
  conjuncts.emplace_back("tile_colors", add("tile_colors", bx("b", conj_all(tile_colors))));

  std::vector<Formula> tile_match;
  for (const std::string& c : inst.colors)
    tile_match.push_back(conj(implies(atom(names::color(kNorth, c)), bx("u", atom(names::color(kSouth, c)))),
                              implies(atom(names::color(kWest, c)), bx("l", atom(names::color(kEast, c))))));
  conjuncts.emplace_back("tile_match", add("tile_match", bx("b", conj_all(tile_match))));

  std::vector<Formula> all;
  for (const auto& [_, f] : conjuncts) all.push_back(f);
  enc.psi_types = add("psi_types", conj_all(all));
  enc.conjuncts = std::move(conjuncts);
  return enc;
}

// Finite stand-in for the plane model: k*k cells on a torus plus origin s0.
// Cell propositions make every cell its own bisimulation class, which
// rules out any [*] check on the result; they are off by default.
inline KripkeModel build_torus_model(const TileInstance& inst, const PeriodicTiling& tiling, bool unique_cell_props) {
  const std::size_t k = tiling.period;
  if (k == 0 || tiling.grid.size() != k * k) throw tiling_error("malformed tiling grid");
  ModelBuilder b;
  b.add_state("s0");
  auto cell = [](std::size_t n, std::size_t m) { return "c_" + std::to_string(n) + "_" + std::to_string(m); };
  for (std::size_t n = 0; n < k; ++n)
    for (std::size_t m = 0; m < k; ++m) b.add_state(cell(n, m));

  for (const char* a : {"a", "b", "u", "d", "l", "r"}) b.add_agent(a);
  b.add_arrow("a", "s0", "s0");
  for (std::size_t n = 0; n < k; ++n)
    for (std::size_t m = 0; m < k; ++m) {
      const std::string here = cell(n, m);
      b.add_arrow("a", here, here);
      b.add_arrow("b", "s0", here);
      b.add_arrow("b", here, "s0");
      b.add_arrow("u", here, cell(n, (m + 1) % k));
      b.add_arrow("d", here, cell(n, (m + k - 1) % k));
      b.add_arrow("l", here, cell((n + k - 1) % k, m));
      b.add_arrow("r", here, cell((n + 1) % k, m));
    }

  b.add_prop(names::kOrigin, {"s0"});
  for (std::size_t i = 0; i < inst.types.size(); ++i) {
    std::vector<std::string> where;
    for (std::size_t n = 0; n < k; ++n)
      for (std::size_t m = 0; m < k; ++m)
        if (tiling.at(n, m) == i) where.push_back(cell(n, m));
    b.add_prop(names::tile(inst.types[i].name), where);
  }
  for (Side s : {kNorth, kSouth, kEast, kWest})
    for (std::size_t c = 0; c < inst.colors.size(); ++c) {
      std::vector<std::string> where;
      for (std::size_t n = 0; n < k; ++n)
        for (std::size_t m = 0; m < k; ++m)
          if (inst.types[tiling.at(n, m)].side[s] == c) where.push_back(cell(n, m));
      b.add_prop(names::color(s, inst.colors[c]), where);
    }
  if (unique_cell_props)
    for (std::size_t n = 0; n < k; ++n)
      for (std::size_t m = 0; m < k; ++m) b.add_prop(names::cell(n, m), {cell(n, m)});
  b.set_point("s0");
  return b.build();
}

struct ConjunctResult {
  std::string name;
  bool passed;
};

// Evaluates the four [*]-free conjuncts at the model's point.
inline std::vector<ConjunctResult> check_static_conjuncts(const KripkeModel& m, const TileInstance& inst,
                                                          Budget budget = {}) {
  if (!m.point()) throw model_error("model has no designated point");
  for (const char* a : {"a", "b", "u", "d", "l", "r"})
    if (!m.has_agent(a)) throw model_error(std::string("model lacks agent '") + a + "'");
  const TilingEncoding enc = encode(inst);
  Checker checker(budget);
  std::vector<ConjunctResult> out;
  for (const char* name : {"one_tile", "one_color", "tile_colors", "tile_match"})
    out.push_back({name, checker.satisfies(m, *m.point(), enc.part(name))});
  return out;
}

}  // namespace aaul
