#include <gtest/gtest.h>

#include <functional>

#include "aaul/aaul.hpp"
#include "support/generators.hpp"

namespace aaul {
namespace {

const char* kUniform = "tile t0 N=c E=c S=c W=c\n";
const char* kAlternating = "tile t0 N=a S=b E=c W=c\ntile t1 N=b S=a E=c W=c\n";
const char* kBroken = "tile t0 N=red S=blue E=c W=c\n";

// Enumerates all k*k assignments; the first valid one in (n, m) order.
std::optional<PeriodicTiling> enumerate_tilings(const TileInstance& inst, std::size_t k, std::size_t* valid_count) {
  PeriodicTiling t{k, std::vector<std::size_t>(k * k, 0)};
  std::optional<PeriodicTiling> first;
  *valid_count = 0;
  while (true) {
    if (is_valid_torus_tiling(inst, t)) {
      ++*valid_count;
      if (!first) first = t;
    }
    // Odometer with the last cell fastest, so order is lexicographic.
    std::size_t i = k * k;
    while (i-- > 0) {
      if (++t.grid[i] < inst.types.size()) break;
      t.grid[i] = 0;
    }
    if (i == static_cast<std::size_t>(-1)) return first;
  }
}

TEST(ParseTiles, Basic) {
  const TileInstance one = parse_tiles(kUniform);
  ASSERT_EQ(one.types.size(), 1u);
  EXPECT_EQ(one.colors, std::vector<std::string>{"c"});
  const TileInstance two = parse_tiles("# pair\n" + std::string(kAlternating));
  ASSERT_EQ(two.types.size(), 2u);
  EXPECT_EQ(two.types[0].name, "t0");
  EXPECT_EQ(two.types[1].name, "t1");
  EXPECT_EQ(two.colors, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(two.color(1, kNorth), "b");
}

TEST(ParseTiles, Errors) {
  EXPECT_THROW(parse_tiles("tile t0 N=c E=c S=c\n"), tiling_error);
  EXPECT_THROW(parse_tiles("tile t0 N=c E=c S=c W=c\ntile t0 N=c E=c S=c W=c\n"), tiling_error);
  EXPECT_THROW(parse_tiles("colors: c\ntile t0 N=c E=c S=c W=d\n"), tiling_error);
  EXPECT_THROW(parse_tiles("tile t0 N=c E=c S=c W=c N=c\n"), tiling_error);
  EXPECT_THROW(parse_tiles("tile t0 X=c E=c S=c W=c\n"), tiling_error);
  EXPECT_THROW(parse_tiles("# nothing\n"), tiling_error);
  EXPECT_THROW(parse_tiles("tyle t0 N=c E=c S=c W=c\n"), tiling_error);
}

TEST(FindPeriodicTiling, Examples) {
  EXPECT_TRUE(find_periodic_tiling(parse_tiles(kUniform), 1).has_value());
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_FALSE(find_periodic_tiling(parse_tiles(kBroken), k).has_value());
  const TileInstance alt = parse_tiles(kAlternating);
  EXPECT_FALSE(find_periodic_tiling(alt, 1).has_value());
  const auto t = find_periodic_tiling(alt, 2);
  ASSERT_TRUE(t.has_value());
  EXPECT_EQ(t->grid, (std::vector<std::size_t>{0, 1, 0, 1}));
  EXPECT_EQ(format_tiling(alt, *t), "t1 t1\nt0 t0\n");
  EXPECT_THROW(find_periodic_tiling(alt, 0), tiling_error);
}

TEST(FindPeriodicTiling, AgreesWithExhaustiveEnumeration) {
  testing::Rng rng(17);
  std::uniform_int_distribution<std::size_t> ntiles(1, 4), color(0, 2);
  for (int i = 0; i < 60; ++i) {
    std::string text;
    const std::size_t count = ntiles(rng);
    for (std::size_t t = 0; t < count; ++t) {
      text += "tile t" + std::to_string(t);
      for (char side : {'N', 'E', 'S', 'W'}) text += std::string(" ") + side + "=c" + std::to_string(color(rng));
      text += "\n";
    }
    const TileInstance inst = parse_tiles(text);
    for (std::size_t k = 1; k <= 3; ++k) {
      if (k == 3 && count > 3) continue;
      std::size_t valid = 0;
      const auto expected = enumerate_tilings(inst, k, &valid);
      const auto got = find_periodic_tiling(inst, k);
      ASSERT_EQ(got, expected) << text << "k=" << k;
      if (got) {
        EXPECT_TRUE(is_valid_torus_tiling(inst, *got));
      }
    }
  }
}

TEST(Encode, TopLevelShape) {
  const TilingEncoding enc = encode(parse_tiles(kAlternating));
  ASSERT_EQ(enc.conjuncts.size(), 24u);
  EXPECT_EQ(enc.conjuncts.front().first, "psi1");
  EXPECT_EQ(enc.conjuncts.back().first, "tile_match");
  EXPECT_EQ(enc.commute_pairs.size(), 8u);
  // Peel the left-nested conjunction from the right.
  Formula rest = enc.psi_types;
  for (std::size_t i = enc.conjuncts.size(); i-- > 1;) {
    ASSERT_EQ(rest.op(), Op::And);
    EXPECT_EQ(rest.rhs(), enc.conjuncts[i].second) << enc.conjuncts[i].first;
    rest = rest.lhs();
  }
  EXPECT_EQ(rest, enc.part("psi1"));
}

TEST(Encode, OneTile) {
  const TilingEncoding enc = encode(parse_tiles(kAlternating));
  EXPECT_EQ(enc.part("one_tile"), parse_formula("[b]((p_t0 | p_t1) & ~(p_t0 & p_t1))"));
}

TEST(Encode, NamedParts) {
  const TilingEncoding enc = encode(parse_tiles(kUniform));
  EXPECT_EQ(enc.part("refl_a"), parse_formula("<a><a>true & [*]~<a>[a]false"));
  EXPECT_EQ(enc.part("psi1"), parse_formula("<a><a>true & [*]~<a>[a]false & p & <b>true & [b]~p"));
  EXPECT_EQ(enc.part("psi4_r"), parse_formula("[*](<a>true -> [b][r][b]<a>true)"));
  EXPECT_EQ(print_update(enc.updates.at("U_r")), "{(p | [a]false, b, true), (true, a, true), ([a]false, r, true)}");
  EXPECT_EQ(enc.part("tile_match"), parse_formula("[b]((N_c -> [u]S_c) & (W_c -> [l]E_c))"));
  EXPECT_EQ(enc.part("tile_colors"), parse_formula("[b](p_t0 -> N_c & S_c & E_c & W_c)"));
  EXPECT_EQ(enc.part("commute"),
            parse_formula("[b][*]((<u><l>[a]false -> [l][u][a]false) & (<u><r>[a]false -> [r][u][a]false) & "
                          "(<d><l>[a]false -> [l][d][a]false) & (<d><r>[a]false -> [r][d][a]false) & "
                          "(<l><u>[a]false -> [u][l][a]false) & (<l><d>[a]false -> [d][l][a]false) & "
                          "(<r><u>[a]false -> [u][r][a]false) & (<r><d>[a]false -> [d][r][a]false))"));
  EXPECT_EQ(enc.part("return_r"),
            parse_formula("[b]<*>([a]false & <b>true & <r><*>(<a>true & <b>(<b>true & [b]<a>true) & "
                          "[*](<a>true -> [b][b]<a>true)))"));
  EXPECT_EQ(enc.part("propd_u"),
            parse_formula("[b][*]([a]false & <u><a>true & <b>(<b>true & [b]<a>true) & <*>(<u><a>true & "
                          "<b><b>[a]false) -> [{(p | [a]false, b, true), (true, a, true), ([a]false, u, true)}]"
                          "<*>(<u><a>true & <b><b>[a]false))"));
  EXPECT_THROW(enc.part("psi9"), tiling_error);
}

TEST(Encode, DeterministicAndRoundTrips) {
  const std::string a = print_formula(encode(parse_tiles(kAlternating)).psi_types);
  const std::string b = print_formula(encode(parse_tiles(kAlternating)).psi_types);
  EXPECT_EQ(a, b);
  EXPECT_EQ(parse_formula(a), encode(parse_tiles(kAlternating)).psi_types);
}

TEST(BuildTorusModel, Shape) {
  const TileInstance uni = parse_tiles(kUniform);
  const KripkeModel one = build_torus_model(uni, *find_periodic_tiling(uni, 1), false);
  EXPECT_EQ(one.num_states(), 2u);
  EXPECT_EQ(one.arrows(one.agent_id("b")).size(), 2u);
  for (const char* x : {"u", "d", "l", "r"})
    EXPECT_EQ(one.arrows(one.agent_id(x)), (std::vector<std::pair<StateId, StateId>>{{1, 1}}));

  const TileInstance alt = parse_tiles(kAlternating);
  const KripkeModel two = build_torus_model(alt, *find_periodic_tiling(alt, 2), false);
  EXPECT_EQ(two.num_states(), 5u);
  EXPECT_EQ(two.arrows(two.agent_id("b")).size(), 8u);
  EXPECT_EQ(two.arrows(two.agent_id("a")).size(), 5u);
  for (const char* x : {"u", "d", "l", "r"}) EXPECT_EQ(two.arrows(two.agent_id(x)).size(), 4u);
  EXPECT_EQ(two.point(), std::optional<StateId>{0});
  EXPECT_EQ(testing::members(two.truth_set("p")), std::vector<std::size_t>{0});
  // Up increments the second coordinate.
  EXPECT_TRUE(two.has_arrow(two.agent_id("u"), two.state_id("c_1_0"), two.state_id("c_1_1")));
  EXPECT_TRUE(two.has_arrow(two.agent_id("r"), two.state_id("c_0_1"), two.state_id("c_1_1")));
}

TEST(BuildTorusModel, EveryCellHasOneTile) {
  const TileInstance alt = parse_tiles(kAlternating);
  const KripkeModel m = build_torus_model(alt, *find_periodic_tiling(alt, 2), true);
  for (StateId s = 1; s < m.num_states(); ++s)
    EXPECT_EQ(m.truth_set("p_t0").test(s) + m.truth_set("p_t1").test(s), 1) << m.states()[s];
  EXPECT_FALSE(m.truth_set("p_t0").test(0) || m.truth_set("p_t1").test(0));
  EXPECT_EQ(m.truth_set(names::cell(1, 0)).count(), 1u);
}

bool all_pass(const std::vector<ConjunctResult>& r) {
  for (const auto& c : r)
    if (!c.passed) return false;
  return true;
}

bool passed(const std::vector<ConjunctResult>& r, const std::string& name) {
  for (const auto& c : r)
    if (c.name == name) return c.passed;
  throw std::logic_error("missing conjunct " + name);
}

TEST(CheckStaticConjuncts, PassOnWitnesses) {
  for (const char* text : {kUniform, kAlternating}) {
    const TileInstance inst = parse_tiles(text);
    for (std::size_t k = 1; k <= 3; ++k)
      if (auto t = find_periodic_tiling(inst, k)) {
        EXPECT_TRUE(all_pass(check_static_conjuncts(build_torus_model(inst, *t, false), inst)));
        EXPECT_TRUE(all_pass(check_static_conjuncts(build_torus_model(inst, *t, true), inst)));
      }
  }
}

TEST(CheckStaticConjuncts, TileSwapBreaksMatching) {
  const TileInstance alt = parse_tiles(kAlternating);
  PeriodicTiling t = *find_periodic_tiling(alt, 2);
  t.at(0, 0) = 1;
  ASSERT_FALSE(is_valid_torus_tiling(alt, t));
  const auto r = check_static_conjuncts(build_torus_model(alt, t, false), alt);
  EXPECT_FALSE(passed(r, "tile_match"));
  EXPECT_TRUE(passed(r, "one_tile"));
  EXPECT_TRUE(passed(r, "tile_colors"));
}

TEST(CheckStaticConjuncts, DoubleTileBreaksOneTile) {
  const TileInstance alt = parse_tiles(kAlternating);
  const KripkeModel m = build_torus_model(alt, *find_periodic_tiling(alt, 2), false);
  std::string text = save_model(m);
  const auto pos = text.find("val p_t1:");
  ASSERT_NE(pos, std::string::npos);
  text.insert(text.find('\n', pos), " c_0_0");
  const auto r = check_static_conjuncts(load_model(text), alt);
  EXPECT_FALSE(passed(r, "one_tile"));
}

TEST(CheckStaticConjuncts, NeedsPointAndAgents) {
  const TileInstance uni = parse_tiles(kUniform);
  EXPECT_THROW(check_static_conjuncts(load_model("states: x\nagent a:\n"), uni), model_error);
  EXPECT_THROW(check_static_conjuncts(load_model("states: x\nagent a:\npoint: x\n"), uni), model_error);
}

}  // namespace
}  // namespace aaul
