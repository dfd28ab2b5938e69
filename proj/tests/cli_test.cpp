#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "aaul/aaul.hpp"
#include "aaul/cli.hpp"

namespace aaul {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("aaul_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string read(const std::string& name) {
    std::ifstream in(dir_ / name);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  }

  Result run(std::vector<std::string> args, const std::string& stdin_text = "") {
    std::istringstream in(stdin_text);
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), in, out, err);
    return {code, out.str(), err.str()};
  }

  fs::path dir_;
};

const char* kTorus1 = "states: s0 c_0_0\nagent a: s0->s0 c_0_0->c_0_0\nagent b: s0->c_0_0 c_0_0->s0\nval p: s0\n";
const char* kAlternating = "tile t0 N=a S=b E=c W=c\ntile t1 N=b S=a E=c W=c\n";

TEST_F(CliTest, CheckTrueAndFalse) {
  const std::string m = write("m.km", kTorus1);
  Result r = run({"check", m, "[*]true", "--state", "s0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "true\n");
  r = run({"check", m, "[b]p", "--state", "s0"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "false\n");
  r = run({"check", m, "<a><a>true & [*]~<a>[a]false", "--state", "c_0_0"});
  EXPECT_EQ(r.code, 0);
}

TEST_F(CliTest, CheckUsesPointAndStdin) {
  Result r = run({"check", "-", "p"}, "states: x y\nval p: y\npoint: y\n");
  EXPECT_EQ(r.code, 0);
  r = run({"check", "-", "p"}, "states: x y\nval p: y\n");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--state"), std::string::npos);
}

TEST_F(CliTest, CheckErrors) {
  const std::string m = write("m.km", kTorus1);
  EXPECT_EQ(run({"check", m, "[a]("}).code, 2);
  EXPECT_EQ(run({"check", m, "p", "--state", "nowhere"}).code, 2);
  EXPECT_EQ(run({"check", (dir_ / "missing.km").string(), "p"}).code, 2);
  EXPECT_EQ(run({"check", m}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({}).code, 2);
  const Result budget = run({"check", m, "[*]p", "--state", "s0", "--max-blocks", "1"});
  EXPECT_EQ(budget.code, 2);
  EXPECT_NE(budget.err.find("error:"), std::string::npos);
}

TEST_F(CliTest, Help) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("tile-search"), std::string::npos);
}

TEST_F(CliTest, ApplyWritesModel) {
  const std::string m = write("m.km", kTorus1);
  Result r = run({"apply", m, "--update", "{(true,b,true)}"});
  ASSERT_EQ(r.code, 0) << r.err;
  const KripkeModel out = load_model(r.out);
  EXPECT_TRUE(out.arrows(out.agent_id("a")).empty());
  EXPECT_EQ(out.arrows(out.agent_id("b")).size(), 2u);

  r = run({"apply", m, "--update", "{(p,a,true)}", "-o", (dir_ / "out.km").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const KripkeModel file = load_model(read("out.km"));
  EXPECT_EQ(file.arrows(file.agent_id("a")), (std::vector<std::pair<StateId, StateId>>{{0, 0}}));

  EXPECT_EQ(run({"apply", m, "--update", "{}"}).code, 2);
  EXPECT_EQ(run({"apply", m}).code, 2);
}

TEST_F(CliTest, Bisim) {
  const Result r = run({"bisim", write("m.km", "states: x y z\nagent a: x->y y->z z->x\nval p: y\n")});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "block 0: x\nblock 1: y\nblock 2: z\n");
  EXPECT_EQ(run({"bisim", "-"}, "states: x y\nagent a:\n").out, "block 0: x y\n");
}

TEST_F(CliTest, EncodeTiling) {
  const std::string tiles = write("t.tiles", kAlternating);
  Result r = run({"encode-tiling", tiles});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_FALSE(r.out.empty());
  EXPECT_EQ(parse_formula(r.out.substr(0, r.out.size() - 1)), encode(parse_tiles(kAlternating)).psi_types);
  EXPECT_EQ(run({"encode-tiling", tiles}).out, r.out);
  r = run({"encode-tiling", tiles, "--conjunct", "one_tile"});
  EXPECT_EQ(r.out, "[b]((p_t0 | p_t1) & ~(p_t0 & p_t1))\n");
  EXPECT_EQ(run({"encode-tiling", tiles, "--conjunct", "nope"}).code, 2);
  EXPECT_EQ(run({"encode-tiling", write("bad.tiles", "tile t0 N=a\n")}).code, 2);
}

TEST_F(CliTest, TileSearch) {
  Result r = run({"tile-search", write("t.tiles", kAlternating), "--max-period", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "period 2\nt1 t1\nt0 t0\n");
  r = run({"tile-search", write("bad.tiles", "tile t0 N=red S=blue E=c W=c\n"), "--max-period", "3"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "no periodic tiling with period <= 3\n");
  EXPECT_EQ(run({"tile-search", write("x.tiles", kAlternating), "--max-period", "0"}).code, 2);
}

TEST_F(CliTest, WitnessModel) {
  const std::string tiles = write("t.tiles", kAlternating);
  Result r = run({"witness-model", tiles, "--period", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const KripkeModel m = load_model(r.out);
  EXPECT_EQ(m.num_states(), 5u);
  for (const auto& c : check_static_conjuncts(m, parse_tiles(kAlternating))) EXPECT_TRUE(c.passed) << c.name;
  EXPECT_FALSE(m.truth_set("cell_0_0").any());

  r = run({"witness-model", tiles, "--period", "2", "--cell-props", "-o", (dir_ / "w.km").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(load_model(read("w.km")).truth_set("cell_0_0").count(), 1u);

  r = run({"witness-model", tiles, "--period", "1"});
  EXPECT_EQ(r.code, 1);
}

TEST_F(CliTest, Dot) {
  const std::string m = write("m.km", kTorus1);
  Result r = run({"dot", m});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("digraph kripke {", 0), 0u);
  EXPECT_NE(r.out.find("\"s0\" -> \"c_0_0\" [label=\"b\"]"), std::string::npos);
  r = run({"dot", m, "-o", (dir_ / "m.dot").string()});
  EXPECT_EQ(read("m.dot"), export_dot(load_model(kTorus1)));
}

TEST_F(CliTest, SatSearch) {
  Result r = run({"sat-search", "<a><a>true & [*]~<a>[a]false", "--max-states", "2", "--agents", "a"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string body = r.out.substr(r.out.find('\n') + 1);
  EXPECT_TRUE(satisfies(load_model(body), 0, parse_formula("<a><a>true & [*]~<a>[a]false")));

  r = run({"sat-search", "p & ~p", "--max-states", "2", "--agents", "a", "--props", "p"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("none up to 2 states"), std::string::npos);

  EXPECT_EQ(run({"sat-search", "<b>true", "--max-states", "2", "--agents", "a"}).code, 2);
  r = run({"sat-search", "p & ~p", "--max-states", "4", "--agents", "a,b", "--max-models", "1000"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("--max-models"), std::string::npos);
}

}  // namespace
}  // namespace aaul
