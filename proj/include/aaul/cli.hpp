// Batch command-line front end. Exit codes: 0 true/success, 1 false/not
// found, 2 any error (parse, validation, budget).

#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aaul/bisim.hpp"
#include "aaul/checker.hpp"
#include "aaul/kripke.hpp"
#include "aaul/sat_search.hpp"
#include "aaul/syntax.hpp"
#include "aaul/tiling.hpp"
#include "aaul/updates.hpp"

namespace aaul::cli {

enum ExitCode : int { kTrue = 0, kFalse = 1, kError = 2 };

namespace detail {

class usage_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path);
  if (!file) throw usage_error("cannot open '" + path + "'");
  buf << file.rdbuf();
  return buf.str();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw usage_error("cannot write '" + path + "'");
  file << text;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace detail

inline int run(std::vector<std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Model checking and tiling reduction tools for arbitrary arrow update logic", "aaul"};
  app.require_subcommand(1);

  std::string model_path, formula_text, state, update_text, output, tiles_path, conjunct, agents, props;
  std::size_t max_blocks = Budget{}.max_arrow_blocks;
  std::size_t max_period = 0, period = 0, max_states = 0;
  std::uint64_t max_models = SatSearchOptions{}.max_models;
  bool cell_props = false;

  auto* check = app.add_subcommand("check", "Evaluate a formula at a state; prints true or false");
  check->add_option("model", model_path, "Model file ('-' for stdin)")->required();
  check->add_option("formula", formula_text, "Formula")->required();
  check->add_option("--state", state, "State to evaluate at (default: the model's point)");
  check->add_option("--max-blocks", max_blocks, "Arrow-block budget per [*]");

  auto* apply = app.add_subcommand("apply", "Apply an arrow update and write the resulting model");
  apply->add_option("model", model_path, "Model file ('-' for stdin)")->required();
  apply->add_option("--update", update_text, "Update literal, e.g. {(true,a,p)}")->required();
  apply->add_option("-o,--output", output, "Output file (default stdout)");
  apply->add_option("--max-blocks", max_blocks, "Arrow-block budget for [*] in clauses");

  auto* bisim = app.add_subcommand("bisim", "Print the coarsest bisimulation classes");
  bisim->add_option("model", model_path, "Model file ('-' for stdin)")->required();

  auto* encode_cmd = app.add_subcommand("encode-tiling", "Print the reduction formula for a tile set");
  encode_cmd->add_option("tiles", tiles_path, "Tile file ('-' for stdin)")->required();
  encode_cmd->add_option("--conjunct", conjunct, "Print only this named subformula");

  auto* search = app.add_subcommand("tile-search", "Search for a periodic tiling");
  search->add_option("tiles", tiles_path, "Tile file ('-' for stdin)")->required();
  search->add_option("--max-period", max_period, "Largest period to try")->required()->check(CLI::PositiveNumber);

  auto* witness = app.add_subcommand("witness-model", "Build the torus witness model for a periodic tiling");
  witness->add_option("tiles", tiles_path, "Tile file ('-' for stdin)")->required();
  witness->add_option("--period", period, "Torus period")->required()->check(CLI::PositiveNumber);
  witness->add_flag("--cell-props", cell_props, "Add a unique proposition per cell");
  witness->add_option("-o,--output", output, "Output file (default stdout)");

  auto* dot = app.add_subcommand("dot", "Export a model as Graphviz DOT");
  dot->add_option("model", model_path, "Model file ('-' for stdin)")->required();
  dot->add_option("-o,--output", output, "Output file (default stdout)");

  auto* sat = app.add_subcommand(
      "sat-search", "Bounded search for a satisfying pointed model (exponential; absence is not unsatisfiability)");
  sat->add_option("formula", formula_text, "Formula")->required();
  sat->add_option("--max-states", max_states, "Largest model size to try")->required()->check(CLI::PositiveNumber);
  sat->add_option("--agents", agents, "Comma-separated agents")->required();
  sat->add_option("--props", props, "Comma-separated propositions");
  sat->add_option("--max-blocks", max_blocks, "Arrow-block budget per [*]");
  sat->add_option("--max-models", max_models, "Candidate model cap");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kTrue;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kTrue;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }

  Budget budget;
  budget.max_arrow_blocks = max_blocks;

  try {
    if (*check) {
      const KripkeModel m = load_model(detail::read_input(model_path, in));
      const Formula f = parse_formula(formula_text);
      StateId s;
      if (!state.empty()) {
        s = m.state_id(state);
      } else if (m.point()) {
        s = *m.point();
      } else {
        throw detail::usage_error("model has no point; pass --state");
      }
      const bool value = Checker(budget).satisfies(m, s, f);
      out << (value ? "true" : "false") << "\n";
      return value ? kTrue : kFalse;
    }
    if (*apply) {
      const KripkeModel m = load_model(detail::read_input(model_path, in));
      const Update u = parse_update(update_text);
      Checker checker(budget);
      detail::write_output(output, save_model(apply_update(m, u, checker.evaluator())), out);
      return kTrue;
    }
    if (*bisim) {
      const KripkeModel m = load_model(detail::read_input(model_path, in));
      const Partition part = coarsest_partition(m);
      for (std::size_t b = 0; b < part.size(); ++b) {
        out << "block " << b << ":";
        for (StateId s : part.blocks[b]) out << ' ' << m.states()[s];
        out << "\n";
      }
      return kTrue;
    }
    if (*encode_cmd) {
      const TilingEncoding enc = encode(parse_tiles(detail::read_input(tiles_path, in)));
      out << print_formula(conjunct.empty() ? enc.psi_types : enc.part(conjunct)) << "\n";
      return kTrue;
    }
    if (*search) {
      const TileInstance inst = parse_tiles(detail::read_input(tiles_path, in));
      for (std::size_t k = 1; k <= max_period; ++k) {
        if (auto t = find_periodic_tiling(inst, k)) {
          out << "period " << k << "\n" << format_tiling(inst, *t);
          return kTrue;
        }
      }
      out << "no periodic tiling with period <= " << max_period << "\n";
      return kFalse;
    }
    if (*witness) {
      const TileInstance inst = parse_tiles(detail::read_input(tiles_path, in));
      const auto t = find_periodic_tiling(inst, period);
      if (!t) {
        out << "no periodic tiling with period " << period << "\n";
        return kFalse;
      }
      detail::write_output(output, save_model(build_torus_model(inst, *t, cell_props)), out);
      return kTrue;
    }
    if (*dot) {
      detail::write_output(output, export_dot(load_model(detail::read_input(model_path, in))), out);
      return kTrue;
    }
    if (*sat) {
      SatSearchOptions opt;
      opt.max_states = max_states;
      opt.agents = detail::split_list(agents);
      opt.props = detail::split_list(props);
      opt.budget = budget;
      opt.max_models = max_models;
      const SatSearchResult r = sat_search(parse_formula(formula_text), opt);
      if (r.model) {
        out << "satisfiable at s0 of:\n" << save_model(*r.model);
        return kTrue;
      }
      if (r.hit_model_cap && r.searched_up_to < max_states) {
        err << "error: bounded search stopped after " << r.searched_up_to
            << " states; the next size exceeds --max-models " << max_models << "\n";
        return kError;
      }
      out << "none up to " << r.searched_up_to << " states (bounded search, absence is not unsatisfiability";
      if (r.skipped) out << "; " << r.skipped << " candidates skipped over budget";
      out << ")\n";
      return kFalse;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}

inline int run(int argc, char** argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc), std::cin, std::cout, std::cerr);
}

}  // namespace aaul::cli
