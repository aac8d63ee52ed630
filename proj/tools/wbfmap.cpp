// Command-line front end: load a network, solve for MAP assignments,
// enumerate k-best, compare against the brute-force oracle, inspect or dump
// the compiled DAG, and generate random test networks.
//
// Exit codes: 0 success, 1 no satisfying model, 2 input error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wbfmap/compile.hpp"
#include "wbfmap/dot.hpp"
#include "wbfmap/generate.hpp"
#include "wbfmap/json_io.hpp"
#include "wbfmap/network.hpp"
#include "wbfmap/oracle.hpp"
#include "wbfmap/polytree.hpp"
#include "wbfmap/search.hpp"
#include "wbfmap/textio.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw wbfmap::ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw wbfmap::ParseError("cannot write '" + path + "'");
  out << text;
}

struct Options {
  std::string network_path;
  std::string evidence;
  std::string output;
  std::string heuristic = "min-entry";
  bool prune01 = true;
  bool zero_nonprior = false;
  bool ancestral = false;
  int k = 1;
  // gen
  std::uint64_t seed = 0;
  wbfmap::GenOptions gen;
};

void add_network_options(CLI::App* cmd, Options& opt) {
  cmd->add_option("network", opt.network_path, "network JSON file")->required();
  cmd->add_option("-e,--evidence", opt.evidence,
                  "comma-separated findings, e.g. \"B=t,C=v1\"");
  cmd->add_option("-o,--output", opt.output, "output file (default: stdout)");
}

void add_compile_options(CLI::App* cmd, Options& opt) {
  cmd->add_flag("--prune01,!--no-prune01", opt.prune01,
                "omit zero-probability entries and shrink probability-1 entries (default: on)");
  cmd->add_flag("--zero-nonprior", opt.zero_nonprior,
                "zero all non-prior costs (partial MAP over root nodes)");
}

int run(const CLI::App& app, Options& opt) {
  using namespace wbfmap;

  if (app.got_subcommand("gen")) {
    GenOptions g = opt.gen;
    BeliefNetwork net = generate_network(opt.seed, g);
    write_output(opt.output, write_network(net) + "\n");
    return 0;
  }

  BeliefNetwork net = parse_network(read_file(opt.network_path));
  Evidence ev = parse_evidence(opt.evidence, net);
  CompileOptions copts;
  copts.prune01 = opt.prune01;
  copts.zero_nonprior = opt.zero_nonprior;

  if (app.got_subcommand("oracle")) {
    auto ranked = kbest_oracle(net, ev, opt.k);
    if (ranked.empty()) {
      std::cerr << "no satisfying model\n";
      return 1;
    }
    std::string out;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      if (i) out += "\n";
      out += format_ranked_block(net, ranked[i]);
    }
    write_output(opt.output, out);
    return 0;
  }

  WbfDag dag = compile(net, ev, copts);

  if (app.got_subcommand("compile")) {
    int by_kind[5] = {0, 0, 0, 0, 0};
    for (const auto& node : dag.nodes) by_kind[static_cast<int>(node.kind)]++;
    std::string out;
    out += "nodes=" + std::to_string(dag.node_count()) + "\n";
    out += "edges=" + std::to_string(dag.edge_count()) + "\n";
    out += "choice_roots=" + std::to_string(by_kind[0]) + "\n";
    out += "cost_roots=" + std::to_string(by_kind[1]) + "\n";
    out += "selectors=" + std::to_string(by_kind[2]) + "\n";
    out += "images=" + std::to_string(by_kind[3]) + "\n";
    out += "evidence_and=" + std::to_string(by_kind[4]) + "\n";
    write_output(opt.output, out);
    return 0;
  }

  if (app.got_subcommand("dot")) {
    write_output(opt.output, to_dot(dag, net));
    return 0;
  }

  const Heuristic h = opt.heuristic == "zero" ? heuristic_zero() : heuristic_min_entry(dag);
  const SolveMode mode = opt.ancestral ? SolveMode::Ancestral : SolveMode::Complete;

  if (app.got_subcommand("solve")) {
    auto result = solve_map(dag, h, mode);
    if (!result) {
      std::cerr << "no satisfying model\n";
      return 1;
    }
    write_output(opt.output, format_result_block(net, result->assignment, result->cost,
                                                 result->probability));
    return 0;
  }

  // kbest
  auto results = solve_kbest(dag, opt.k, h);
  if (results.empty()) {
    std::cerr << "no satisfying model\n";
    return 1;
  }
  std::string out;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i) out += "\n";
    out += format_result_block(net, results[i].assignment, results[i].cost,
                               results[i].probability);
  }
  write_output(opt.output, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MAP assignments for discrete Bayesian networks via best-first search "
               "on a weighted boolean-function DAG"};
  app.require_subcommand(1);
  Options opt;

  CLI::App* solve = app.add_subcommand("solve", "most probable total assignment given evidence");
  add_network_options(solve, opt);
  add_compile_options(solve, opt);
  solve->add_option("--heuristic", opt.heuristic, "search heuristic")
      ->check(CLI::IsMember({"zero", "min-entry"}));
  solve->add_flag("--ancestral", opt.ancestral,
                  "only force values on evidence ancestors (partial result)");

  CLI::App* kbest = app.add_subcommand("kbest", "k most probable assignments, best first");
  add_network_options(kbest, opt);
  add_compile_options(kbest, opt);
  kbest->add_option("--heuristic", opt.heuristic, "search heuristic")
      ->check(CLI::IsMember({"zero", "min-entry"}));
  kbest->add_option("-k,--k", opt.k, "number of assignments")->check(CLI::PositiveNumber);

  CLI::App* oracle = app.add_subcommand("oracle", "brute-force reference answer");
  add_network_options(oracle, opt);
  oracle->add_option("-k,--k", opt.k, "number of assignments")->check(CLI::PositiveNumber);

  CLI::App* compile_cmd = app.add_subcommand("compile", "compile and print DAG size per kind");
  add_network_options(compile_cmd, opt);
  add_compile_options(compile_cmd, opt);

  CLI::App* dot = app.add_subcommand("dot", "compile and write the DAG in Graphviz format");
  add_network_options(dot, opt);
  add_compile_options(dot, opt);

  CLI::App* gen = app.add_subcommand("gen", "generate a random valid network");
  gen->add_option("--seed", opt.seed, "random seed")->required();
  gen->add_option("--nodes", opt.gen.nodes, "node count")->check(CLI::PositiveNumber);
  gen->add_option("--min-values", opt.gen.min_values, "minimum domain size")
      ->check(CLI::PositiveNumber);
  gen->add_option("--max-values", opt.gen.max_values, "maximum domain size")
      ->check(CLI::PositiveNumber);
  gen->add_option("--max-in-degree", opt.gen.max_in_degree, "maximum parents per node");
  gen->add_option("--det-frac", opt.gen.det_fraction,
                  "fraction of deterministic CPT rows")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_flag("--polytree", opt.gen.polytree, "keep the undirected skeleton acyclic");
  gen->add_option("-o,--output", opt.output, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    return run(app, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
