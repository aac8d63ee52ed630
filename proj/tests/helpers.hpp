#pragma once

// Shared fixtures and subprocess plumbing for the test suites.

#include <array>
#include <cstdio>
#include <memory>
#include <stdexcept>
#include <string>

#include "wbfmap/json_io.hpp"
#include "wbfmap/network.hpp"
#include "wbfmap/textio.hpp"

namespace testutil {

// The two-node fixture: P(A=t)=0.8; P(B=t|A=t)=0.9, P(B=t|A=f)=0.5.
inline const char* kChain2Json =
    R"({"nodes":[{"name":"A","values":["t","f"],"parents":[],"cpt":[[0.8,0.2]]},)"
    R"({"name":"B","values":["t","f"],"parents":["A"],"cpt":[[0.9,0.1],[0.5,0.5]]}]})";

inline wbfmap::BeliefNetwork chain2() { return wbfmap::parse_network(kChain2Json); }

// chain2 with the B|A=t row replaced.
inline wbfmap::BeliefNetwork chain2_with_row(double bt_given_at, double bt_given_af) {
  wbfmap::BeliefNetwork net = chain2();
  net.cpts[1].rows[0] = {bt_given_at, 1.0 - bt_given_at};
  net.cpts[1].rows[1] = {bt_given_af, 1.0 - bt_given_af};
  return net;
}

// A->B, A->C, B->D, C->D: the smallest non-polytree.
inline wbfmap::BeliefNetwork diamond() {
  using namespace wbfmap;
  BeliefNetwork net;
  net.node_names = {"A", "B", "C", "D"};
  net.value_names = {{"t", "f"}, {"t", "f"}, {"t", "f"}, {"t", "f"}};
  net.parents = {{}, {0}, {0}, {1, 2}};
  net.cpts.resize(4);
  net.cpts[0] = {{}, 2, {{0.6, 0.4}}};
  net.cpts[1] = {{2}, 2, {{0.7, 0.3}, {0.2, 0.8}}};
  net.cpts[2] = {{2}, 2, {{0.1, 0.9}, {0.5, 0.5}}};
  net.cpts[3] = {{2, 2}, 2, {{0.9, 0.1}, {0.4, 0.6}, {0.3, 0.7}, {0.05, 0.95}}};
  validate(net);
  return net;
}

inline wbfmap::Evidence ev(const wbfmap::BeliefNetwork& net, const std::string& spec) {
  return wbfmap::parse_evidence(spec, net);
}

struct CliResult {
  std::string output;
  int exit_code = -1;
};

// Runs the built CLI binary, capturing stdout and the exit code.
inline CliResult run_cli(const std::string& args) {
#ifndef WBFMAP_CLI_PATH
#error "WBFMAP_CLI_PATH must be defined by the build"
#endif
  const std::string command = std::string(WBFMAP_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed for: " + command);
  CliResult result;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    result.output.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

inline std::string data_file(const std::string& name) {
  return std::string(WBFMAP_DATA_DIR) + "/" + name;
}

}  // namespace testutil
