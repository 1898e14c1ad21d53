#pragma once

#include <string>
#include <vector>

#include "qsh/carleson.hpp"
#include "qsh/norms.hpp"
#include "qsh/spec_io.hpp"

namespace qsh {

/// Budgets, tolerances and plumbing shared by the CLI and the suite.
struct RunConfig {
  NormConfig norm{};
  int arc_nodes = 16;  // nodes per deepest arc
  int n_spiral = 4;
  CarlesonConfig carleson{};
  unsigned seed = 7;
  int threads = 0;  // 0: hardware concurrency
  std::string out;

  double tol_factor2 = 1e-6;
  double tol_sandwich = 1e-8;
  double tol_parseval = 1e-8;
  double tol_dirichlet = 1e-8;
  double tol_identity = 1e-10;
  double tol_decomposition = 1e-6;
  double tol_moebius = 0.05;
  double tol_sc = 1e-6;

  ArcFamily arcs() const { return {norm.arc_depth, arc_nodes}; }
  /// Scales quadrature and grid budgets (not depths or tolerances).
  RunConfig scaled(double factor) const;
  /// Throws InvalidInput unless every budget is positive.
  void validate() const;
};

/// Lines "key = value"; '#' starts a comment. Unknown keys are input errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});
std::string config_text(const RunConfig& c);
std::vector<std::string> config_keys();

Json to_json(const RunConfig& c);

}  // namespace qsh
