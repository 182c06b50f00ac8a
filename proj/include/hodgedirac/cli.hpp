#pragma once

#include <string>

#include "hodgedirac/mesh.hpp"
#include "hodgedirac/whitney.hpp"

namespace hodgedirac {

/// Parsed command-line configuration.  Expression strings are parsed when
/// the subcommand runs; empty strings mean the component is absent.
struct RunConfig {
  std::string subcommand;
  Domain domain = Domain::Square;
  int resolution = 4;
  int levels = 4;
  BoundaryCondition bc = BoundaryCondition::Natural;
  std::string f0, f1x, f1y, f2;
  std::string mesh_path;  // read the mesh from a file instead of generating
  std::string out_path;   // empty selects the subcommand default
  double tol = 1e-9;
  bool via_dirac = false;
  std::string problem = "smooth1";
};

/// Executes one subcommand.  Returns 0 on success; on failure prints a
/// single-line diagnostic to stderr and returns a per-class exit code
/// (2 parse, 3 mesh, 4 solver, 5 io).
int run(const RunConfig& config);

Domain parse_domain(const std::string& name);
BoundaryCondition parse_bc(const std::string& name);

}  // namespace hodgedirac
