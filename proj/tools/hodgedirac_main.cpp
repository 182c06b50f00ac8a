#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "hodgedirac/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete Hodge-Dirac problems on 2D simplicial meshes"};
  app.require_subcommand(1);

  hodgedirac::RunConfig config;
  std::string domain = "square";
  std::string bc = "natural";

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--domain", domain, "square|disk|annulus")
        ->check(CLI::IsMember({"square", "disk", "annulus"}));
    cmd->add_option("--resolution", config.resolution, "mesh resolution (>= 1)");
    cmd->add_option("--bc", bc, "natural|essential")
        ->check(CLI::IsMember({"natural", "essential"}));
    cmd->add_option("--mesh", config.mesh_path, "read the mesh from a file");
    cmd->add_option("--out", config.out_path, "output path");
    cmd->add_option("--tol", config.tol, "solver residual tolerance");
  };

  const auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--f0", config.f0, "0-form source expression");
    cmd->add_option("--f1x", config.f1x, "1-form source, dx1 component");
    cmd->add_option("--f1y", config.f1y, "1-form source, dx2 component");
    cmd->add_option("--f2", config.f2, "2-form source density expression");
  };

  add_common(app.add_subcommand("mesh", "generate a mesh and write the text format"));
  {
    CLI::App* cmd = app.add_subcommand("solve-dirac", "solve the Hodge-Dirac mixed problem");
    add_common(cmd);
    add_source(cmd);
  }
  {
    CLI::App* cmd = app.add_subcommand("solve-laplace", "solve the Hodge-Laplace mixed problem");
    add_common(cmd);
    add_source(cmd);
    cmd->add_flag("--via-dirac", config.via_dirac, "solve by two sequential Dirac solves");
  }
  {
    CLI::App* cmd = app.add_subcommand("decompose", "Hodge-decompose a supplied field");
    add_common(cmd);
    add_source(cmd);
  }
  add_common(app.add_subcommand("constants", "print the discrete Poincare and inf-sup constants"));
  {
    CLI::App* cmd = app.add_subcommand("convergence", "run a manufactured convergence study");
    add_common(cmd);
    cmd->add_option("--levels", config.levels, "number of refinement levels (>= 2)");
    cmd->add_option("--problem", config.problem, "manufactured problem name");
  }
  add_common(app.add_subcommand("demo-disk",
                                "prescribed divergence/curl demo on the unit disk, both BCs"));

  CLI11_PARSE(app, argc, argv);

  config.subcommand = app.get_subcommands().front()->get_name();
  try {
    config.domain = hodgedirac::parse_domain(domain);
    config.bc = hodgedirac::parse_bc(bc);
  } catch (const std::invalid_argument& err) {
    std::cerr << "error (parse): " << err.what() << '\n';
    return 2;
  }
  return hodgedirac::run(config);
}
