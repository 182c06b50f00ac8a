#include "hodgedirac/cli.hpp"

#include <Eigen/SparseCholesky>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "hodgedirac/analysis.hpp"
#include "hodgedirac/expression.hpp"
#include "hodgedirac/io.hpp"
#include "hodgedirac/solvers.hpp"

namespace hodgedirac {

namespace {

std::optional<AnalyticForm> scalar_form(int degree, const std::string& text) {
  if (text.empty()) return std::nullopt;
  Expression expr = Expression::parse(text);
  return AnalyticForm::scalar(degree, [expr](double x, double y) { return expr(x, y); });
}

std::optional<AnalyticForm> vector_form(const std::string& tx, const std::string& ty) {
  if (tx.empty() && ty.empty()) return std::nullopt;
  if (tx.empty() || ty.empty())
    throw std::invalid_argument("a 1-form source needs both --f1x and --f1y");
  Expression ex = Expression::parse(tx);
  Expression ey = Expression::parse(ty);
  return AnalyticForm::one_form([ex](double x, double y) { return ex(x, y); },
                                [ey](double x, double y) { return ey(x, y); });
}

GradedForm source_from_config(const RunConfig& config) {
  GradedForm f;
  f.f0 = scalar_form(0, config.f0);
  f.f1 = vector_form(config.f1x, config.f1y);
  f.f2 = scalar_form(2, config.f2);
  return f;
}

SimplicialMesh mesh_from_config(const RunConfig& config) {
  if (!config.mesh_path.empty()) return read_mesh_file(config.mesh_path);
  return generate_mesh(config.domain, config.resolution);
}

std::string default_out(const RunConfig& config) {
  if (!config.out_path.empty()) return config.out_path;
  if (config.subcommand == "mesh") return "mesh.txt";
  if (config.subcommand == "convergence") return "convergence.csv";
  if (config.subcommand == "demo-disk") return "demo_disk";
  if (config.subcommand == "decompose") return "decomposition.vtk";
  return "solution.vtk";
}

void append_graded_fields(const GradedComplex& complex, const Vec& graded,
                          const std::string& prefix, std::vector<VtkField>& point_fields,
                          std::vector<VtkField>& cell_fields) {
  const SimplicialMesh& mesh = complex.mesh();
  point_fields.push_back({prefix + "0", sample_field(mesh, 0, complex.full_component(graded, 0))});
  cell_fields.push_back({prefix + "1", sample_field(mesh, 1, complex.full_component(graded, 1))});
  cell_fields.push_back({prefix + "2", sample_field(mesh, 2, complex.full_component(graded, 2))});
}

void report_residual(const std::string& label, double residual) {
  std::cout << label << " residual " << format_g17(residual) << '\n';
}

// V-dual norm of the weak-divergence functional v -> <u, dv> over discrete
// 0-forms.
double weak_divergence_residual(const GradedComplex& complex, const Vec& u) {
  if (complex.dim(0) == 0) return 0.0;
  const Vec r = complex.coboundary_block(0).transpose() *
                (complex.mass_block(1) * complex.component(u, 1));
  SparseMat d0 = complex.coboundary_block(0);
  SparseMat vgram = complex.mass_block(0) + SparseMat(d0.transpose() * (complex.mass_block(1) * d0));
  Eigen::SimplicialLDLT<SparseMat> ldlt(vgram);
  if (ldlt.info() != Eigen::Success)
    throw SolverFailure("weak_divergence_residual: V-Gram factorization failed");
  return std::sqrt(std::max(0.0, r.dot(ldlt.solve(r))));
}

int run_mesh(const RunConfig& config) {
  const SimplicialMesh mesh = mesh_from_config(config);
  write_mesh_file(default_out(config), mesh);
  std::cout << "mesh " << mesh.vertex_count() << " vertices, " << mesh.edge_count()
            << " edges, " << mesh.triangle_count() << " triangles -> " << default_out(config)
            << '\n';
  return 0;
}

int run_solve_dirac(const RunConfig& config) {
  const GradedComplex complex(mesh_from_config(config), config.bc);
  const DiracSolution sol = solve_dirac(complex, source_from_config(config), config.tol);
  report_residual("solve-dirac", sol.residual);

  std::vector<VtkField> point_fields, cell_fields;
  append_graded_fields(complex, sol.u.values, "u", point_fields, cell_fields);
  write_vtk_file(default_out(config), complex.mesh(), point_fields, cell_fields);
  std::cout << "wrote " << default_out(config) << '\n';
  return 0;
}

int run_solve_laplace(const RunConfig& config) {
  const GradedComplex complex(mesh_from_config(config), config.bc);
  const GradedForm f = source_from_config(config);
  const LaplaceSolution sol = config.via_dirac ? solve_laplace_via_dirac(complex, f, config.tol)
                                               : solve_laplace_mixed(complex, f, config.tol);
  report_residual("solve-laplace", sol.residual);

  std::vector<VtkField> point_fields, cell_fields;
  append_graded_fields(complex, sol.u.values, "u", point_fields, cell_fields);
  append_graded_fields(complex, sol.sigma.values, "sigma", point_fields, cell_fields);
  write_vtk_file(default_out(config), complex.mesh(), point_fields, cell_fields);
  std::cout << "wrote " << default_out(config) << '\n';
  return 0;
}

int run_decompose(const RunConfig& config) {
  const GradedComplex complex(mesh_from_config(config), config.bc);
  const GradedForm f = source_from_config(config);

  Vec x = Vec::Zero(complex.total_dim());
  for (int k = 0; k < 3; ++k) {
    const auto& form = f.component(k);
    if (!form) continue;
    x.segment(complex.offset(k), complex.dim(k)) =
        de_rham_map(complex.mesh(), *form, complex.bc());
  }
  const HodgeParts parts = hodge_decompose(complex, Cochain(x));

  const Vec sum = parts.b_part.values + parts.h_part.values + parts.bstar_part.values;
  const double nx = std::max(x.norm(), 1e-300);
  const double residual =
      std::max({(sum - x).norm() / nx,
                std::abs(complex.inner(parts.b_part.values, parts.h_part.values)) / (nx * nx),
                std::abs(complex.inner(parts.b_part.values, parts.bstar_part.values)) / (nx * nx),
                std::abs(complex.inner(parts.h_part.values, parts.bstar_part.values)) / (nx * nx)});
  if (residual > config.tol)
    throw SolverFailure("decompose: residual " + std::to_string(residual) + " exceeds tolerance");
  report_residual("decompose", residual);

  std::vector<VtkField> point_fields, cell_fields;
  append_graded_fields(complex, parts.b_part.values, "b_part", point_fields, cell_fields);
  append_graded_fields(complex, parts.h_part.values, "h_part", point_fields, cell_fields);
  append_graded_fields(complex, parts.bstar_part.values, "bstar_part", point_fields, cell_fields);
  write_vtk_file(default_out(config), complex.mesh(), point_fields, cell_fields);

  std::cout << "norms b " << format_g17(norms(complex, parts.b_part).first) << " h "
            << format_g17(norms(complex, parts.h_part).first) << " bstar "
            << format_g17(norms(complex, parts.bstar_part).first) << '\n';
  std::cout << "wrote " << default_out(config) << '\n';
  return 0;
}

int run_constants(const RunConfig& config) {
  const GradedComplex complex(mesh_from_config(config), config.bc);
  const StabilityConstants constants = stability_constants(complex);
  std::cout << "c_P " << format_g17(constants.c_P) << '\n';
  std::cout << "gamma_h " << format_g17(constants.gamma_h) << '\n';
  return 0;
}

int run_convergence(const RunConfig& config) {
  if (config.levels < 2)
    throw std::invalid_argument("convergence needs --levels >= 2");
  const ManufacturedProblem problem = named_problem(config.problem);
  const ConvergenceReport report =
      convergence_study(config.domain, config.bc, problem, config.levels, 4, config.tol);

  const std::string csv = convergence_csv(report);
  std::ofstream out(default_out(config));
  if (!out) throw IoError("cannot open '" + default_out(config) + "' for writing");
  out << csv;
  if (!out) throw IoError("write failed for '" + default_out(config) + "'");

  const auto rates = report.last_rates();
  std::cout << "rates errW " << format_g17(rates[0]) << " errV " << format_g17(rates[1])
            << " err_du " << format_g17(rates[2]) << '\n';
  std::cout << "wrote " << default_out(config) << '\n';
  return 0;
}

int run_demo_disk(const RunConfig& config) {
  const SimplicialMesh mesh = generate_mesh(Domain::Disk, config.resolution);
  GradedForm f;
  const Expression curl = Expression::parse("x*y");
  f.f2 = AnalyticForm::scalar(2, [curl](double x, double y) { return curl(x, y); });

  for (const BoundaryCondition bc : {BoundaryCondition::Natural, BoundaryCondition::Essential}) {
    const bool natural = bc == BoundaryCondition::Natural;
    const GradedComplex complex(mesh, bc);
    const DiracSolution sol = solve_dirac(complex, f, config.tol);

    const auto norm_of = [&](int k) {
      const Vec c = complex.component(sol.u.values, k);
      return std::sqrt(c.dot(complex.mass_block(k) * c));
    };
    const double total = norms(complex, sol.u).first;
    report_residual(natural ? "demo-disk natural" : "demo-disk essential", sol.residual);
    std::cout << "  |u0|/|u| " << format_g17(total > 0 ? norm_of(0) / total : 0.0)
              << "  |u2|/|u| " << format_g17(total > 0 ? norm_of(2) / total : 0.0) << '\n';
    std::cout << "  weak divergence residual "
              << format_g17(weak_divergence_residual(complex, sol.u.values)) << '\n';

    std::vector<VtkField> point_fields, cell_fields;
    append_graded_fields(complex, sol.u.values, "u", point_fields, cell_fields);
    const std::string path = default_out(config) + (natural ? "_natural.vtk" : "_essential.vtk");
    write_vtk_file(path, mesh, point_fields, cell_fields,
                   natural ? "disk demo, natural boundary conditions"
                           : "disk demo, essential boundary conditions");
    std::cout << "  wrote " << path << '\n';
  }
  return 0;
}

}  // namespace

Domain parse_domain(const std::string& name) {
  if (name == "square") return Domain::Square;
  if (name == "disk") return Domain::Disk;
  if (name == "annulus") return Domain::Annulus;
  throw std::invalid_argument("unknown domain '" + name + "' (square|disk|annulus)");
}

BoundaryCondition parse_bc(const std::string& name) {
  if (name == "natural") return BoundaryCondition::Natural;
  if (name == "essential") return BoundaryCondition::Essential;
  throw std::invalid_argument("unknown bc '" + name + "' (natural|essential)");
}

int run(const RunConfig& config) {
  try {
    if (config.resolution < 1) throw std::invalid_argument("--resolution must be >= 1");
    if (config.tol <= 0.0) throw std::invalid_argument("--tol must be positive");

    if (config.subcommand == "mesh") return run_mesh(config);
    if (config.subcommand == "solve-dirac") return run_solve_dirac(config);
    if (config.subcommand == "solve-laplace") return run_solve_laplace(config);
    if (config.subcommand == "decompose") return run_decompose(config);
    if (config.subcommand == "constants") return run_constants(config);
    if (config.subcommand == "convergence") return run_convergence(config);
    if (config.subcommand == "demo-disk") return run_demo_disk(config);
    throw std::invalid_argument("unknown subcommand '" + config.subcommand + "'");
  } catch (const ParseError& err) {
    std::cerr << "error (parse): " << err.what() << '\n';
    return 2;
  } catch (const EvalError& err) {
    std::cerr << "error (parse): " << err.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& err) {
    std::cerr << "error (parse): " << err.what() << '\n';
    return 2;
  } catch (const MeshError& err) {
    std::cerr << "error (mesh): " << err.what() << '\n';
    return 3;
  } catch (const DegenerateTriangle& err) {
    std::cerr << "error (mesh): " << err.what() << '\n';
    return 3;
  } catch (const IoError& err) {
    std::cerr << "error (io): " << err.what() << '\n';
    return 5;
  } catch (const std::exception& err) {
    std::cerr << "error (solver): " << err.what() << '\n';
    return 4;
  }
}

}  // namespace hodgedirac
