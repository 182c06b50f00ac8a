#include "hodgedirac/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace hodgedirac {

namespace {

constexpr int kDensePencilLimit = 2000;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::pair<double, double> norms(const GradedComplex& complex, const Cochain& x) {
  if (x.size() != complex.total_dim()) throw SolverFailure("norms: cochain length mismatch");
  const double w2 = complex.inner(x.values, x.values);
  const Vec dx = complex.coboundary() * x.values;
  const double d2 = complex.inner(dx, dx);
  return {std::sqrt(w2), std::sqrt(w2 + d2)};
}

double poincare_constant(const GradedComplex& complex) {
  const int n = complex.total_dim();
  if (n == 0) throw EmptyComplement("poincare_constant: empty complex");
  if (complex.coboundary().nonZeros() == 0)
    throw EmptyComplement("poincare_constant: ker(D) is the whole space");

  SparseMat md = (complex.mass() * complex.coboundary()).pruned();
  SparseMat stiffness = (complex.coboundary().transpose() * md).pruned();

  const GeneralizedEig eig = generalized_symmetric_eig(stiffness, complex.mass());
  const double lambda_max = eig.values[eig.values.size() - 1];
  const double thresh = kRankTolerance * std::max(lambda_max, 0.0);

  for (Eigen::Index i = 0; i < eig.values.size(); ++i)
    if (eig.values[i] > thresh) return std::sqrt(1.0 + 1.0 / eig.values[i]);
  throw EmptyComplement("poincare_constant: no nonzero eigenvalue found");
}

double infsup_constant(const GradedComplex& complex) {
  const int n = complex.total_dim();
  const int h = static_cast<int>(complex.harmonic_matrix().cols());

  const SaddleSystem system = assemble_dirac_system(complex, Vec(Vec::Zero(n)));

  // Gram matrix of the (V x harmonic) norm: blockdiag(M + D^T M D, H^T M H).
  SparseMat md = (complex.mass() * complex.coboundary()).pruned();
  SparseMat vblock = complex.mass() + SparseMat(complex.coboundary().transpose() * md);
  const DenseMat hgram = complex.harmonic_matrix().transpose() *
                         (complex.mass() * complex.harmonic_matrix());

  std::vector<Eigen::Triplet<double>> triplets;
  for (int k = 0; k < vblock.outerSize(); ++k)
    for (SparseMat::InnerIterator it(vblock, k); it; ++it)
      triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j)
      if (hgram(i, j) != 0.0) triplets.emplace_back(n + i, n + j, hgram(i, j));
  SparseMat gram(n + h, n + h);
  gram.setFromTriplets(triplets.begin(), triplets.end());

  if (n + h <= kDensePencilLimit) {
    const GeneralizedEig eig = generalized_symmetric_eig(system.matrix, gram);
    double smallest = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < eig.values.size(); ++i)
      smallest = std::min(smallest, std::abs(eig.values[i]));
    return smallest;
  }
  try {
    return smallest_eig_magnitude(system.matrix, gram);
  } catch (const SingularSystem& err) {
    throw SolverFailure(std::string("infsup_constant: ") + err.what());
  }
}

StabilityConstants stability_constants(const GradedComplex& complex) {
  StabilityConstants out;
  out.c_P = poincare_constant(complex);
  out.gamma_h = infsup_constant(complex);
  out.h = max_edge_length(complex.mesh());
  out.dims = complex.dims();
  return out;
}

double best_approx_error(const GradedComplex& complex, const AnalyticForm& w,
                         const TriangleQuadrature& quad) {
  const int k = w.degree;
  const Vec load = load_vector(complex.mesh(), k, w, complex.bc(), quad);
  Vec graded = Vec::Zero(complex.total_dim());
  graded.segment(complex.offset(k), complex.dim(k)) = load;
  const Vec coeff = complex.apply_mass_inverse(graded);
  const Vec full = complex.full_component(coeff, k);
  return l2_error(complex.mesh(), k, full, w, quad);
}

ManufacturedProblem smooth_one_form_problem() {
  using std::numbers::pi;
  ManufacturedProblem p;
  p.name = "smooth1";
  p.solution.f1 = AnalyticForm::one_form(
      [](double x, double y) { return 3.0 * std::sin(pi * x) * std::cos(pi * y); },
      [](double x, double y) { return std::cos(pi * x) * std::sin(pi * y); });
  // d u = (d_x u2 - d_y u1) dx^dy, d* u = -(d_x u1 + d_y u2).
  p.derivative.f2 = AnalyticForm::scalar(2, [](double x, double y) {
    return 2.0 * pi * std::sin(pi * x) * std::sin(pi * y);
  });
  p.source.f0 = AnalyticForm::scalar(0, [](double x, double y) {
    return -4.0 * pi * std::cos(pi * x) * std::cos(pi * y);
  });
  p.source.f2 = p.derivative.f2;
  return p;
}

ManufacturedProblem harmonic_source_problem(int index) {
  ManufacturedProblem p;
  p.name = "harmonic" + std::to_string(index);
  p.harmonic_source = index;
  return p;
}

ManufacturedProblem named_problem(const std::string& name) {
  if (name == "smooth1") return smooth_one_form_problem();
  if (name.rfind("harmonic", 0) == 0) {
    const std::string tail = name.substr(8);
    return harmonic_source_problem(tail.empty() ? 0 : std::stoi(tail));
  }
  throw std::invalid_argument("named_problem: unknown problem '" + name + "'");
}

namespace {

AnalyticForm form_or_zero(const std::optional<AnalyticForm>& f, int degree) {
  return f ? *f : AnalyticForm::zero(degree);
}

ConvergenceLevel measure_level(const GradedComplex& complex,
                               const ManufacturedProblem& problem, double tol) {
  ConvergenceLevel level;
  level.h = max_edge_length(complex.mesh());
  const SimplicialMesh& mesh = complex.mesh();

  DiracSolution sol;
  Vec exact_p = Vec::Zero(complex.harmonic_matrix().cols());
  if (problem.harmonic_source) {
    const int idx = *problem.harmonic_source;
    if (idx < 0 || idx >= complex.harmonic_matrix().cols())
      throw SolverFailure("convergence_study: harmonic source index out of range");
    exact_p[idx] = 1.0;
    sol = solve_dirac(complex, harmonic_cochain(complex, exact_p), tol);
  } else {
    sol = solve_dirac(complex, problem.source, tol);
  }

  // True L2 errors by elementwise quadrature against the analytic fields.
  double errW2 = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double e = l2_error(mesh, k, complex.full_component(sol.u.values, k),
                              form_or_zero(problem.solution.component(k), k));
    errW2 += e * e;
  }
  const Vec du = complex.coboundary() * sol.u.values;
  double errdu2 = 0.0;
  for (int k = 0; k < 2; ++k) {
    const double e = l2_error(mesh, k + 1, complex.full_component(du, k + 1),
                              form_or_zero(problem.derivative.component(k + 1), k + 1));
    errdu2 += e * e;
  }
  level.errW_u = std::sqrt(errW2);
  level.err_du = std::sqrt(errdu2);
  level.errV_u = std::sqrt(errW2 + errdu2);
  level.err_p = (sol.p - exact_p).norm();

  // Component errors of the interpolated error, via the discrete Hodge
  // decomposition.
  Vec interp = Vec::Zero(complex.total_dim());
  if (!problem.harmonic_source) {
    for (int k = 0; k < 3; ++k) {
      const auto& f = problem.solution.component(k);
      if (!f) continue;
      interp.segment(complex.offset(k), complex.dim(k)) = de_rham_map(mesh, *f, complex.bc());
    }
  }
  const HodgeParts parts = hodge_decompose(complex, Cochain(interp - sol.u.values));
  level.err_Bpart = norms(complex, parts.b_part).first;
  level.err_Bstarpart = norms(complex, parts.bstar_part).first;
  return level;
}

}  // namespace

ConvergenceReport convergence_study(Domain domain, BoundaryCondition bc,
                                    const ManufacturedProblem& problem, int levels,
                                    int base_resolution, double tol) {
  if (levels < 2) throw std::invalid_argument("convergence_study: need at least 2 levels");
  ConvergenceReport report;
  int resolution = base_resolution;
  for (int l = 0; l < levels; ++l, resolution *= 2) {
    const GradedComplex complex(generate_mesh(domain, resolution), bc);
    report.levels.push_back(measure_level(complex, problem, tol));
  }
  return report;
}

std::vector<std::array<double, 6>> ConvergenceReport::pair_rates() const {
  std::vector<std::array<double, 6>> rates;
  for (size_t l = 0; l + 1 < levels.size(); ++l) {
    const auto prev = levels[l].columns();
    const auto next = levels[l + 1].columns();
    const double hr = std::log(levels[l].h / levels[l + 1].h);
    std::array<double, 6> row{};
    for (int c = 0; c < 6; ++c) {
      if (prev[static_cast<size_t>(c)] > 0.0 && next[static_cast<size_t>(c)] > 0.0 && hr > 0.0)
        row[static_cast<size_t>(c)] =
            std::log(prev[static_cast<size_t>(c)] / next[static_cast<size_t>(c)]) / hr;
      else
        row[static_cast<size_t>(c)] = std::numeric_limits<double>::quiet_NaN();
    }
    rates.push_back(row);
  }
  return rates;
}

std::array<double, 6> ConvergenceReport::last_rates() const {
  const auto rates = pair_rates();
  if (rates.empty()) throw std::invalid_argument("last_rates: need at least two levels");
  return rates.back();
}

std::string convergence_csv(const ConvergenceReport& report) {
  std::string out = "h,errW_u,errV_u,err_du,err_p,err_Bpart,err_Bstarpart\n";
  for (const auto& level : report.levels) {
    out += g17(level.h);
    for (double v : level.columns()) out += "," + g17(v);
    out += "\n";
  }
  if (report.levels.size() >= 2) {
    out += "rates";
    for (double r : report.last_rates()) out += "," + g17(r);
    out += "\n";
  }
  return out;
}

}  // namespace hodgedirac
