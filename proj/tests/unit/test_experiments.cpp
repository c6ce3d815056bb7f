#include <cmath>

#include "doctest.h"
#include "mshom/error.hpp"
#include "mshom/experiments.hpp"
#include "mshom/problem.hpp"

using namespace mshom;

namespace {

std::vector<double> times(double horizon, int count) {
  std::vector<double> t;
  for (int i = 0; i < count; ++i) t.push_back(horizon * double(i) / double(count - 1));
  return t;
}

}  // namespace

TEST_CASE("eps-independent problem: error is scheme-level only") {
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 0, 0.0, 2.0);  // q = 0
  opt.alpha_constant = -0.8;
  auto inst = make_builtin("constant_reaction", opt);
  inst.horizon = 0.2;
  inst.epsilons = {0.4, 0.2};
  inst.replicas = 1;

  StudyOptions so;
  so.dt = 2e-3;
  so.snapshots = 9;
  so.cell_resolution = 32;
  const auto report = convergence_study(inst, so);
  REQUIRE(report.per_eps.size() == 2);
  for (const auto& s : report.per_eps) CHECK(s.mean_error < 1e-3);
}

TEST_CASE("single replica with q = 0 is reproducible bitwise") {
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 0, 0.0, 2.0);
  auto inst = make_builtin("layered_dissipative", opt);
  inst.horizon = 0.1;
  inst.epsilons = {0.25};
  inst.replicas = 1;
  StudyOptions so;
  so.dt = 2e-3;
  so.snapshots = 5;
  so.cell_resolution = 64;
  const auto a = convergence_study(inst, so);
  const auto b = convergence_study(inst, so);
  CHECK(a.rows[0].sup_l2_error == b.rows[0].sup_l2_error);
  CHECK(a.rows[0].final_l2_error == b.rows[0].final_l2_error);
}

TEST_CASE("gap terms: constant alpha collapses the decomposition") {
  // layered diffusion keeps the trajectories apart, but with alpha constant
  // the fluctuation and oscillation terms vanish identically
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 4, 0.3, 2.0);
  auto inst = make_builtin("layered", opt);
  inst.reaction = make_reaction("constant", -0.5);
  inst.horizon = 0.1;
  inst.epsilons = {0.25};
  const Grid grid = build_grid(1, 63);
  const auto basis = build_basis(grid, inst.noise);
  AveragedReaction avg(inst.reaction, basis);
  const auto tensor = effective_tensor(inst.coeff, solve_cell(inst.coeff, 64));
  const auto snap = times(0.1, 5);
  const auto fine = run_fine(inst, 0.25, grid, 2e-3, snap, 0, 0);
  const auto ubar = run_averaged(inst, tensor, avg, grid, 2e-3, snap);
  const Field phi = sample_field(grid, [](double x, double) { return x * (1.0 - x); });
  const auto terms = reaction_gap_terms(inst, 0.25, fine, ubar, avg, phi,
                                        [](double) { return 1.0; });
  // alpha does not depend on eta or y: S1 and S3 vanish identically
  CHECK(terms.fluctuation == 0.0);
  CHECK(terms.oscillation == 0.0);
  CHECK(std::fabs(terms.state) > 0.0);  // state difference remains
}

TEST_CASE("gap terms: noiseless fast relaxation makes the fluctuation term small") {
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 0, 0.0, 2.0);
  auto inst = make_builtin("layered_dissipative", opt);
  inst.horizon = 0.2;
  const double eps = 0.02;
  inst.epsilons = {eps};
  const Grid grid = build_grid(1, resolved_interior_points(eps));
  const auto basis = build_basis(grid, inst.noise);
  AveragedReaction avg(inst.reaction, basis);
  const auto tensor = effective_tensor(inst.coeff, solve_cell(inst.coeff, 128));
  const auto snap = times(0.2, 9);
  const auto fine = run_fine(inst, eps, grid, 1e-3, snap, 0, 0);
  const auto ubar = run_averaged(inst, tensor, avg, grid, 1e-3, snap);
  const Field phi = sample_field(grid, [](double x, double) { return x * (1.0 - x); });
  const auto terms =
      reaction_gap_terms(inst, eps, fine, ubar, avg, phi, [](double) { return 1.0; });
  // with q = 0 and sigma = 0 the measure degenerates: the only gap left in S1
  // is the O(eps) lag of v behind u
  CHECK(std::fabs(terms.fluctuation) < 0.05);
}

TEST_CASE("snapshot mismatch is rejected") {
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 2, 0.1, 2.0);
  auto inst = make_builtin("layered_dissipative", opt);
  inst.horizon = 0.1;
  inst.epsilons = {0.25};
  const Grid grid = build_grid(1, 63);
  const auto basis = build_basis(grid, inst.noise);
  AveragedReaction avg(inst.reaction, basis);
  const EffectiveTensor identity;
  const auto fine = run_fine(inst, 0.25, grid, 2e-3, times(0.1, 5), 0, 0);
  const auto ubar = run_averaged(inst, identity, avg, grid, 2e-3, times(0.1, 3));
  const Field phi(grid, 1.0);
  CHECK_THROWS_AS((void)reaction_gap_terms(inst, 0.25, fine, ubar, avg, phi,
                                           [](double) { return 1.0; }),
                  ConfigError);
}

TEST_CASE("khasminskii block averaging") {
  const Grid grid = build_grid(1, 15);
  const auto spec = NoiseSpec::power_law(1, 4, 0.5, 2.0);
  const auto basis = build_basis(grid, spec);
  const Field xi = sample_field(grid, [](double x, double) { return 0.5 * std::sin(3.0 * x); });
  const Field eta(grid);
  const Field phi = sample_field(grid, [](double x, double) { return x * (1.0 - x); });
  const auto stream = GaussianStream::derive(99, StreamPurpose::khasminskii);

  SUBCASE("zero functional gives zero lhs for every delta") {
    const auto alpha = make_reaction("zero");
    KhasminskiiOptions ko;
    ko.samples = 16;
    const auto rep = khasminskii_scaling(alpha, basis, xi, eta, phi, {0.1, 0.2}, ko, stream);
    for (const auto& p : rep.points) CHECK(p.lhs == 0.0);
  }

  SUBCASE("lhs decreases with the block width (ergodic averaging)") {
    const auto alpha = make_reaction("dissipative");
    KhasminskiiOptions ko;
    ko.tau = 0.01;
    ko.samples = 600;
    const auto rep =
        khasminskii_scaling(alpha, basis, xi, eta, phi, {0.1, 0.4, 1.6}, ko, stream);
    REQUIRE(rep.points.size() == 3);
    CHECK(rep.points[2].lhs <
          rep.points[0].lhs + 2.0 * (rep.points[0].std_error + rep.points[2].std_error));
    CHECK(rep.loglog_slope < 0.0);
    // bound envelope is calibrated at the first width
    CHECK(rep.points[0].bound == doctest::Approx(rep.points[0].lhs));
  }
}

TEST_CASE("corrector residual vanishes for the eps-independent instance") {
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 0, 0.0, 2.0);
  opt.alpha_constant = -0.5;
  auto inst = make_builtin("constant_reaction", opt);
  inst.horizon = 0.2;
  inst.epsilons = {0.25};
  const Grid grid = build_grid(1, 63);
  const auto basis = build_basis(grid, inst.noise);
  AveragedReaction avg(inst.reaction, basis);
  const auto cell = solve_cell(inst.coeff, 64);
  const auto adj = solve_cell(inst.coeff, 64, true);
  const auto tensor = effective_tensor(inst.coeff, cell);
  const auto snap = times(0.2, 9);
  const auto fine = run_fine(inst, 0.25, grid, 2e-3, snap, 0, 0);
  const auto ubar = run_averaged(inst, tensor, avg, grid, 2e-3, snap);
  const double gap = corrector_weak_gap(inst, 0.25, fine, ubar, adj, tensor,
                                        default_test_function(1), [](double) { return 1.0; });
  CHECK(gap < 1e-3);
}

TEST_CASE("corrector residual shrinks with eps for the layered instance") {
  // q = 0 isolates the homogenization part; 32 grid points per oscillation
  // period keep the stencil mismatch below the weak-convergence signal
  InstanceOptions opt;
  opt.dim = 1;
  opt.noise = NoiseSpec::power_law(1, 0, 0.0, 2.0);
  auto inst = make_builtin("layered", opt);
  inst.horizon = 0.2;
  inst.epsilons = {0.2, 0.05};
  const auto cell = solve_cell(inst.coeff, 256);
  const auto adj = solve_cell(inst.coeff, 256, true);
  const auto tensor = effective_tensor(inst.coeff, cell);
  const auto snap = times(0.2, 17);
  std::vector<double> gaps;
  for (std::size_t ei = 0; ei < inst.epsilons.size(); ++ei) {
    const double eps = inst.epsilons[ei];
    const int n = static_cast<int>(std::lround(32.0 / eps)) - 1;
    const Grid grid = build_grid(1, n);
    const auto basis = build_basis(grid, inst.noise);
    AveragedReaction avg(inst.reaction, basis);
    const auto fine = run_fine(inst, eps, grid, 1e-3, snap, static_cast<int>(ei), 0);
    const auto ubar = run_averaged(inst, tensor, avg, grid, 1e-3, snap);
    gaps.push_back(corrector_weak_gap(inst, eps, fine, ubar, adj, tensor,
                                      default_test_function(1), [](double) { return 1.0; }));
  }
  CHECK(gaps[1] < 0.5 * gaps[0]);
}
