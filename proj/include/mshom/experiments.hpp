#pragma once

// Verification harness: the eps-convergence study of the fine system against
// the averaged limit, the three-term decomposition of the reaction gap, the
// ergodic time-block averaging estimate, and the oscillating-test-function
// weak-form residual.

#include <cstdint>
#include <functional>
#include <vector>

#include "mshom/averaging.hpp"
#include "mshom/cell.hpp"
#include "mshom/fine.hpp"
#include "mshom/grid.hpp"
#include "mshom/ou.hpp"
#include "mshom/problem.hpp"

namespace mshom {

using TimeProfile = std::function<double(double t)>;

struct ConvergenceRow {
  double eps = 0;
  int replica = 0;
  double sup_l2_error = 0;    // max over snapshots of ||u_eps - ubar||
  double final_l2_error = 0;  // at the last snapshot
  double energy_sup = 0;      // sup_t ||u||^2
  double grad_energy_int = 0;
  double dudt_energy = 0;
};

struct ConvergenceSummary {
  double eps = 0;
  double mean_error = 0;
  double std_error = 0;
  double exceed_prob = 0;  // empirical P(sup error > threshold)
  double threshold = 0;    // delta_tol_rel * ||ubar||_{C([0,T];L2)} on this grid
  double mean_energy_sup = 0;
  double mean_grad_energy_int = 0;
  double mean_dudt_energy = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;          // one per (eps, replica)
  std::vector<ConvergenceSummary> per_eps;   // ordered as the eps list
};

struct StudyOptions {
  double dt = 2e-3;
  int snapshots = 33;
  double delta_tol_rel = 0.1;  // threshold factor for the exceedance curve
  int cell_resolution = 256;
  int gh_order = 20;
  int min_grid_n = 0;  // 0: use the eps resolution rule only
};

// Runs the averaged solver once per eps grid and the fine solver per
// (eps, replica); reports error metrics and energy diagnostics. Asserts
// nothing: reporting only.
ConvergenceReport convergence_study(const ProblemInstance& inst, const StudyOptions& options);

// ---- three-term decomposition of the reaction gap -------------------------

struct GapTerms {
  double fluctuation = 0;  // fast process against its frozen-state average
  double state = 0;        // averaged reaction at u_eps vs at ubar
  double oscillation = 0;  // oscillatory vs cell-averaged reaction at ubar
};

// Time-snapshot quadrature of the three integrals against phi(x) psi(t).
// The two trajectories must share grid and snapshot times.
GapTerms reaction_gap_terms(const ProblemInstance& inst, double eps, const FineTrajectory& fine,
                            const AveragedTrajectory& averaged, const AveragedReaction& avg,
                            const Field& phi, const TimeProfile& psi);

// ---- ergodic block-average scaling ----------------------------------------

struct KhasminskiiPoint {
  double delta = 0;
  double lhs = 0;  // E | (1/delta) int Phi(v) ds - mu(Phi) |
  double std_error = 0;
  double bound = 0;  // c (1 + |eta| + |xi|) / sqrt(delta), c fixed at the first delta
};

struct KhasminskiiReport {
  std::vector<KhasminskiiPoint> points;
  double loglog_slope = 0;
};

struct KhasminskiiOptions {
  double tau = 0.01;  // fast time scale; deltas must sit well above it
  double eps_pattern = 0.1;  // spatial period used in the oscillatory functional
  int samples = 10000;
  int steps_per_tau = 4;
  int gh_order = 20;
};

// Time-constant functional Phi(w) = <alpha(x/eps, w), phi>; the reference
// invariant integral is the pointwise Gauss-Hermite reduction.
KhasminskiiReport khasminskii_scaling(const ReactionCoefficient& alpha,
                                      const SpectralBasis& basis, const Field& xi,
                                      const Field& eta, const Field& phi,
                                      const std::vector<double>& deltas,
                                      const KhasminskiiOptions& options,
                                      const GaussianStream& stream);

// ---- oscillating test function residual ------------------------------------

struct TestFunction {
  ScalarField value;
  ScalarField grad1;
  ScalarField grad2;  // unused in 1D
};

// smooth default: product of sin(pi x_i)
TestFunction default_test_function(int dim);

// | int psi(t) [ a_eps(u_eps, phi_eps) - abar(ubar, phi) ] dt | with
// phi_eps = phi + eps grad(phi) . chi*(x/eps)
double corrector_weak_gap(const ProblemInstance& inst, double eps, const FineTrajectory& fine,
                          const AveragedTrajectory& averaged, const CellSolution& adjoint_cell,
                          const EffectiveTensor& tensor, const TestFunction& phi,
                          const TimeProfile& psi);

}  // namespace mshom
