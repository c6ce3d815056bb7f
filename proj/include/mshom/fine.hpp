#pragma once

// Time integration of the coupled fast-slow system
//   du = div(A(x/eps) grad u) dt + alpha(x/eps, v) u dt + f dt,   u|boundary = 0
//   dv = -(1/eps)(v - u) dt + sqrt(Q/eps) dW
// by first-order splitting: exact mean-reverting update of v with u frozen
// over the step, then backward-Euler diffusion with the reaction evaluated
// explicitly at the updated v. Running energy diagnostics mirror the uniform
// estimates of the slow component.

#include <cstdint>
#include <vector>

#include "mshom/averaging.hpp"
#include "mshom/cell.hpp"
#include "mshom/diffusion.hpp"
#include "mshom/grid.hpp"
#include "mshom/ou.hpp"
#include "mshom/problem.hpp"

namespace mshom {

struct EnergyDiagnostics {
  double sup_u_l2 = 0;         // sup_t ||u||
  double grad_energy_int = 0;  // int_0^T |u|_{H1}^2 dt
  double dudt_energy = 0;      // sum dt ||(u_{n+1} - u_n)/dt||^2
  double sup_v_l2 = 0;         // sup_t ||v|| (fine runs only)
  // worst slack of the per-step discrete energy inequality
  //   (1 - dt a) ||u'||^2 + 2 dt m |u'|_{H1}^2
  //     <= (1 + dt a) ||u||^2 + 2 dt <f, u'>,  a = |alpha|_inf
  // positive slack means a violation
  double worst_energy_slack = -1e300;
};

struct FineTrajectory {
  double eps = 0;
  double dt = 0;
  std::vector<double> snapshot_times;  // snapped to step multiples
  std::vector<Field> u;
  std::vector<Field> v;
  EnergyDiagnostics diag;
};

// Grid choice for a given eps under the resolution rule h <= eps / 8.
int resolved_interior_points(double eps);

// One splitting step; v_state.tau must equal eps. Exposed for tests.
void step_fine(const ProblemInstance& inst, const DiffusionOperator& op, Field& u,
               OuProcess& v_state, double t, double dt, Exec exec = Exec::parallel);

// Full trajectory. Throws ConfigError when the grid does not resolve eps
// (h > eps/8) or when dt |alpha|_inf > 1/2; NumericError on NaN or solver
// failure. Deterministic given (instance.seed, eps index, replica).
FineTrajectory run_fine(const ProblemInstance& inst, double eps, const Grid& grid, double dt,
                        const std::vector<double>& snapshot_times, int eps_index, int replica,
                        bool track_energy_slack = false);

struct AveragedTrajectory {
  double dt = 0;
  std::vector<double> snapshot_times;
  std::vector<Field> u;
  EnergyDiagnostics diag;
};

// Deterministic limit equation with constant tensor Abar and the averaged
// reaction (evaluated through the eta-table cache).
AveragedTrajectory run_averaged(const ProblemInstance& inst, const EffectiveTensor& tensor,
                                const AveragedReaction& avg, const Grid& grid, double dt,
                                const std::vector<double>& snapshot_times,
                                const Field* initial_override = nullptr,
                                bool track_energy_slack = false);

struct StabilityResult {
  double growth_factor = 0;  // sup_t ||u1 - u2|| / ||delta||
};

// Perturbation growth of the averaged solver (discrete Gronwall check).
StabilityResult gronwall_stability(const ProblemInstance& inst, const EffectiveTensor& tensor,
                                   const AveragedReaction& avg, const Grid& grid, double dt,
                                   const std::vector<double>& snapshot_times, const Field& delta);

// Snap requested times to step indices (unique, sorted, clamped to [0, T]).
std::vector<std::uint64_t> snapshot_steps(const std::vector<double>& times, double dt,
                                          std::uint64_t total_steps);

}  // namespace mshom
