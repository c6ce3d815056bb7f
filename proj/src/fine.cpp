#include "mshom/fine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"
#include "mshom/solver.hpp"

namespace mshom {

namespace {

MatrixSampler oscillatory_sampler(const CellMatrix& cm, double eps, int dim) {
  return [cm, eps, dim](double x, double y) {
    return cm.at(x / eps, dim == 2 ? y / eps : 0.0);
  };
}

Field sample_forcing(const ProblemInstance& inst, const Grid& grid, double t) {
  Field f(grid);
  for (std::size_t p = 0; p < f.size(); ++p) {
    const auto x = grid.point(p);
    f[p] = inst.forcing(t, x[0], x[1]);
  }
  return f;
}

// shared marching core: the fine path updates v first, the averaged path
// evaluates the cached averaged reaction instead
struct MarchResult {
  std::vector<Field> u_snaps;
  std::vector<Field> v_snaps;
  EnergyDiagnostics diag;
};

template <class ReactionAt>
MarchResult march(const ProblemInstance& inst, const DiffusionOperator& op, const Grid& grid,
                  double dt, const std::vector<std::uint64_t>& snaps, std::uint64_t total_steps,
                  Field u, OuProcess* v_state, ReactionAt&& reaction_at, bool track_slack) {
  MarchResult res;
  const double sup_alpha = inst.reaction.sup_bound;
  if (dt * sup_alpha > 0.5)
    throw ConfigError("explicit reaction needs dt |alpha|_inf <= 1/2, have dt = " +
                      std::to_string(dt));

  EnergyDiagnostics& diag = res.diag;
  diag.sup_u_l2 = norms(u).l2;
  if (v_state) diag.sup_v_l2 = norms(v_state->v).l2;

  std::size_t next_snap = 0;
  auto maybe_snapshot = [&](std::uint64_t step) {
    while (next_snap < snaps.size() && snaps[next_snap] == step) {
      res.u_snaps.push_back(u);
      if (v_state) res.v_snaps.push_back(v_state->v);
      ++next_snap;
    }
  };
  maybe_snapshot(0);

  Field rhs(grid), reaction(grid);
  const double m_ell = op.sample_min();
  for (std::uint64_t n = 0; n < total_steps; ++n) {
    const double t = static_cast<double>(n) * dt;
    // fast variable first, slow state frozen over the step
    reaction = reaction_at(u, t, v_state);
    const Field f = sample_forcing(inst, grid, t);
    for (std::size_t p = 0; p < rhs.size(); ++p)
      rhs[p] = u[p] + dt * (reaction[p] * u[p] + f[p]);
    Field u_new = solve_implicit(op, dt, rhs);

    const auto nn = norms(u_new);
    if (!std::isfinite(nn.l2) || !std::isfinite(nn.linf))
      throw NumericError("state diverged at step " + std::to_string(n) + " (t = " +
                         std::to_string(t + dt) + ")");

    if (track_slack) {
      const double nu_old = norms(u).l2;
      const double lhs = (1.0 - dt * sup_alpha) * nn.l2 * nn.l2 +
                         2.0 * dt * m_ell * nn.h1_semi * nn.h1_semi;
      const double rhs_e = (1.0 + dt * sup_alpha) * nu_old * nu_old +
                           2.0 * dt * inner(f, u_new);
      diag.worst_energy_slack = std::max(diag.worst_energy_slack, lhs - rhs_e);
    }

    double diff2 = 0.0;
    for (std::size_t p = 0; p < u.size(); ++p) {
      const double d = u_new[p] - u[p];
      diff2 += d * d;
    }
    diag.dudt_energy += grid.cell_volume() * diff2 / dt;
    diag.grad_energy_int += dt * nn.h1_semi * nn.h1_semi;
    diag.sup_u_l2 = std::max(diag.sup_u_l2, nn.l2);
    if (v_state) diag.sup_v_l2 = std::max(diag.sup_v_l2, norms(v_state->v).l2);

    u = std::move(u_new);
    maybe_snapshot(n + 1);
  }
  return res;
}

}  // namespace

int resolved_interior_points(double eps) {
  // h = 1/(n+1) <= eps/8
  return static_cast<int>(std::ceil(8.0 / eps)) - 1;
}

std::vector<std::uint64_t> snapshot_steps(const std::vector<double>& times, double dt,
                                          std::uint64_t total_steps) {
  std::vector<std::uint64_t> steps;
  for (double t : times) {
    const auto s = static_cast<std::uint64_t>(
        std::clamp<long long>(std::llround(t / dt), 0, static_cast<long long>(total_steps)));
    steps.push_back(s);
  }
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

void step_fine(const ProblemInstance& inst, const DiffusionOperator& op, Field& u,
               OuProcess& v_state, double t, double dt, Exec exec) {
  ou_step(v_state, u, dt, exec);
  const Field reaction =
      reaction_field(inst.reaction, v_state.tau, v_state.v, exec);  // tau == eps
  Field rhs(u.grid);
  for (std::size_t p = 0; p < rhs.size(); ++p) {
    const auto x = u.grid.point(p);
    rhs[p] = u[p] + dt * (reaction[p] * u[p] + inst.forcing(t, x[0], x[1]));
  }
  u = solve_implicit(op, dt, rhs, exec);
}

FineTrajectory run_fine(const ProblemInstance& inst, double eps, const Grid& grid, double dt,
                        const std::vector<double>& snapshot_times, int eps_index, int replica,
                        bool track_energy_slack) {
  if (grid.h > eps / 8.0 + 1e-12)
    throw ConfigError("grid does not resolve epsilon: h = " + std::to_string(grid.h) +
                      " > eps/8 = " + std::to_string(eps / 8.0));
  const auto total_steps = static_cast<std::uint64_t>(std::llround(inst.horizon / dt));
  const auto snaps = snapshot_steps(snapshot_times, dt, total_steps);

  const DiffusionOperator op =
      assemble_diffusion(grid, oscillatory_sampler(inst.coeff, eps, grid.dim));
  const SpectralBasis basis = build_basis(grid, inst.noise);

  Field u = sample_field(grid, inst.u0);
  Field v0 = sample_field(grid, inst.v0);
  const auto stream = GaussianStream::derive(inst.seed, StreamPurpose::ou_noise,
                                             static_cast<std::uint64_t>(eps_index),
                                             static_cast<std::uint64_t>(replica));
  OuProcess v_state = make_ou(basis, std::move(v0), eps, stream);

  auto reaction_at = [&](const Field& u_cur, double, OuProcess* vs) {
    ou_step(*vs, u_cur, dt);
    return reaction_field(inst.reaction, eps, vs->v);
  };
  MarchResult res = march(inst, op, grid, dt, snaps, total_steps, std::move(u), &v_state,
                          reaction_at, track_energy_slack);

  FineTrajectory traj;
  traj.eps = eps;
  traj.dt = dt;
  for (auto s : snaps) traj.snapshot_times.push_back(static_cast<double>(s) * dt);
  traj.u = std::move(res.u_snaps);
  traj.v = std::move(res.v_snaps);
  traj.diag = res.diag;
  return traj;
}

AveragedTrajectory run_averaged(const ProblemInstance& inst, const EffectiveTensor& tensor,
                                const AveragedReaction& avg, const Grid& grid, double dt,
                                const std::vector<double>& snapshot_times,
                                const Field* initial_override, bool track_energy_slack) {
  const auto total_steps = static_cast<std::uint64_t>(std::llround(inst.horizon / dt));
  const auto snaps = snapshot_steps(snapshot_times, dt, total_steps);
  const DiffusionOperator op = assemble_diffusion(grid, tensor.sampler());

  Field u = initial_override ? *initial_override : sample_field(grid, inst.u0);
  auto reaction_at = [&](const Field& u_cur, double, OuProcess*) {
    return avg.mean_reaction(u_cur, avg.has_cache());
  };
  MarchResult res = march(inst, op, grid, dt, snaps, total_steps, std::move(u), nullptr,
                          reaction_at, track_energy_slack);

  AveragedTrajectory traj;
  traj.dt = dt;
  for (auto s : snaps) traj.snapshot_times.push_back(static_cast<double>(s) * dt);
  traj.u = std::move(res.u_snaps);
  traj.diag = res.diag;
  return traj;
}

StabilityResult gronwall_stability(const ProblemInstance& inst, const EffectiveTensor& tensor,
                                   const AveragedReaction& avg, const Grid& grid, double dt,
                                   const std::vector<double>& snapshot_times,
                                   const Field& delta) {
  const AveragedTrajectory base = run_averaged(inst, tensor, avg, grid, dt, snapshot_times);
  Field shifted = sample_field(grid, inst.u0);
  kernels::axpy(1.0, delta.values, shifted.values, Exec::parallel);
  const AveragedTrajectory pert =
      run_averaged(inst, tensor, avg, grid, dt, snapshot_times, &shifted);

  const double dnorm = norms(delta).l2;
  StabilityResult out;
  if (dnorm == 0.0) {
    for (std::size_t k = 0; k < base.u.size(); ++k) {
      Field d = pert.u[k];
      kernels::axpy(-1.0, base.u[k].values, d.values, Exec::parallel);
      out.growth_factor = std::max(out.growth_factor, norms(d).l2);
    }
    return out;  // identical trajectories give exactly zero
  }
  for (std::size_t k = 0; k < base.u.size(); ++k) {
    Field d = pert.u[k];
    kernels::axpy(-1.0, base.u[k].values, d.values, Exec::parallel);
    out.growth_factor = std::max(out.growth_factor, norms(d).l2 / dnorm);
  }
  return out;
}

}  // namespace mshom
