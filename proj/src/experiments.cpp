#include "mshom/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"
#include "mshom/solver.hpp"

namespace mshom {

namespace {

std::vector<double> uniform_times(double horizon, int count) {
  std::vector<double> t;
  const int n = std::max(count, 2);
  for (int i = 0; i < n; ++i) t.push_back(horizon * double(i) / double(n - 1));
  return t;
}

double trapezoid_weight(const std::vector<double>& times, std::size_t k) {
  if (times.size() < 2) return 0.0;
  if (k == 0) return 0.5 * (times[1] - times[0]);
  if (k + 1 == times.size()) return 0.5 * (times[k] - times[k - 1]);
  return 0.5 * (times[k + 1] - times[k - 1]);
}

}  // namespace

ConvergenceReport convergence_study(const ProblemInstance& inst, const StudyOptions& options) {
  for (std::size_t i = 1; i < inst.epsilons.size(); ++i)
    if (!(inst.epsilons[i] < inst.epsilons[i - 1]))
      throw ConfigError("epsilon list must be strictly decreasing");

  // cell problem and effective tensor are eps-independent
  const CellSolution cell = solve_cell(inst.coeff, options.cell_resolution);
  const EffectiveTensor tensor = effective_tensor(inst.coeff, cell);
  const auto times = uniform_times(inst.horizon, options.snapshots);

  ConvergenceReport report;
  report.rows.resize(inst.epsilons.size() * static_cast<std::size_t>(inst.replicas));

  for (std::size_t ei = 0; ei < inst.epsilons.size(); ++ei) {
    const double eps = inst.epsilons[ei];
    const int n = std::max(resolved_interior_points(eps), options.min_grid_n);
    const Grid grid = build_grid(inst.dim, n);
    const SpectralBasis basis = build_basis(grid, inst.noise);
    AveragedReaction avg(inst.reaction, basis, options.gh_order);
    avg.build_cache(norms(sample_field(grid, inst.u0)).linf + 2.0);
    const AveragedTrajectory ubar =
        run_averaged(inst, tensor, avg, grid, options.dt, times);

    double ubar_sup = 0.0;
    for (const auto& s : ubar.u) ubar_sup = std::max(ubar_sup, norms(s).l2);
    const double threshold = options.delta_tol_rel * ubar_sup;

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int replica = 0; replica < inst.replicas; ++replica) {
      try {
        const FineTrajectory fine = run_fine(inst, eps, grid, options.dt, times,
                                             static_cast<int>(ei), replica);
        ConvergenceRow row;
        row.eps = eps;
        row.replica = replica;
        for (std::size_t k = 0; k < fine.u.size(); ++k) {
          Field d = fine.u[k];
          kernels::axpy(-1.0, ubar.u[k].values, d.values, Exec::serial);
          const double err = norms(d, Exec::serial).l2;
          row.sup_l2_error = std::max(row.sup_l2_error, err);
          row.final_l2_error = err;
        }
        row.energy_sup = fine.diag.sup_u_l2 * fine.diag.sup_u_l2;
        row.grad_energy_int = fine.diag.grad_energy_int;
        row.dudt_energy = fine.diag.dudt_energy;
        report.rows[ei * static_cast<std::size_t>(inst.replicas) +
                    static_cast<std::size_t>(replica)] = row;
      } catch (...) {
#pragma omp critical
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);

    ConvergenceSummary sum;
    sum.eps = eps;
    sum.threshold = threshold;
    double acc = 0, acc2 = 0;
    int exceed = 0;
    for (int r = 0; r < inst.replicas; ++r) {
      const auto& row =
          report.rows[ei * static_cast<std::size_t>(inst.replicas) + static_cast<std::size_t>(r)];
      acc += row.sup_l2_error;
      acc2 += row.sup_l2_error * row.sup_l2_error;
      if (row.sup_l2_error > threshold) ++exceed;
      sum.mean_energy_sup += row.energy_sup;
      sum.mean_grad_energy_int += row.grad_energy_int;
      sum.mean_dudt_energy += row.dudt_energy;
    }
    const double nr = inst.replicas;
    sum.mean_error = acc / nr;
    sum.std_error = inst.replicas > 1
                        ? std::sqrt(std::max(0.0, acc2 / nr - sum.mean_error * sum.mean_error) /
                                    (nr - 1.0))
                        : 0.0;
    sum.exceed_prob = exceed / nr;
    sum.mean_energy_sup /= nr;
    sum.mean_grad_energy_int /= nr;
    sum.mean_dudt_energy /= nr;
    report.per_eps.push_back(sum);
  }
  return report;
}

GapTerms reaction_gap_terms(const ProblemInstance& inst, double eps, const FineTrajectory& fine,
                            const AveragedTrajectory& averaged, const AveragedReaction& avg,
                            const Field& phi, const TimeProfile& psi) {
  if (fine.snapshot_times.size() != averaged.snapshot_times.size() ||
      fine.u.empty() || fine.u[0].grid != averaged.u[0].grid)
    throw ConfigError("snapshot mismatch between fine and averaged trajectories");
  for (std::size_t k = 0; k < fine.snapshot_times.size(); ++k)
    if (std::fabs(fine.snapshot_times[k] - averaged.snapshot_times[k]) > 1e-12)
      throw ConfigError("snapshot mismatch between fine and averaged trajectories");

  GapTerms terms;
  const auto& times = fine.snapshot_times;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double w = trapezoid_weight(times, k) * psi(times[k]);
    const Field& ue = fine.u[k];
    const Field& ve = fine.v[k];
    const Field& ub = averaged.u[k];

    const Field a_osc = reaction_field(inst.reaction, eps, ve);
    const Field abar_eps_ue = avg.mean_reaction_oscillatory(eps, ue);
    const Field abar_eps_ub = avg.mean_reaction_oscillatory(eps, ub);
    const Field abar_ub = avg.mean_reaction(ub);

    double s1 = 0, s2 = 0, s3 = 0;
    for (std::size_t p = 0; p < ue.size(); ++p) {
      s1 += (a_osc[p] - abar_eps_ue[p]) * ue[p] * phi[p];
      s2 += (abar_eps_ue[p] * ue[p] - abar_eps_ub[p] * ub[p]) * phi[p];
      s3 += (abar_eps_ub[p] - abar_ub[p]) * ub[p] * phi[p];
    }
    const double vol = ue.grid.cell_volume();
    terms.fluctuation += w * vol * s1;
    terms.state += w * vol * s2;
    terms.oscillation += w * vol * s3;
  }
  return terms;
}

KhasminskiiReport khasminskii_scaling(const ReactionCoefficient& alpha,
                                      const SpectralBasis& basis, const Field& xi,
                                      const Field& eta, const Field& phi,
                                      const std::vector<double>& deltas,
                                      const KhasminskiiOptions& options,
                                      const GaussianStream& stream) {
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("block widths must be positive");

  // reference: invariant integral of Phi by the pointwise Gaussian reduction
  AveragedReaction avg(alpha, basis, options.gh_order);
  const double mu_phi = inner(avg.mean_reaction_oscillatory(options.eps_pattern, xi), phi);

  const double dt = options.tau / options.steps_per_tau;
  KhasminskiiReport report;
  double calib = 0.0;
  const double amplitude = 1.0 + norms(eta).l2 + norms(xi).l2;

  for (std::size_t di = 0; di < deltas.size(); ++di) {
    const double delta = deltas[di];
    const int steps = std::max(1, static_cast<int>(std::lround(delta / dt)));
    const double step_dt = delta / steps;
    std::vector<double> vals(static_cast<std::size_t>(options.samples));

#pragma omp parallel for schedule(dynamic)
    for (long s = 0; s < options.samples; ++s) {
      const auto sample_stream =
          GaussianStream::derive(stream.key, StreamPurpose::khasminskii, di,
                                 static_cast<std::uint64_t>(s));
      OuProcess v = make_ou(basis, eta, options.tau, sample_stream);
      // trapezoid average of Phi along the exact-update trajectory
      auto phi_of = [&](const Field& w) {
        return inner(reaction_field(alpha, options.eps_pattern, w, Exec::serial), phi,
                     Exec::serial);
      };
      double acc = 0.5 * phi_of(v.v);
      for (int st = 0; st < steps; ++st) {
        ou_step(v, xi, step_dt, Exec::serial);
        acc += (st + 1 == steps ? 0.5 : 1.0) * phi_of(v.v);
      }
      vals[static_cast<std::size_t>(s)] = std::fabs(acc / steps - mu_phi);
    }

    KhasminskiiPoint pt;
    pt.delta = delta;
    const double n = static_cast<double>(options.samples);
    pt.lhs = kernels::block_sum(vals, Exec::parallel) / n;
    double ss = 0.0;
    for (double v : vals) ss += (v - pt.lhs) * (v - pt.lhs);
    pt.std_error = options.samples > 1 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
    if (di == 0) calib = pt.lhs * std::sqrt(delta) / amplitude;
    pt.bound = calib * amplitude / std::sqrt(delta);
    report.points.push_back(pt);
  }

  // log-log slope by ordinary least squares
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : report.points) {
    const double x = std::log(p.delta);
    const double y = std::log(std::max(p.lhs, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(report.points.size());
  report.loglog_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return report;
}

TestFunction default_test_function(int dim) {
  TestFunction tf;
  const double pi = std::numbers::pi;
  if (dim == 1) {
    tf.value = [pi](double x, double) { return std::sin(pi * x); };
    tf.grad1 = [pi](double x, double) { return pi * std::cos(pi * x); };
    tf.grad2 = [](double, double) { return 0.0; };
  } else {
    tf.value = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    tf.grad1 = [pi](double x, double y) { return pi * std::cos(pi * x) * std::sin(pi * y); };
    tf.grad2 = [pi](double x, double y) { return pi * std::sin(pi * x) * std::cos(pi * y); };
  }
  return tf;
}

double corrector_weak_gap(const ProblemInstance& inst, double eps, const FineTrajectory& fine,
                          const AveragedTrajectory& averaged, const CellSolution& adjoint_cell,
                          const EffectiveTensor& tensor, const TestFunction& phi,
                          const TimeProfile& psi) {
  if (fine.u.empty() || averaged.u.empty() || fine.u[0].grid != averaged.u[0].grid)
    throw ConfigError("corrector residual needs matching trajectories");
  const Grid grid = fine.u[0].grid;

  // oscillating test function phi_eps = phi + eps grad(phi) . chi*(x/eps)
  const CorrectorSample cs = sample_corrector(adjoint_cell, eps, grid);
  Field phi_plain = sample_field(grid, phi.value);
  Field phi_osc = phi_plain;
  for (std::size_t p = 0; p < phi_osc.size(); ++p) {
    const auto x = grid.point(p);
    double corr = phi.grad1(x[0], x[1]) * cs.chi[0][p];
    if (grid.dim == 2) corr += phi.grad2(x[0], x[1]) * cs.chi[1][p];
    phi_osc[p] += eps * corr;
  }

  const DiffusionOperator op_eps = assemble_diffusion(
      grid, [&](double x, double y) { return inst.coeff.at(x / eps, grid.dim == 2 ? y / eps : 0.0); });
  const DiffusionOperator op_bar = assemble_diffusion(grid, tensor.sampler());

  const auto& times = fine.snapshot_times;
  double gap = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double w = trapezoid_weight(times, k) * psi(times[k]);
    gap += w * (op_eps.energy(fine.u[k], phi_osc) - op_bar.energy(averaged.u[k], phi_plain));
  }
  return std::fabs(gap);
}

}  // namespace mshom
