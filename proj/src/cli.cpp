#include "mshom/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "mshom/csv.hpp"
#include "mshom/error.hpp"
#include "mshom/experiments.hpp"
#include "mshom/svg.hpp"

namespace mshom {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

struct OutputTracker {
  fs::path dir;
  std::vector<fs::path> written;

  explicit OutputTracker(const std::string& out_dir) : dir(out_dir) {
    fs::create_directories(dir);
  }
  std::string path(const std::string& name) {
    const fs::path p = dir / name;
    written.push_back(p);
    return p.string();
  }
  void discard_all() {
    for (const auto& p : written) {
      std::error_code ec;
      fs::remove(p, ec);
    }
  }
};

InstanceOptions instance_options(const RunConfig& cfg) {
  InstanceOptions o;
  o.dim = cfg.dimension;
  o.noise = NoiseSpec::power_law(cfg.dimension, cfg.noise_modes, cfg.noise_q0, cfg.noise_decay);
  o.horizon = cfg.horizon;
  o.epsilons = cfg.epsilon;
  o.replicas = cfg.replicas;
  o.seed = cfg.seed;
  o.forcing = cfg.forcing;
  o.forcing_amplitude = cfg.forcing_amplitude;
  o.u0 = cfg.u0;
  o.u0_amplitude = cfg.u0_amplitude;
  o.v0 = cfg.v0;
  o.v0_amplitude = cfg.v0_amplitude;
  o.alpha_constant = cfg.alpha_constant;
  return o;
}

std::vector<double> snapshot_times(const RunConfig& cfg) {
  std::vector<double> t;
  const int n = std::max(cfg.snapshots, 2);
  for (int i = 0; i < n; ++i) t.push_back(cfg.horizon * double(i) / double(n - 1));
  return t;
}

Grid grid_for_eps(const RunConfig& cfg, double eps, int points_per_period = 8) {
  const int auto_n = static_cast<int>(std::ceil(points_per_period / eps)) - 1;
  return build_grid(cfg.dimension, std::max(cfg.grid_n, auto_n));
}

Grid plain_grid(const RunConfig& cfg, int fallback_n) {
  return build_grid(cfg.dimension, cfg.grid_n > 0 ? cfg.grid_n : fallback_n);
}

void write_summary(OutputTracker& tracker, const std::string& subcommand, const RunConfig& cfg,
                   const std::string& extra = "") {
  std::ofstream out(tracker.path("summary.txt"), std::ios::binary);
  out << "mshom " << kVersion << "\n";
  out << "subcommand = " << subcommand << "\n";
  out << "seed = " << cfg.seed << "\n\n";
  out << cfg.text();
  if (!extra.empty()) out << "\n" << extra;
}

void cmd_validate(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const ValidationReport rep = validate(inst);
  out << rep.text();
  if (!rep.pass) throw ConfigError("instance '" + cfg.instance + "' failed validation");
  write_summary(tracker, "validate", cfg, rep.text());
}

void cmd_cell(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const CellSolution sol = solve_cell(inst.coeff, cfg.cell_resolution);
  const EffectiveTensor tensor = effective_tensor(inst.coeff, sol);

  CsvWriter csv(tracker.path("cell.csv"), "i,j,abar_ij");
  for (int i = 0; i < inst.dim; ++i)
    for (int j = 0; j < inst.dim; ++j)
      csv.raw_row(std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                  csv_format(tensor.a[i][j]));
  csv_flush(csv);

  CsvWriter chi(tracker.path("chi.csv"), "direction,index,y1,y2,chi");
  const int m = sol.resolution;
  for (int dir = 0; dir < inst.dim; ++dir)
    for (std::size_t p = 0; p < sol.dof(); ++p) {
      const int i = static_cast<int>(p % static_cast<std::size_t>(m));
      const int j = static_cast<int>(p / static_cast<std::size_t>(m));
      chi.raw_row(std::to_string(dir + 1) + "," + std::to_string(p) + "," +
                  csv_format(i * sol.spacing()) + "," +
                  csv_format(inst.dim == 2 ? j * sol.spacing() : 0.0) + "," +
                  csv_format(sol.chi[static_cast<std::size_t>(dir)][p]));
    }
  csv_flush(chi);

  out << "effective tensor certificate: [" << tensor.eig_min << ", " << tensor.eig_max << "]\n";
  write_summary(tracker, "cell", cfg);
}

void cmd_fine(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const double eps = inst.epsilons.at(0);
  const Grid grid = grid_for_eps(cfg, eps);
  const FineTrajectory traj =
      run_fine(inst, eps, grid, cfg.dt, snapshot_times(cfg), 0, 0);

  CsvWriter csv(tracker.path("fine.csv"), "t,x_index,u,v");
  for (std::size_t k = 0; k < traj.u.size(); ++k)
    for (std::size_t p = 0; p < traj.u[k].size(); ++p)
      csv.raw_row(csv_format(traj.snapshot_times[k]) + "," + std::to_string(p) + "," +
                  csv_format(traj.u[k][p]) + "," + csv_format(traj.v[k][p]));
  csv_flush(csv);
  if (cfg.plot) tracker.written.emplace_back(emit_plot(csv.path(), PlotKind::line));

  out << "fine run: eps = " << eps << ", grid n = " << grid.n
      << ", sup ||u|| = " << traj.diag.sup_u_l2 << "\n";
  write_summary(tracker, "fine", cfg);
}

void cmd_averaged(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const Grid grid = plain_grid(cfg, 127);
  const CellSolution sol = solve_cell(inst.coeff, cfg.cell_resolution);
  const EffectiveTensor tensor = effective_tensor(inst.coeff, sol);
  const SpectralBasis basis = build_basis(grid, inst.noise);
  AveragedReaction avg(inst.reaction, basis, cfg.gh_order);
  avg.build_cache(norms(sample_field(grid, inst.u0)).linf + 2.0, cfg.table_size);
  const AveragedTrajectory traj =
      run_averaged(inst, tensor, avg, grid, cfg.dt, snapshot_times(cfg));

  CsvWriter csv(tracker.path("averaged.csv"), "t,x_index,u");
  for (std::size_t k = 0; k < traj.u.size(); ++k)
    for (std::size_t p = 0; p < traj.u[k].size(); ++p)
      csv.raw_row(csv_format(traj.snapshot_times[k]) + "," + std::to_string(p) + "," +
                  csv_format(traj.u[k][p]));
  csv_flush(csv);
  if (cfg.plot) tracker.written.emplace_back(emit_plot(csv.path(), PlotKind::line));

  out << "averaged run: grid n = " << grid.n << ", sup ||u|| = " << traj.diag.sup_u_l2 << "\n";
  write_summary(tracker, "averaged", cfg);
}

void cmd_converge(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  StudyOptions so;
  so.dt = cfg.dt;
  so.snapshots = cfg.snapshots;
  so.delta_tol_rel = cfg.delta_tol;
  so.cell_resolution = cfg.cell_resolution;
  so.gh_order = cfg.gh_order;
  so.min_grid_n = cfg.grid_n;
  const ConvergenceReport report = convergence_study(inst, so);

  CsvWriter csv(tracker.path("converge.csv"),
                "epsilon,replica,sup_l2_error,final_l2_error,energy_sup,grad_energy_int,"
                "dudt_energy");
  for (const auto& row : report.rows)
    csv.raw_row(csv_format(row.eps) + "," + std::to_string(row.replica) + "," +
                csv_format(row.sup_l2_error) + "," + csv_format(row.final_l2_error) + "," +
                csv_format(row.energy_sup) + "," + csv_format(row.grad_energy_int) + "," +
                csv_format(row.dudt_energy));
  csv_flush(csv);
  if (cfg.plot) tracker.written.emplace_back(emit_plot(csv.path(), PlotKind::loglog));

  std::ostringstream extra;
  for (const auto& s : report.per_eps) {
    extra << "eps = " << csv_format(s.eps) << ": mean sup error = " << csv_format(s.mean_error)
          << " (se " << csv_format(s.std_error) << "), P(error > " << csv_format(s.threshold)
          << ") = " << csv_format(s.exceed_prob) << "\n";
  }
  out << extra.str();
  write_summary(tracker, "converge", cfg, extra.str());
}

void cmd_mixing(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const Grid grid = plain_grid(cfg, 31);
  const SpectralBasis basis = build_basis(grid, inst.noise);

  const Field probe = sample_field(grid, [&](double x, double y) {
    double e = std::sqrt(2.0) * std::sin(kPi * x);
    if (grid.dim == 2) e *= std::sqrt(2.0) * std::sin(kPi * y);
    return e;
  });
  LipschitzFunctional phi{[probe](const Field& w) { return inner(w, probe, Exec::serial); },
                          1.0};
  const Field eta = sample_field(grid, [&](double x, double y) {
    double e = cfg.mixing_eta_amplitude * std::sin(kPi * x);
    if (grid.dim == 2) e *= std::sin(kPi * y);
    return e;
  });
  const Field xi(grid);

  std::vector<double> ts;
  for (int i = 1; i <= cfg.mixing_t_count; ++i)
    ts.push_back(cfg.mixing_t_max * double(i) / double(cfg.mixing_t_count));
  const auto stream = GaussianStream::derive(cfg.seed, StreamPurpose::semigroup);
  const auto curve =
      mixing_gaps(basis, phi, eta, xi, cfg.mixing_tau, ts, cfg.mixing_samples, stream);

  CsvWriter csv(tracker.path("mixing.csv"), "t,gap,bound");
  for (const auto& p : curve) csv.row({p.t, p.gap, p.bound});
  csv_flush(csv);
  if (cfg.plot) tracker.written.emplace_back(emit_plot(csv.path(), PlotKind::line));

  const double rate = fitted_decay_rate(curve);
  out << "fitted decay rate = " << rate << " (1/tau = " << 1.0 / cfg.mixing_tau << ")\n";
  write_summary(tracker, "mixing", cfg,
                "fitted decay rate = " + csv_format(rate) + "\n");
}

void cmd_khasminskii(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const Grid grid = plain_grid(cfg, 15);
  const SpectralBasis basis = build_basis(grid, inst.noise);

  const Field xi = sample_field(grid, [&](double x, double y) {
    double e = cfg.khas_xi_amplitude * std::sin(kPi * x);
    if (grid.dim == 2) e *= std::sin(kPi * y);
    return e;
  });
  const Field eta = sample_field(grid, [&](double x, double y) {
    double e = cfg.khas_eta_amplitude * std::sin(kPi * x);
    if (grid.dim == 2) e *= std::sin(kPi * y);
    return e;
  });
  const Field phi = sample_field(grid, [&](double x, double y) {
    double e = std::sin(kPi * x);
    if (grid.dim == 2) e *= std::sin(kPi * y);
    return e;
  });

  KhasminskiiOptions ko;
  ko.tau = cfg.khas_tau;
  ko.eps_pattern = cfg.khas_eps_pattern;
  ko.samples = cfg.khas_samples;
  ko.steps_per_tau = cfg.khas_steps_per_tau;
  ko.gh_order = cfg.gh_order;
  const auto stream = GaussianStream::derive(cfg.seed, StreamPurpose::khasminskii);
  const KhasminskiiReport rep =
      khasminskii_scaling(inst.reaction, basis, xi, eta, phi, cfg.khas_delta, ko, stream);

  CsvWriter csv(tracker.path("khasminskii.csv"), "delta,lhs,stderr");
  for (const auto& p : rep.points) csv.row({p.delta, p.lhs, p.std_error});
  csv_flush(csv);
  if (cfg.plot)
    tracker.written.emplace_back(emit_plot(csv.path(), PlotKind::loglog, rep.loglog_slope));

  out << "log-log slope = " << rep.loglog_slope << "\n";
  write_summary(tracker, "khasminskii", cfg,
                "loglog slope = " + csv_format(rep.loglog_slope) + "\n");
}

void cmd_corrector(const RunConfig& cfg, OutputTracker& tracker, std::ostream& out) {
  const ProblemInstance inst = make_builtin(cfg.instance, instance_options(cfg));
  const CellSolution cell = solve_cell(inst.coeff, cfg.cell_resolution);
  const CellSolution adj = solve_cell(inst.coeff, cfg.cell_resolution, true);
  const EffectiveTensor tensor = effective_tensor(inst.coeff, cell);
  const auto times = snapshot_times(cfg);
  const TestFunction tf = default_test_function(cfg.dimension);

  CsvWriter csv(tracker.path("corrector.csv"), "epsilon,replica,gap");
  for (std::size_t ei = 0; ei < inst.epsilons.size(); ++ei) {
    const double eps = inst.epsilons[ei];
    const Grid grid = grid_for_eps(cfg, eps, cfg.corrector_points_per_period);
    const SpectralBasis basis = build_basis(grid, inst.noise);
    AveragedReaction avg(inst.reaction, basis, cfg.gh_order);
    avg.build_cache(norms(sample_field(grid, inst.u0)).linf + 2.0, cfg.table_size);
    const AveragedTrajectory ubar = run_averaged(inst, tensor, avg, grid, cfg.dt, times);
    for (int replica = 0; replica < inst.replicas; ++replica) {
      const FineTrajectory fine =
          run_fine(inst, eps, grid, cfg.dt, times, static_cast<int>(ei), replica);
      const double gap = corrector_weak_gap(inst, eps, fine, ubar, adj, tensor, tf,
                                            [](double) { return 1.0; });
      csv.raw_row(csv_format(eps) + "," + std::to_string(replica) + "," + csv_format(gap));
    }
  }
  csv_flush(csv);

  out << "corrector residuals written for " << inst.epsilons.size() << " epsilon values\n";
  write_summary(tracker, "corrector", cfg);
}

}  // namespace

void run_subcommand(const std::string& name, const RunConfig& cfg, std::ostream& out) {
  OutputTracker tracker(cfg.output_dir);
  try {
    if (name == "validate")
      cmd_validate(cfg, tracker, out);
    else if (name == "cell")
      cmd_cell(cfg, tracker, out);
    else if (name == "fine")
      cmd_fine(cfg, tracker, out);
    else if (name == "averaged")
      cmd_averaged(cfg, tracker, out);
    else if (name == "converge")
      cmd_converge(cfg, tracker, out);
    else if (name == "mixing")
      cmd_mixing(cfg, tracker, out);
    else if (name == "khasminskii")
      cmd_khasminskii(cfg, tracker, out);
    else if (name == "corrector")
      cmd_corrector(cfg, tracker, out);
    else
      throw ConfigError("unknown subcommand '" + name + "'");
  } catch (...) {
    tracker.discard_all();
    throw;
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (args.size() != 2) {
    err << "usage: mshom <cell|fine|averaged|converge|mixing|khasminskii|corrector|validate>"
           " <config-file>\n";
    return 1;
  }
  try {
    const RunConfig cfg = parse_config(args[1]);
    run_subcommand(args[0], cfg, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mshom
