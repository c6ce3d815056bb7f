#pragma once

// Run configuration: plain-text "key = value" files with bracketed section
// headers, comma-separated lists, '#' comments. Unknown sections or keys are
// rejected by name. write() emits the canonical form; parse(write(c)) == c.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mshom {

struct RunConfig {
  // [run]
  std::string instance = "layered_dissipative";
  int dimension = 1;
  int grid_n = 0;  // 0: choose from the eps resolution rule
  std::vector<double> epsilon{0.2, 0.1, 0.05};
  int replicas = 16;
  double horizon = 0.5;
  double dt = 0.002;
  int snapshots = 33;
  std::uint64_t seed = 12345;
  std::string output_dir = "out";
  bool plot = false;
  double delta_tol = 0.1;

  // [instance]
  std::string forcing = "constant";
  double forcing_amplitude = 0.5;
  std::string u0 = "sine";
  double u0_amplitude = 1.0;
  std::string v0 = "zero";
  double v0_amplitude = 0.0;
  double alpha_constant = -1.0;

  // [noise]
  int noise_modes = 8;
  double noise_q0 = 0.05;
  double noise_decay = 2.0;

  // [cell]
  int cell_resolution = 512;

  // [averaging]
  int gh_order = 20;
  int table_size = 4097;

  // [mixing]
  double mixing_tau = 1.0;
  double mixing_t_max = 3.0;
  int mixing_t_count = 12;
  int mixing_samples = 10000;
  double mixing_eta_amplitude = 2.0;

  // [khasminskii]
  double khas_tau = 0.01;
  double khas_eps_pattern = 0.1;
  std::vector<double> khas_delta{0.1, 0.2, 0.4, 0.8, 1.6};
  int khas_samples = 10000;
  int khas_steps_per_tau = 4;
  double khas_xi_amplitude = 0.5;
  double khas_eta_amplitude = 0.0;

  // [corrector]
  int corrector_points_per_period = 32;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  void write(std::ostream& os) const;
  std::string text() const;
};

// throws ConfigError with the offending key or section named
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::string& path);

}  // namespace mshom
