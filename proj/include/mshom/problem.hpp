#pragma once

// Analytic problem ingredients: the periodic coefficient matrix A(y), the
// reaction alpha(y, eta), the spectral noise covariance, forcing and initial
// data, plus sampling-based validation of the standing assumptions (uniform
// ellipticity of A, uniform boundedness/Lipschitz continuity of alpha).

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mshom/diffusion.hpp"
#include "mshom/grid.hpp"

namespace mshom {

// Y-periodic symmetric matrix field with declared ellipticity window [m, M].
struct CellMatrix {
  std::string id;
  int dim = 1;
  double ellipticity_min = 1.0;  // m
  double ellipticity_max = 1.0;  // M
  std::function<CoeffMatrix(double y1, double y2)> eval;

  // evaluation is mod-1 by construction
  CoeffMatrix at(double y1, double y2 = 0.0) const {
    y1 -= std::floor(y1);
    y2 -= std::floor(y2);
    return eval(y1, y2);
  }
};

struct ReactionCoefficient {
  std::string id;
  double sup_bound = 0.0;  // |alpha|_inf
  double lipschitz = 0.0;  // Lipschitz constant in eta, uniform in y
  bool y_dependent = false;
  bool dissipative = true;  // alpha <= 0 pointwise; non-dissipative ones are flagged
  std::function<double(double y1, double y2, double eta)> eval;

  double at(double y1, double y2, double eta) const {
    y1 -= std::floor(y1);
    y2 -= std::floor(y2);
    return eval(y1, y2, eta);
  }
};

// Trace-class covariance, diagonal in the Dirichlet sine eigenbasis.
struct NoiseSpec {
  std::vector<std::array<int, 2>> mode_index;  // (k1, k2), k2 = 0 in 1D
  std::vector<double> q;                       // per-mode variance, q_k >= 0

  int modes() const { return static_cast<int>(q.size()); }
  double trace() const;

  // q_j = q0 * j^(-decay) over the first K modes, 2D modes ordered by
  // (k1^2 + k2^2, k1)
  static NoiseSpec power_law(int dim, int K, double q0, double decay);
};

// Sine eigenbasis sampled on a grid, with the pointwise stationary variance
// sigma^2(x) = 1/2 sum_k q_k e_k(x)^2 of the fast process.
struct SpectralBasis {
  Grid grid;
  std::vector<double> qk;
  std::vector<double> table;   // modes x dof
  std::vector<double> sigma2;  // per grid point

  int modes() const { return static_cast<int>(qk.size()); }
  std::span<const double> mode(int k) const {
    return {table.data() + static_cast<std::size_t>(k) * grid.dof(), grid.dof()};
  }
};

// throws ConfigError when a mode index exceeds the grid resolution
SpectralBasis build_basis(const Grid& grid, const NoiseSpec& noise);

using ScalarField = std::function<double(double x, double y)>;
using ForcingField = std::function<double(double t, double x, double y)>;

struct ProblemInstance {
  std::string id;
  int dim = 1;
  CellMatrix coeff;
  ReactionCoefficient reaction;
  NoiseSpec noise;
  ForcingField forcing;
  ScalarField u0;
  ScalarField v0;
  double horizon = 1.0;
  std::vector<double> epsilons;
  int replicas = 1;
  std::uint64_t seed = 0;
};

struct ValidationReport {
  bool pass = true;
  std::vector<std::string> violations;  // named violation + witness point
  double ellipticity_min_observed = 0;
  double ellipticity_max_observed = 0;
  double alpha_sup_observed = 0;
  double alpha_lipschitz_observed = 0;
  bool alpha_nonpositive_observed = true;
  double trace_q = 0;
  std::string text() const;
};

// Spot-checks the standing assumptions on sampling lattices (64 points per
// axis in y, a wide eta range) and reports the observed constants.
ValidationReport validate(const ProblemInstance& instance);

// ---- built-in catalog ----------------------------------------------------

CellMatrix make_cell_matrix(const std::string& name, int dim);
ReactionCoefficient make_reaction(const std::string& name, double constant_value = -1.0);

struct InstanceOptions {
  int dim = 1;
  NoiseSpec noise;
  double horizon = 0.5;
  std::vector<double> epsilons{0.1};
  int replicas = 1;
  std::uint64_t seed = 1;
  std::string forcing = "constant";
  double forcing_amplitude = 0.5;
  std::string u0 = "sine";
  double u0_amplitude = 1.0;
  std::string v0 = "zero";
  double v0_amplitude = 0.0;
  double alpha_constant = -1.0;
};

std::vector<std::string> builtin_instance_ids();

// throws ConfigError for an unknown id
ProblemInstance make_builtin(const std::string& id, const InstanceOptions& options);

}  // namespace mshom
