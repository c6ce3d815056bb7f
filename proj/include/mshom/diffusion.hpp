#pragma once

// Finite-volume discretization of u -> div(A_eff(x) grad u) on the Dirichlet
// grid. Normal fluxes use the harmonic average of the two adjacent node
// samples of the diagonal entry; the 2D cross term A12 is discretized from the
// symmetric bilinear form with diagonal/antidiagonal differences per cell, so
// the assembled matrix is symmetric by construction. The exact stencil is
// written out in README.md.

#include <array>
#include <functional>
#include <vector>

#include "mshom/exec.hpp"
#include "mshom/grid.hpp"

namespace mshom {

// symmetric coefficient matrix sample; 1D uses a11 only
struct CoeffMatrix {
  double a11 = 1.0;
  double a22 = 1.0;
  double a12 = 0.0;
};

using MatrixSampler = std::function<CoeffMatrix(double x, double y)>;

class DiffusionOperator {
 public:
  DiffusionOperator() = default;

  const Grid& grid() const { return grid_; }
  // observed eigenvalue range of the sampled matrices
  double sample_min() const { return sample_min_; }
  double sample_max() const { return sample_max_; }

  // out <- L u
  void apply(const Field& u, Field& out, Exec exec = Exec::parallel) const;

  // bilinear form a(u,v) = <-L u, v>_h = integral of A grad u . grad v
  double energy(const Field& u, const Field& v, Exec exec = Exec::parallel) const;

  // diagonal of L, for Jacobi preconditioning of (I - dt L)
  std::vector<double> diagonal() const;

  // assembled per-face / per-cell coefficient arrays (see layout note below)
  const std::vector<double>& xfaces() const { return xface_; }
  const std::vector<double>& yfaces() const { return yface_; }
  const std::vector<double>& cross_cells() const { return cross_; }

  friend DiffusionOperator assemble_diffusion(const Grid& grid, const MatrixSampler& coeff);

 private:
  Grid grid_;
  // 1D: xface_[n+1]. 2D: xface_ has (n+1)*n entries (face fi, row j),
  // yface_ n*(n+1) (column i, face fj), cross_ (n+1)^2 cell-centered A12.
  std::vector<double> xface_;
  std::vector<double> yface_;
  std::vector<double> cross_;
  double sample_min_ = 0;
  double sample_max_ = 0;
};

// Samples the coefficient at nodes (including boundary nodes) and cell
// centers, validates symmetry and ellipticity of every sample, and assembles
// the face/cell coefficient arrays. Throws ConfigError on a bad sample.
DiffusionOperator assemble_diffusion(const Grid& grid, const MatrixSampler& coeff);

}  // namespace mshom
