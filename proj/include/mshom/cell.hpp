#pragma once

// Periodic cell problems on the unit torus: for each direction j solve
// div(A(y)(grad chi_j + e_j)) = 0 with zero-mean correctors, then assemble the
// homogenized tensor Abar = integral A (I + grad chi) dy by face-flux
// quadrature on the same stencil. The discretization mirrors the Dirichlet
// operator (harmonic per-face normal coefficients, symmetric cross form), so
// in 1D the discrete Abar is exactly the harmonic mean of the node samples.

#include <array>
#include <vector>

#include "mshom/grid.hpp"
#include "mshom/problem.hpp"

namespace mshom {

struct CellSolution {
  int dim = 1;
  int resolution = 0;  // points per axis, spacing 1/resolution
  bool adjoint = false;
  // chi[j] holds corrector component j on the torus lattice, row-major
  std::vector<std::vector<double>> chi;
  double worst_rel_residual = 0;

  double spacing() const { return 1.0 / resolution; }
  std::size_t dof() const {
    return dim == 1 ? static_cast<std::size_t>(resolution)
                    : static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  }
};

struct EffectiveTensor {
  int dim = 1;
  std::array<std::array<double, 2>, 2> a{{{1.0, 0.0}, {0.0, 1.0}}};
  double eig_min = 1.0;  // certificate: eigenvalues of the symmetric part
  double eig_max = 1.0;

  MatrixSampler sampler() const {
    const double a11 = a[0][0], a22 = a[1][1];
    const double a12 = 0.5 * (a[0][1] + a[1][0]);
    return [=](double, double) { return CoeffMatrix{a11, a22, a12}; };
  }
};

// Solves the cell problem for every direction. The coefficient is symmetric
// by construction, so the adjoint problem shares the solve; the flag is kept
// so call sites can name which corrector they mean. Requires resolution >= 8.
CellSolution solve_cell(const CellMatrix& coeff, int resolution, bool adjoint = false);

// Face-flux quadrature of A (I + grad chi); certifies the symmetric-part
// eigenvalues against the declared window with slack 10/resolution.
EffectiveTensor effective_tensor(const CellMatrix& coeff, const CellSolution& sol);

// Corrector and its gradient sampled at x / eps (mod 1) on a Dirichlet grid:
// multilinear interpolation for chi, per-cell face differences for grad chi.
struct CorrectorSample {
  std::vector<Field> chi;                      // per direction j
  std::vector<std::array<Field, 2>> grad_chi;  // per direction j, components
};

CorrectorSample sample_corrector(const CellSolution& sol, double eps, const Grid& grid);

}  // namespace mshom
