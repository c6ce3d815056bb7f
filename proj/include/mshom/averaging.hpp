#pragma once

// Reaction operators: the oscillatory pointwise evaluation alpha(x/eps, .),
// the cell average over Y, and the invariant-measure averages. Because the
// reaction acts pointwise and the invariant law has Gaussian pointwise
// marginals N(xi(x), sigma^2(x)), the L^2-measure integrals reduce to scalar
// Gauss-Hermite quadrature per grid point; that reduction is tested against
// the Monte Carlo invariant integral.

#include <optional>
#include <vector>

#include "mshom/exec.hpp"
#include "mshom/gauss_hermite.hpp"
#include "mshom/grid.hpp"
#include "mshom/problem.hpp"

namespace mshom {

// alpha(x/eps mod 1, eta(x)) pointwise
Field reaction_field(const ReactionCoefficient& alpha, double eps, const Field& eta,
                     Exec exec = Exec::parallel);

class AveragedReaction {
 public:
  AveragedReaction(ReactionCoefficient alpha, const SpectralBasis& basis, int gh_order = 20,
                   int cell_resolution = 0 /* 0: 256 in 1d, 64 in 2d */);

  const ReactionCoefficient& reaction() const { return alpha_; }
  int gh_order() const { return gh_order_; }
  double sigma_max() const { return sigma_max_; }

  // int_Y alpha(y, z) dy by midpoint quadrature (exact shortcut when alpha
  // does not depend on y)
  double cell_average(double z) const;

  // table on [-R, R] with cubic interpolation; queries outside the table fall
  // back to direct quadrature
  void build_cache(double xi_bound, int table_size = 4097);
  bool has_cache() const { return !table_.empty(); }
  double cell_average_cached(double z) const;

  // pointwise Gauss-Hermite average of the cell-averaged reaction against
  // N(xi(x), sigma^2(x)); degenerates to cell_average(xi(x)) where sigma = 0
  Field mean_reaction(const Field& xi, bool use_cache = false,
                      Exec exec = Exec::parallel) const;

  // same, with the oscillatory integrand alpha(x/eps, .) instead of the
  // cell average
  Field mean_reaction_oscillatory(double eps, const Field& xi,
                                  Exec exec = Exec::parallel) const;

 private:
  ReactionCoefficient alpha_;
  Grid grid_;
  std::vector<double> sigma_;  // sqrt(sigma^2(x)) per grid point
  double sigma_max_ = 0;
  int gh_order_ = 20;
  int cell_resolution_ = 256;
  // cache
  double table_lo_ = 0, table_dx_ = 0;
  std::vector<double> table_;
};

}  // namespace mshom
