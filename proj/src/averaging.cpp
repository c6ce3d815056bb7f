#include "mshom/averaging.hpp"

#include <cmath>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"

namespace mshom {

Field reaction_field(const ReactionCoefficient& alpha, double eps, const Field& eta, Exec exec) {
  Field out(eta.grid);
  const Grid& g = eta.grid;
  kernels::map_index(
      out.values,
      [&](std::size_t p) {
        const auto x = g.point(p);
        return alpha.at(x[0] / eps, g.dim == 2 ? x[1] / eps : 0.0, eta[p]);
      },
      exec);
  return out;
}

AveragedReaction::AveragedReaction(ReactionCoefficient alpha, const SpectralBasis& basis,
                                   int gh_order, int cell_resolution)
    : alpha_(std::move(alpha)), grid_(basis.grid), gh_order_(gh_order) {
  if (gh_order_ < 1) throw ConfigError("gauss-hermite order must be positive");
  cell_resolution_ = cell_resolution > 0 ? cell_resolution : (grid_.dim == 1 ? 256 : 64);
  sigma_.resize(basis.sigma2.size());
  for (std::size_t p = 0; p < sigma_.size(); ++p) {
    sigma_[p] = std::sqrt(basis.sigma2[p]);
    sigma_max_ = std::max(sigma_max_, sigma_[p]);
  }
}

double AveragedReaction::cell_average(double z) const {
  if (!alpha_.y_dependent) return alpha_.at(0.0, 0.0, z);
  const int m = cell_resolution_;
  double acc = 0.0;
  if (grid_.dim == 1) {
    for (int i = 0; i < m; ++i) acc += alpha_.at((i + 0.5) / m, 0.0, z);
    return acc / m;
  }
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) acc += alpha_.at((i + 0.5) / m, (j + 0.5) / m, z);
  return acc / (double(m) * double(m));
}

void AveragedReaction::build_cache(double xi_bound, int table_size) {
  if (table_size < 8) throw ConfigError("reaction cache table too small");
  const double radius = 8.0 * (std::fabs(xi_bound) + sigma_max_ + 1e-12);
  table_lo_ = -radius;
  table_dx_ = 2.0 * radius / (table_size - 1);
  table_.resize(static_cast<std::size_t>(table_size));
  const long ts = table_size;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < ts; ++i)
    table_[static_cast<std::size_t>(i)] = cell_average(table_lo_ + i * table_dx_);
}

double AveragedReaction::cell_average_cached(double z) const {
  // y-independent reactions bypass both the table and the quadrature, so the
  // cached and direct routes stay bitwise identical
  if (!alpha_.y_dependent) return alpha_.at(0.0, 0.0, z);
  if (table_.empty()) return cell_average(z);
  const double s = (z - table_lo_) / table_dx_;
  const long i = static_cast<long>(std::floor(s));
  if (i < 1 || i + 2 >= static_cast<long>(table_.size())) return cell_average(z);
  // Catmull-Rom through the four surrounding table points
  const double t = s - i;
  const double p0 = table_[static_cast<std::size_t>(i - 1)];
  const double p1 = table_[static_cast<std::size_t>(i)];
  const double p2 = table_[static_cast<std::size_t>(i + 1)];
  const double p3 = table_[static_cast<std::size_t>(i + 2)];
  return p1 + 0.5 * t *
                  (p2 - p0 +
                   t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

Field AveragedReaction::mean_reaction(const Field& xi, bool use_cache, Exec exec) const {
  Field out(xi.grid);
  const auto& gh = GaussHermite::order(gh_order_);
  kernels::map_index(
      out.values,
      [&](std::size_t p) {
        const double mu = xi[p];
        const double s = sigma_[p];
        if (s == 0.0) return use_cache ? cell_average_cached(mu) : cell_average(mu);
        if (use_cache)
          return gh.gaussian_mean(mu, s, [&](double z) { return cell_average_cached(z); });
        return gh.gaussian_mean(mu, s, [&](double z) { return cell_average(z); });
      },
      exec);
  return out;
}

Field AveragedReaction::mean_reaction_oscillatory(double eps, const Field& xi, Exec exec) const {
  Field out(xi.grid);
  const auto& gh = GaussHermite::order(gh_order_);
  const Grid& g = xi.grid;
  kernels::map_index(
      out.values,
      [&](std::size_t p) {
        const auto x = g.point(p);
        const double y1 = x[0] / eps;
        const double y2 = g.dim == 2 ? x[1] / eps : 0.0;
        const double mu = xi[p];
        const double s = sigma_[p];
        if (s == 0.0) return alpha_.at(y1, y2, mu);
        return gh.gaussian_mean(mu, s, [&](double z) { return alpha_.at(y1, y2, z); });
      },
      exec);
  return out;
}

}  // namespace mshom
