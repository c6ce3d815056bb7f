#include "mshom/grid.hpp"

#include <cmath>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"

namespace mshom {

Grid build_grid(int dim, int n) {
  if (dim != 1 && dim != 2)
    throw ConfigError("unsupported dimension " + std::to_string(dim) + " (need 1 or 2)");
  if (n < 3) throw ConfigError("grid needs at least 3 interior points per axis");
  Grid g;
  g.dim = dim;
  g.n = n;
  g.h = 1.0 / (n + 1);
  return g;
}

FieldNorms norms(const Field& f, Exec exec) {
  FieldNorms out;
  const Grid& g = f.grid;
  const double vol = g.cell_volume();
  out.l2 = std::sqrt(vol * kernels::block_dot(f.values, f.values, exec));
  out.linf = kernels::max_abs(f.values, exec);

  // H1 seminorm: sum over all faces of (difference/h)^2 weighted by h^d,
  // with zero ghost values at the boundary faces.
  const int n = g.n;
  double diff2 = 0.0;
  if (g.dim == 1) {
    double prev = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = f.values[static_cast<std::size_t>(i)] - prev;
      diff2 += d * d;
      prev = f.values[static_cast<std::size_t>(i)];
    }
    diff2 += prev * prev;  // face at x=1
  } else {
    for (int j = 0; j < n; ++j) {
      double prev = 0.0;
      for (int i = 0; i < n; ++i) {
        const double v = f.values[g.index(i, j)];
        const double d = v - prev;
        diff2 += d * d;
        prev = v;
      }
      diff2 += prev * prev;
    }
    for (int i = 0; i < n; ++i) {
      double prev = 0.0;
      for (int j = 0; j < n; ++j) {
        const double v = f.values[g.index(i, j)];
        const double d = v - prev;
        diff2 += d * d;
        prev = v;
      }
      diff2 += prev * prev;
    }
  }
  out.h1_semi = std::sqrt(vol * diff2 / (g.h * g.h));
  return out;
}

double inner(const Field& a, const Field& b, Exec exec) {
  return a.grid.cell_volume() * kernels::block_dot(a.values, b.values, exec);
}

}  // namespace mshom
