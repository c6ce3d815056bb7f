#include "mshom/diffusion.hpp"

#include <cmath>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"

namespace mshom {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// eigenvalue range of a symmetric 2x2 (or the value itself in 1D)
std::array<double, 2> eig_range(const CoeffMatrix& m, int dim) {
  if (dim == 1) return {m.a11, m.a11};
  const double tr = m.a11 + m.a22;
  const double disc = std::sqrt(0.25 * (m.a11 - m.a22) * (m.a11 - m.a22) + m.a12 * m.a12);
  return {0.5 * tr - disc, 0.5 * tr + disc};
}

}  // namespace

DiffusionOperator assemble_diffusion(const Grid& grid, const MatrixSampler& coeff) {
  DiffusionOperator op;
  op.grid_ = grid;
  const int n = grid.n;
  const double h = grid.h;

  double emin = 0, emax = 0;
  bool first = true;
  auto sample = [&](double x, double y) {
    // symmetry is structural: CoeffMatrix stores a single off-diagonal entry
    const CoeffMatrix m = coeff(x, y);
    const auto [lo, hi] = eig_range(m, grid.dim);
    if (!(lo > 0.0))
      throw ConfigError("coefficient matrix not elliptic at (" + std::to_string(x) + ", " +
                        std::to_string(y) + "): min eigenvalue " + std::to_string(lo));
    if (first) {
      emin = lo;
      emax = hi;
      first = false;
    } else {
      emin = std::min(emin, lo);
      emax = std::max(emax, hi);
    }
    return m;
  };

  if (grid.dim == 1) {
    op.xface_.resize(static_cast<std::size_t>(n) + 1);
    // face fi sits between nodes at x = fi*h and (fi+1)*h (0 and n+1 are boundary)
    for (int fi = 0; fi <= n; ++fi) {
      const double al = sample(fi * h, 0.0).a11;
      const double ar = sample((fi + 1) * h, 0.0).a11;
      op.xface_[static_cast<std::size_t>(fi)] = harmonic(al, ar);
    }
  } else {
    op.xface_.resize(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n));
    op.yface_.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1));
    op.cross_.resize(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1));
    for (int j = 0; j < n; ++j) {
      const double y = (j + 1) * h;
      for (int fi = 0; fi <= n; ++fi) {
        const double al = sample(fi * h, y).a11;
        const double ar = sample((fi + 1) * h, y).a11;
        op.xface_[static_cast<std::size_t>(j) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(fi)] = harmonic(al, ar);
      }
    }
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * h;
      for (int fj = 0; fj <= n; ++fj) {
        const double ab = sample(x, fj * h).a22;
        const double at = sample(x, (fj + 1) * h).a22;
        op.yface_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(fj)] = harmonic(ab, at);
      }
    }
    for (int cj = 0; cj <= n; ++cj)
      for (int ci = 0; ci <= n; ++ci)
        op.cross_[static_cast<std::size_t>(cj) * static_cast<std::size_t>(n + 1) +
                  static_cast<std::size_t>(ci)] =
            sample((ci + 0.5) * h, (cj + 0.5) * h).a12;
  }
  op.sample_min_ = emin;
  op.sample_max_ = emax;
  return op;
}

void DiffusionOperator::apply(const Field& u, Field& out, Exec exec) const {
  const int n = grid_.n;
  const double ih2 = 1.0 / (grid_.h * grid_.h);
  if (grid_.dim == 1) {
    const auto& w = xface_;
    const auto& v = u.values;
    kernels::map_index(
        out.values,
        [&](std::size_t p) {
          const double um = p > 0 ? v[p - 1] : 0.0;
          const double up = p + 1 < v.size() ? v[p + 1] : 0.0;
          return ih2 * (w[p + 1] * (up - v[p]) - w[p] * (v[p] - um));
        },
        exec);
    return;
  }

  const auto& v = u.values;
  const auto sn = static_cast<std::size_t>(n);
  // ghost-aware read of the node lattice, gi/gj in [0, n+1]
  auto val = [&](int gi, int gj) -> double {
    if (gi < 1 || gi > n || gj < 1 || gj > n) return 0.0;
    return v[static_cast<std::size_t>(gj - 1) * sn + static_cast<std::size_t>(gi - 1)];
  };
  auto xf = [&](int fi, int j) { return xface_[static_cast<std::size_t>(j) * (sn + 1) + static_cast<std::size_t>(fi)]; };
  auto yf = [&](int i, int fj) { return yface_[static_cast<std::size_t>(i) * (sn + 1) + static_cast<std::size_t>(fj)]; };
  auto cc = [&](int ci, int cj) { return cross_[static_cast<std::size_t>(cj) * (sn + 1) + static_cast<std::size_t>(ci)]; };

  kernels::map_index(
      out.values,
      [&](std::size_t p) {
        const int i = static_cast<int>(p % sn);
        const int j = static_cast<int>(p / sn);
        const int gi = i + 1, gj = j + 1;
        const double uc = v[p];
        double r = xf(gi, j) * (val(gi + 1, gj) - uc) - xf(gi - 1, j) * (uc - val(gi - 1, gj)) +
                   yf(i, gj) * (val(gi, gj + 1) - uc) - yf(i, gj - 1) * (uc - val(gi, gj - 1));
        // cross term: node plays corner 00 / pp / 0p / p0 in the four cells
        r += 0.5 * cc(gi, gj) * (val(gi + 1, gj + 1) - uc);
        r -= 0.5 * cc(gi - 1, gj - 1) * (uc - val(gi - 1, gj - 1));
        r -= 0.5 * cc(gi, gj - 1) * (val(gi + 1, gj - 1) - uc);
        r += 0.5 * cc(gi - 1, gj) * (uc - val(gi - 1, gj + 1));
        return ih2 * r;
      },
      exec);
}

double DiffusionOperator::energy(const Field& u, const Field& v, Exec exec) const {
  Field lu(grid_);
  apply(u, lu, exec);
  return -inner(lu, v, exec);
}

std::vector<double> DiffusionOperator::diagonal() const {
  const int n = grid_.n;
  const double ih2 = 1.0 / (grid_.h * grid_.h);
  std::vector<double> d(grid_.dof(), 0.0);
  if (grid_.dim == 1) {
    for (int i = 0; i < n; ++i)
      d[static_cast<std::size_t>(i)] =
          -ih2 * (xface_[static_cast<std::size_t>(i)] + xface_[static_cast<std::size_t>(i) + 1]);
    return d;
  }
  const auto sn = static_cast<std::size_t>(n);
  auto xf = [&](int fi, int j) { return xface_[static_cast<std::size_t>(j) * (sn + 1) + static_cast<std::size_t>(fi)]; };
  auto yf = [&](int i, int fj) { return yface_[static_cast<std::size_t>(i) * (sn + 1) + static_cast<std::size_t>(fj)]; };
  auto cc = [&](int ci, int cj) { return cross_[static_cast<std::size_t>(cj) * (sn + 1) + static_cast<std::size_t>(ci)]; };
  for (std::size_t p = 0; p < d.size(); ++p) {
    const int i = static_cast<int>(p % sn);
    const int j = static_cast<int>(p / sn);
    const int gi = i + 1, gj = j + 1;
    double r = -(xf(gi, j) + xf(gi - 1, j) + yf(i, gj) + yf(i, gj - 1));
    r += -0.5 * (cc(gi, gj) + cc(gi - 1, gj - 1)) + 0.5 * (cc(gi, gj - 1) + cc(gi - 1, gj));
    d[p] = ih2 * r;
  }
  return d;
}

}  // namespace mshom
