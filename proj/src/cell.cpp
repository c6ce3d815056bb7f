#include "mshom/cell.hpp"

#include <cmath>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"
#include "mshom/solver.hpp"

namespace mshom {

namespace {

double harmonic(double a, double b) { return 2.0 * a * b / (a + b); }

// Periodic analogue of the Dirichlet stencil. Node (i,j) owns the +x face to
// node (i+1 mod m, j), the +y face, and the cell with corners
// (i,j),(i+1,j),(i,j+1),(i+1,j+1), all mod m.
struct PeriodicOperator {
  int dim;
  int m;
  double h;
  std::vector<double> xface, yface, cross;

  std::size_t dof() const {
    return dim == 1 ? static_cast<std::size_t>(m)
                    : static_cast<std::size_t>(m) * static_cast<std::size_t>(m);
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(m) + static_cast<std::size_t>(i);
  }

  // out = L u, optionally with the affine part y_affine added to u
  // (affine = -1: none). The affine function has unit gradient e_affine and
  // contributes a constant difference h across matching faces.
  void apply(const std::vector<double>& u, std::vector<double>& out, int affine) const {
    const double ih2 = 1.0 / (h * h);
    if (dim == 1) {
      const double ax = affine == 0 ? h : 0.0;
      for (int i = 0; i < m; ++i) {
        const int ip = i + 1 == m ? 0 : i + 1;
        const int im = i == 0 ? m - 1 : i - 1;
        const double de = u[static_cast<std::size_t>(ip)] - u[static_cast<std::size_t>(i)] + ax;
        const double dw = u[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(im)] + ax;
        out[static_cast<std::size_t>(i)] =
            ih2 * (xface[static_cast<std::size_t>(i)] * de - xface[static_cast<std::size_t>(im)] * dw);
      }
      return;
    }
    const double ax = affine == 0 ? h : 0.0;
    const double ay = affine == 1 ? h : 0.0;
    const long dofl = static_cast<long>(dof());
#pragma omp parallel for schedule(static)
    for (long p = 0; p < dofl; ++p) {
      const int i = static_cast<int>(p % m);
      const int j = static_cast<int>(p / m);
      const int ip = i + 1 == m ? 0 : i + 1;
      const int im = i == 0 ? m - 1 : i - 1;
      const int jp = j + 1 == m ? 0 : j + 1;
      const int jm = j == 0 ? m - 1 : j - 1;
      const double uc = u[static_cast<std::size_t>(p)];
      double r = xface[idx(i, j)] * (u[idx(ip, j)] - uc + ax) -
                 xface[idx(im, j)] * (uc - u[idx(im, j)] + ax) +
                 yface[idx(i, j)] * (u[idx(i, jp)] - uc + ay) -
                 yface[idx(i, jm)] * (uc - u[idx(i, jm)] + ay);
      // cross cells; diagonal difference carries ax+ay, antidiagonal ax-ay
      r += 0.5 * cross[idx(i, j)] * (u[idx(ip, jp)] - uc + ax + ay);
      r -= 0.5 * cross[idx(im, jm)] * (uc - u[idx(im, jm)] + ax + ay);
      r -= 0.5 * cross[idx(i, jm)] * (u[idx(ip, jm)] - u[idx(i, j)] + ax - ay);
      r += 0.5 * cross[idx(im, j)] * (u[idx(i, j)] - u[idx(im, jp)] + ax - ay);
      out[static_cast<std::size_t>(p)] = ih2 * r;
    }
  }

  std::vector<double> neg_diagonal() const {
    std::vector<double> d(dof());
    if (dim == 1) {
      for (int i = 0; i < m; ++i) {
        const int im = i == 0 ? m - 1 : i - 1;
        d[static_cast<std::size_t>(i)] =
            (xface[static_cast<std::size_t>(i)] + xface[static_cast<std::size_t>(im)]) / (h * h);
      }
      return d;
    }
    for (std::size_t p = 0; p < dof(); ++p) {
      const int i = static_cast<int>(p % m);
      const int j = static_cast<int>(p / m);
      const int im = i == 0 ? m - 1 : i - 1;
      const int jm = j == 0 ? m - 1 : j - 1;
      double r = xface[idx(i, j)] + xface[idx(im, j)] + yface[idx(i, j)] + yface[idx(i, jm)];
      r += 0.5 * (cross[idx(i, j)] + cross[idx(im, jm)]) -
           0.5 * (cross[idx(i, jm)] + cross[idx(im, j)]);
      d[p] = r / (h * h);
    }
    return d;
  }
};

PeriodicOperator assemble_periodic(const CellMatrix& coeff, int m, bool adjoint) {
  // the stored coefficient is symmetric, so the adjoint has the same stencil
  (void)adjoint;
  PeriodicOperator op;
  op.dim = coeff.dim;
  op.m = m;
  op.h = 1.0 / m;
  auto sample = [&](double y1, double y2) {
    const CoeffMatrix a = coeff.at(y1, y2);
    const double lo = coeff.dim == 1
                          ? a.a11
                          : 0.5 * (a.a11 + a.a22) -
                                std::sqrt(0.25 * (a.a11 - a.a22) * (a.a11 - a.a22) + a.a12 * a.a12);
    if (!(lo > 0.0))
      throw ConfigError("cell matrix not elliptic at y = (" + std::to_string(y1) + ", " +
                        std::to_string(y2) + ")");
    return a;
  };
  if (op.dim == 1) {
    op.xface.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      const double yl = i * op.h;
      const double yr = (i + 1) * op.h;
      op.xface[static_cast<std::size_t>(i)] = harmonic(sample(yl, 0).a11, sample(yr, 0).a11);
    }
    return op;
  }
  op.xface.resize(op.dof());
  op.yface.resize(op.dof());
  op.cross.resize(op.dof());
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const double x = i * op.h, y = j * op.h;
      op.xface[op.idx(i, j)] = harmonic(sample(x, y).a11, sample(x + op.h, y).a11);
      op.yface[op.idx(i, j)] = harmonic(sample(x, y).a22, sample(x, y + op.h).a22);
      op.cross[op.idx(i, j)] = sample(x + 0.5 * op.h, y + 0.5 * op.h).a12;
    }
  }
  return op;
}

void subtract_mean(std::vector<double>& v) {
  const double mean = kernels::block_sum(v, Exec::parallel) / static_cast<double>(v.size());
  for (double& x : v) x -= mean;
}

}  // namespace

CellSolution solve_cell(const CellMatrix& coeff, int resolution, bool adjoint) {
  if (resolution < 8) throw ConfigError("cell resolution must be at least 8");
  const PeriodicOperator op = assemble_periodic(coeff, resolution, adjoint);

  CellSolution sol;
  sol.dim = coeff.dim;
  sol.resolution = resolution;
  sol.adjoint = adjoint;
  sol.chi.resize(static_cast<std::size_t>(coeff.dim));

  std::vector<double> neg_diag = op.neg_diagonal();
  std::vector<double> inv_diag(neg_diag.size());
  for (std::size_t p = 0; p < neg_diag.size(); ++p)
    inv_diag[p] = neg_diag[p] > 0.0 ? 1.0 / neg_diag[p] : 1.0;

  for (int dir = 0; dir < coeff.dim; ++dir) {
    // solve (-L) chi = L y_dir in the zero-mean subspace
    std::vector<double> b(op.dof(), 0.0), zero(op.dof(), 0.0);
    op.apply(zero, b, dir);
    subtract_mean(b);
    std::vector<double> chi(op.dof(), 0.0);
    auto apply_fn = [&](const std::vector<double>& x, std::vector<double>& out) {
      op.apply(x, out, -1);
      for (double& v : out) v = -v;
      subtract_mean(out);
    };
    const double bnorm = std::sqrt(kernels::block_dot(b, b, Exec::parallel));
    if (bnorm > 0.0) {
      const CgResult cg = conjugate_gradient(apply_fn, inv_diag, b, chi, 1e-12,
                                             400 + 40 * resolution, Exec::parallel);
      // contract: discrete weak residual of the cell problem below 1e-10
      if (!cg.converged || cg.rel_residual > 1e-10)
        throw NumericError("cell solve for direction " + std::to_string(dir) +
                           " stalled at relative residual " + std::to_string(cg.rel_residual));
      sol.worst_rel_residual = std::max(sol.worst_rel_residual, cg.rel_residual);
    }
    subtract_mean(chi);
    sol.chi[static_cast<std::size_t>(dir)] = std::move(chi);
  }
  return sol;
}

EffectiveTensor effective_tensor(const CellMatrix& coeff, const CellSolution& sol) {
  const PeriodicOperator op = assemble_periodic(coeff, sol.resolution, sol.adjoint);
  const int m = op.m;
  const double h = op.h;
  EffectiveTensor tensor;
  tensor.dim = coeff.dim;

  // Abar_{i j} = sum over i-faces and cells of the flux of (chi_j + y_j)
  // against the affine probe y_i, normalized by the cell volume.
  for (int j = 0; j < coeff.dim; ++j) {
    const auto& chi = sol.chi[static_cast<std::size_t>(j)];
    if (coeff.dim == 1) {
      // Abar = sum_faces w (dchi + h): the flux is constant across faces and
      // equals the discrete harmonic mean of the node samples.
      double acc = 0.0;
      for (int i = 0; i < m; ++i) {
        const int ip = i + 1 == m ? 0 : i + 1;
        acc += op.xface[static_cast<std::size_t>(i)] *
               (chi[static_cast<std::size_t>(ip)] - chi[static_cast<std::size_t>(i)] + h);
      }
      tensor.a[0][0] = acc;
      continue;
    }
    const double aj1 = j == 0 ? h : 0.0;
    const double aj2 = j == 1 ? h : 0.0;
    double acc1 = 0.0, acc2 = 0.0;
    for (int cj = 0; cj < m; ++cj) {
      for (int ci = 0; ci < m; ++ci) {
        const int ip = ci + 1 == m ? 0 : ci + 1;
        const int jp = cj + 1 == m ? 0 : cj + 1;
        const double dx = chi[op.idx(ip, cj)] - chi[op.idx(ci, cj)] + aj1;
        const double dy = chi[op.idx(ci, jp)] - chi[op.idx(ci, cj)] + aj2;
        acc1 += op.xface[op.idx(ci, cj)] * dx * h;
        acc2 += op.yface[op.idx(ci, cj)] * dy * h;
        // cross cell: diagonal/antidiagonal differences against probes
        const double c = op.cross[op.idx(ci, cj)];
        const double dd = chi[op.idx(ip, jp)] - chi[op.idx(ci, cj)] + aj1 + aj2;
        const double da = chi[op.idx(ip, cj)] - chi[op.idx(ci, jp)] + aj1 - aj2;
        // probe y_1: diag difference h, antidiag +h; probe y_2: diag h, antidiag -h
        acc1 += 0.5 * c * (dd * h - da * h);
        acc2 += 0.5 * c * (dd * h + da * h);
      }
    }
    tensor.a[0][j] = acc1;
    tensor.a[1][j] = acc2;
  }

  // certificate from the symmetric part
  if (coeff.dim == 1) {
    tensor.eig_min = tensor.eig_max = tensor.a[0][0];
  } else {
    const double a11 = tensor.a[0][0], a22 = tensor.a[1][1];
    const double a12 = 0.5 * (tensor.a[0][1] + tensor.a[1][0]);
    const double tr = a11 + a22;
    const double disc = std::sqrt(0.25 * (a11 - a22) * (a11 - a22) + a12 * a12);
    tensor.eig_min = 0.5 * tr - disc;
    tensor.eig_max = 0.5 * tr + disc;
  }
  const double slack = 10.0 * sol.spacing();
  if (tensor.eig_min < coeff.ellipticity_min - slack ||
      tensor.eig_max > coeff.ellipticity_max + slack)
    throw NumericError("effective tensor certificate [" + std::to_string(tensor.eig_min) + ", " +
                       std::to_string(tensor.eig_max) + "] violates the declared window");
  return tensor;
}

CorrectorSample sample_corrector(const CellSolution& sol, double eps, const Grid& grid) {
  CorrectorSample out;
  const int m = sol.resolution;
  const double hy = sol.spacing();
  auto node = [&](const std::vector<double>& chi, int i, int j) {
    i %= m;
    j %= m;
    return sol.dim == 1 ? chi[static_cast<std::size_t>(i)]
                        : chi[static_cast<std::size_t>(j) * static_cast<std::size_t>(m) +
                              static_cast<std::size_t>(i)];
  };
  for (int dir = 0; dir < sol.dim; ++dir) {
    const auto& chi = sol.chi[static_cast<std::size_t>(dir)];
    Field val(grid);
    std::array<Field, 2> grad{Field(grid), Field(grid)};
    for (std::size_t p = 0; p < grid.dof(); ++p) {
      const auto x = grid.point(p);
      double y1 = x[0] / eps, y2 = sol.dim == 2 ? x[1] / eps : 0.0;
      y1 -= std::floor(y1);
      y2 -= std::floor(y2);
      const double s1 = y1 / hy, s2 = y2 / hy;
      const int i0 = std::min(static_cast<int>(s1), m - 1);
      const int j0 = sol.dim == 2 ? std::min(static_cast<int>(s2), m - 1) : 0;
      const double f1 = s1 - i0, f2 = s2 - j0;
      if (sol.dim == 1) {
        const double c0 = node(chi, i0, 0), c1 = node(chi, i0 + 1, 0);
        val[p] = (1.0 - f1) * c0 + f1 * c1;
        grad[0][p] = (c1 - c0) / hy;
      } else {
        const double c00 = node(chi, i0, j0), c10 = node(chi, i0 + 1, j0);
        const double c01 = node(chi, i0, j0 + 1), c11 = node(chi, i0 + 1, j0 + 1);
        val[p] = (1.0 - f1) * (1.0 - f2) * c00 + f1 * (1.0 - f2) * c10 +
                 (1.0 - f1) * f2 * c01 + f1 * f2 * c11;
        grad[0][p] = ((1.0 - f2) * (c10 - c00) + f2 * (c11 - c01)) / hy;
        grad[1][p] = ((1.0 - f1) * (c01 - c00) + f1 * (c11 - c10)) / hy;
      }
    }
    out.chi.push_back(std::move(val));
    out.grad_chi.push_back(std::move(grad));
  }
  return out;
}

}  // namespace mshom
