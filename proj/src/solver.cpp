#include "mshom/solver.hpp"

#include <cmath>
#include <string>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"

namespace mshom {

namespace {

double residual_norm(const DiffusionOperator& op, double dt, const Field& rhs, const Field& w,
                     Exec exec) {
  Field lw(op.grid());
  op.apply(w, lw, exec);
  // r = rhs - (w - dt L w)
  double r2 = 0.0;
  std::vector<double> r(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) r[p] = rhs[p] - (w[p] - dt * lw[p]);
  r2 = kernels::block_dot(r, r, exec);
  return std::sqrt(r2);
}

}  // namespace

CgResult conjugate_gradient(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_fn,
                            std::span<const double> inv_diag,
                            std::span<const double> b, std::vector<double>& x,
                            double rel_tol, int max_iter, Exec exec) {
  const std::size_t n = b.size();
  std::vector<double> r(n), z(n), p(n), ap(n);

  apply_fn(x, ap);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
  const double bnorm = std::sqrt(kernels::block_dot(b, b, exec));
  if (bnorm == 0.0) {
    kernels::fill(x, 0.0, exec);
    return {true, 0, 0.0};
  }

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = kernels::block_dot(r, z, exec);

  CgResult res;
  for (int it = 0; it < max_iter; ++it) {
    double rnorm = std::sqrt(kernels::block_dot(r, r, exec));
    res.rel_residual = rnorm / bnorm;
    res.iterations = it;
    if (res.rel_residual <= rel_tol) {
      res.converged = true;
      return res;
    }
    apply_fn(p, ap);
    const double pap = kernels::block_dot(p, ap, exec);
    if (!(pap > 0.0)) break;  // lost positive definiteness: bail out
    const double alpha = rz / pap;
    kernels::axpy(alpha, p, x, exec);
    kernels::axpy(-alpha, ap, r, exec);
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = kernels::block_dot(r, z, exec);
    const double beta = rz_new / rz;
    rz = rz_new;
    kernels::axpby(1.0, z, beta, p, exec);
  }
  const double rnorm = std::sqrt(kernels::block_dot(r, r, exec));
  res.rel_residual = rnorm / bnorm;
  res.converged = res.rel_residual <= rel_tol;
  return res;
}

Field solve_implicit(const DiffusionOperator& op, double dt, const Field& rhs, Exec exec,
                     SolveStats* stats) {
  if (!(dt > 0.0)) throw ConfigError("implicit solve needs dt > 0");
  const Grid& g = op.grid();
  Field w(g);
  const double bnorm = std::sqrt(kernels::block_dot(rhs.values, rhs.values, exec));
  if (bnorm == 0.0) {
    if (stats) *stats = {0, 0.0};
    return w;  // zero rhs -> zero solution
  }

  if (g.dim == 1) {
    // Thomas algorithm on the tridiagonal matrix I - dt L:
    //   diag_i = 1 + dt (w_i + w_{i+1})/h^2,  off_i = -dt w_{i+1}/h^2
    const int n = g.n;
    const double ih2 = 1.0 / (g.h * g.h);
    const std::vector<double>& wf = op.xfaces();
    std::vector<double> diag(static_cast<std::size_t>(n)), sup(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      diag[ui] = 1.0 + dt * ih2 * (wf[ui] + wf[ui + 1]);
      if (i + 1 < n) sup[ui] = -dt * ih2 * wf[ui + 1];
    }
    // forward sweep (symmetric: sub_i == sup_{i-1})
    std::vector<double> c(static_cast<std::size_t>(n)), d(static_cast<std::size_t>(n));
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for (int i = 1; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      const double m = diag[ui] - sup[ui - 1] * c[ui - 1];
      c[ui] = (i + 1 < n) ? sup[ui] / m : 0.0;
      d[ui] = (rhs[ui] - sup[ui - 1] * d[ui - 1]) / m;
    }
    w[static_cast<std::size_t>(n - 1)] = d[static_cast<std::size_t>(n - 1)];
    for (int i = n - 2; i >= 0; --i) {
      const auto ui = static_cast<std::size_t>(i);
      w[ui] = d[ui] - c[ui] * w[ui + 1];
    }
    const double rel = residual_norm(op, dt, rhs, w, exec) / bnorm;
    if (stats) *stats = {0, rel};
    if (rel > kImplicitSolveTol)
      throw NumericError("1D implicit solve residual " + std::to_string(rel) +
                         " exceeds tolerance");
    return w;
  }

  // 2D: Jacobi-preconditioned CG on the SPD matrix I - dt L
  const std::vector<double> diagL = op.diagonal();
  std::vector<double> inv_diag(diagL.size());
  for (std::size_t p = 0; p < diagL.size(); ++p) inv_diag[p] = 1.0 / (1.0 - dt * diagL[p]);
  Field tmp(g);
  auto apply_fn = [&](const std::vector<double>& x, std::vector<double>& out) {
    Field xf(g);
    xf.values = x;
    op.apply(xf, tmp, exec);
    for (std::size_t p = 0; p < out.size(); ++p) out[p] = x[p] - dt * tmp[p];
  };
  const int max_iter = 200 + 20 * g.n;
  CgResult cg = conjugate_gradient(apply_fn, inv_diag, rhs.values, w.values,
                                   0.1 * kImplicitSolveTol, max_iter, exec);
  const double rel = residual_norm(op, dt, rhs, w, exec) / bnorm;
  if (stats) *stats = {cg.iterations, rel};
  if (!cg.converged || rel > kImplicitSolveTol)
    throw NumericError("2D implicit CG failed: " + std::to_string(cg.iterations) +
                       " iterations, relative residual " + std::to_string(rel));
  return w;
}

}  // namespace mshom
