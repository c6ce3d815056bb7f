#pragma once

// Linear solves behind the implicit diffusion step: a banded direct solve in
// 1D and Jacobi-preconditioned conjugate gradients in 2D. Both verify the
// relative residual of (I - dt L) w = rhs against the contract tolerance.

#include <functional>
#include <span>
#include <vector>

#include "mshom/diffusion.hpp"
#include "mshom/exec.hpp"
#include "mshom/grid.hpp"

namespace mshom {

inline constexpr double kImplicitSolveTol = 1e-10;

struct SolveStats {
  int iterations = 0;        // 0 for the direct path
  double rel_residual = 0;   // ||b - A w|| / ||b||
};

// w solving (I - dt L) w = rhs; throws NumericError if the residual
// tolerance cannot be met. dt must be positive.
Field solve_implicit(const DiffusionOperator& op, double dt, const Field& rhs,
                     Exec exec = Exec::parallel, SolveStats* stats = nullptr);

// Generic preconditioned CG on an SPD operator given by apply_fn.
// Solves A x = b in place; inv_diag is the Jacobi preconditioner.
struct CgResult {
  bool converged = false;
  int iterations = 0;
  double rel_residual = 0;
};

CgResult conjugate_gradient(const std::function<void(const std::vector<double>&, std::vector<double>&)>& apply_fn,
                            std::span<const double> inv_diag,
                            std::span<const double> b, std::vector<double>& x,
                            double rel_tol, int max_iter, Exec exec);

}  // namespace mshom
