#pragma once

// Data-parallel building blocks shared by the field algebra, the stencil
// operators and the Monte Carlo loops. Each kernel dispatches on Exec and the
// two paths agree bitwise (see exec.hpp).

#include <cstddef>
#include <span>
#include <vector>

#include "mshom/exec.hpp"

namespace mshom::kernels {

// sum of x over fixed blocks, partials combined in block order
double block_sum(std::span<const double> x, Exec exec);

// dot product with the same blocked reduction
double block_dot(std::span<const double> x, std::span<const double> y, Exec exec);

// y <- a*x + b*y
void axpby(double a, std::span<const double> x, double b, std::span<double> y, Exec exec);

// y <- x
void copy(std::span<const double> x, std::span<double> y, Exec exec);

void fill(std::span<double> y, double value, Exec exec);

// y <- a*x + y
inline void axpy(double a, std::span<const double> x, std::span<double> y, Exec exec) {
  axpby(a, x, 1.0, y, exec);
}

// out[i] <- f(i), parallel over i; f must be pure.
template <class F>
void map_index(std::span<double> out, F&& f, Exec exec) {
  const long n = static_cast<long>(out.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) out[i] = f(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < n; ++i) out[i] = f(static_cast<std::size_t>(i));
  }
}

double max_abs(std::span<const double> x, Exec exec);

// field <- field + sum_k coeff[k] * modes[k*n .. k*n+n); modes stored row-major
void add_modes(std::span<double> field, std::span<const double> coeffs,
               std::span<const double> mode_table, Exec exec);

}  // namespace mshom::kernels
