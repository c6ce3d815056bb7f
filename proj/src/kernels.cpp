#include "mshom/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace mshom::kernels {

namespace {

inline long block_count(std::size_t n) {
  return static_cast<long>((n + kReduceBlock - 1) / kReduceBlock);
}

}  // namespace

double block_sum(std::span<const double> x, Exec exec) {
  const long nb = block_count(x.size());
  if (nb == 0) return 0.0;
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
  const long n = static_cast<long>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double s = 0.0;
      for (long i = lo; i < hi; ++i) s += x[static_cast<std::size_t>(i)];
      partial[static_cast<std::size_t>(b)] = s;
    }
  } else {
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double s = 0.0;
      for (long i = lo; i < hi; ++i) s += x[static_cast<std::size_t>(i)];
      partial[static_cast<std::size_t>(b)] = s;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

double block_dot(std::span<const double> x, std::span<const double> y, Exec exec) {
  const long nb = block_count(x.size());
  if (nb == 0) return 0.0;
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
  const long n = static_cast<long>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double s = 0.0;
      for (long i = lo; i < hi; ++i)
        s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      partial[static_cast<std::size_t>(b)] = s;
    }
  } else {
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double s = 0.0;
      for (long i = lo; i < hi; ++i)
        s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
      partial[static_cast<std::size_t>(b)] = s;
    }
  }
  double total = 0.0;
  for (double p : partial) total += p;
  return total;
}

void axpby(double a, std::span<const double> x, double b, std::span<double> y, Exec exec) {
  const long n = static_cast<long>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      y[u] = a * x[u] + b * y[u];
    }
  } else {
    for (long i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      y[u] = a * x[u] + b * y[u];
    }
  }
}

void copy(std::span<const double> x, std::span<double> y, Exec exec) {
  const long n = static_cast<long>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)];
  } else {
    std::copy(x.begin(), x.end(), y.begin());
  }
}

void fill(std::span<double> y, double value, Exec exec) {
  const long n = static_cast<long>(y.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) y[static_cast<std::size_t>(i)] = value;
  } else {
    std::fill(y.begin(), y.end(), value);
  }
}

double max_abs(std::span<const double> x, Exec exec) {
  const long nb = block_count(x.size());
  if (nb == 0) return 0.0;
  std::vector<double> partial(static_cast<std::size_t>(nb), 0.0);
  const long n = static_cast<long>(x.size());
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double m = 0.0;
      for (long i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[static_cast<std::size_t>(i)]));
      partial[static_cast<std::size_t>(b)] = m;
    }
  } else {
    for (long b = 0; b < nb; ++b) {
      const long lo = b * kReduceBlock;
      const long hi = std::min(n, lo + kReduceBlock);
      double m = 0.0;
      for (long i = lo; i < hi; ++i) m = std::max(m, std::fabs(x[static_cast<std::size_t>(i)]));
      partial[static_cast<std::size_t>(b)] = m;
    }
  }
  double m = 0.0;
  for (double p : partial) m = std::max(m, p);
  return m;
}

void add_modes(std::span<double> field, std::span<const double> coeffs,
               std::span<const double> mode_table, Exec exec) {
  const long n = static_cast<long>(field.size());
  const std::size_t nmodes = coeffs.size();
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      double s = field[u];
      for (std::size_t k = 0; k < nmodes; ++k)
        s += coeffs[k] * mode_table[k * static_cast<std::size_t>(n) + u];
      field[u] = s;
    }
  } else {
    for (long i = 0; i < n; ++i) {
      const auto u = static_cast<std::size_t>(i);
      double s = field[u];
      for (std::size_t k = 0; k < nmodes; ++k)
        s += coeffs[k] * mode_table[k * static_cast<std::size_t>(n) + u];
      field[u] = s;
    }
  }
}

}  // namespace mshom::kernels
