#include <cmath>
#include <vector>

#include "doctest.h"
#include "mshom/kernels.hpp"
#include "mshom/rng.hpp"

using namespace mshom;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t salt) {
  auto s = GaussianStream::derive(4242, StreamPurpose::test, salt);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = s.normal(i, 0);
  return v;
}

}  // namespace

TEST_CASE("serial and parallel reductions agree bitwise") {
  for (std::size_t n : {1u, 7u, 1024u, 5000u, 100001u}) {
    auto x = random_vec(n, n);
    auto y = random_vec(n, n + 1);
    CHECK(kernels::block_sum(x, Exec::serial) == kernels::block_sum(x, Exec::parallel));
    CHECK(kernels::block_dot(x, y, Exec::serial) == kernels::block_dot(x, y, Exec::parallel));
    CHECK(kernels::max_abs(x, Exec::serial) == kernels::max_abs(x, Exec::parallel));

    auto ys = y, yp = y;
    kernels::axpby(0.37, x, -1.25, ys, Exec::serial);
    kernels::axpby(0.37, x, -1.25, yp, Exec::parallel);
    CHECK(ys == yp);
  }
}

TEST_CASE("blocked sum matches plain accumulation to rounding") {
  auto x = random_vec(40000, 3);
  double plain = 0.0;
  for (double v : x) plain += v;
  CHECK(kernels::block_sum(x, Exec::parallel) == doctest::Approx(plain).epsilon(1e-12));
}

TEST_CASE("add_modes accumulates the mode table") {
  const std::size_t n = 257, k = 5;
  std::vector<double> table(k * n);
  for (std::size_t m = 0; m < k; ++m)
    for (std::size_t i = 0; i < n; ++i) table[m * n + i] = std::sin(double(m + 1) * double(i));
  std::vector<double> c{0.5, -1.0, 2.0, 0.0, 0.25};
  std::vector<double> fs(n, 1.0), fp(n, 1.0);
  kernels::add_modes(fs, c, table, Exec::serial);
  kernels::add_modes(fp, c, table, Exec::parallel);
  CHECK(fs == fp);
  double expect = 1.0;
  for (std::size_t m = 0; m < k; ++m) expect += c[m] * table[m * n + 17];
  CHECK(fs[17] == doctest::Approx(expect));
}

TEST_CASE("gaussian stream is reproducible and roughly standard") {
  auto s = GaussianStream::derive(7, StreamPurpose::test, 0);
  auto s2 = GaussianStream::derive(7, StreamPurpose::test, 0);
  CHECK(s.normal(12, 3) == s2.normal(12, 3));
  // different purposes decorrelate
  auto t = GaussianStream::derive(7, StreamPurpose::ou_noise, 0);
  CHECK(s.normal(12, 3) != t.normal(12, 3));

  const int n = 200000;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal(static_cast<std::uint64_t>(i), 1);
    sum += z;
    sum2 += z * z;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 3.0 / std::sqrt(double(n)));
  CHECK(var == doctest::Approx(1.0).epsilon(0.02));
}
