#include <cmath>

#include "doctest.h"
#include "mshom/kernels.hpp"
#include "mshom/ou.hpp"
#include "mshom/problem.hpp"

using namespace mshom;

namespace {

struct Setup {
  Grid grid;
  NoiseSpec spec;
  SpectralBasis basis;
};

Setup make_setup(int n = 15, int K = 4, double q0 = 0.5) {
  Setup s{build_grid(1, n), NoiseSpec::power_law(1, K, q0, 2.0), {}};
  s.basis = build_basis(s.grid, s.spec);
  return s;
}

}  // namespace

TEST_CASE("noiseless mild solution is exact over accumulated steps") {
  auto su = make_setup(15, 4, 0.0);  // q = 0
  const Field xi(su.grid, 0.7);
  Field v0 = sample_field(su.grid, [](double x, double) { return std::sin(3.0 * x); });
  const double tau = 0.5;
  auto ou = make_ou(su.basis, v0, tau, GaussianStream::derive(1, StreamPurpose::test));
  const double dt = 0.05;
  const int steps = 40;  // t = 2
  for (int s = 0; s < steps; ++s) ou_step(ou, xi, dt);
  const double decay = std::exp(-2.0 / tau);
  for (std::size_t p = 0; p < ou.v.size(); ++p)
    CHECK(ou.v[p] == doctest::Approx(0.7 + (v0[p] - 0.7) * decay).epsilon(1e-12));
}

TEST_CASE("dt much larger than tau relaxes v to xi") {
  auto su = make_setup(15, 4, 0.0);
  const Field xi(su.grid, -1.3);
  auto ou = make_ou(su.basis, Field(su.grid, 5.0), 0.01,
                    GaussianStream::derive(2, StreamPurpose::test));
  ou_step(ou, xi, 50.0);
  for (std::size_t p = 0; p < ou.v.size(); ++p) CHECK(ou.v[p] == doctest::Approx(-1.3));
}

TEST_CASE("coupled contraction: shared noise cancels exactly") {
  auto su = make_setup();
  const Field xi = sample_field(su.grid, [](double x, double) { return x; });
  const Field eta1 = sample_field(su.grid, [](double x, double) { return std::sin(4.0 * x); });
  const Field eta2(su.grid, 0.25);

  SUBCASE("equal starts stay equal") {
    const auto r = coupled_contraction(su.basis, eta1, eta1, xi, 1.0, 1.0, 0.01,
                                       GaussianStream::derive(3, StreamPurpose::test));
    CHECK(r.measured == 0.0);
    CHECK(r.predicted == 0.0);
  }

  SUBCASE("measured / predicted = 1 to rounding at tau=1, t=2") {
    const auto r = coupled_contraction(su.basis, eta1, eta2, xi, 1.0, 2.0, 0.01,
                                       GaussianStream::derive(4, StreamPurpose::test));
    CHECK(r.measured / r.predicted == doctest::Approx(1.0).epsilon(1e-12));
    // and the ratio to the initial distance is e^{-2}
    Field d0 = eta1;
    kernels::axpy(-1.0, eta2.values, d0.values, Exec::parallel);
    CHECK(r.measured / norms(d0).l2 == doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
  }
}

TEST_CASE("semigroup mean: constants, noiseless linear, and the Gaussian second moment") {
  auto su = make_setup(15, 4, 0.4);
  const Field eta = sample_field(su.grid, [](double x, double) { return std::cos(x); });
  const Field xi(su.grid, 0.3);
  const auto stream = GaussianStream::derive(5, StreamPurpose::test);

  SUBCASE("constant functional is exact") {
    LipschitzFunctional c{[](const Field&) { return 4.25; }, 0.0};
    const auto est = semigroup_mean(su.basis, c, eta, xi, 1.0, 0.8, 32, stream);
    CHECK(est.mean == doctest::Approx(4.25));
    CHECK(est.std_error == doctest::Approx(0.0));
  }

  SUBCASE("q = 0 gives the mild solution for a linear functional") {
    auto su0 = make_setup(15, 4, 0.0);
    const Field probe = sample_field(su0.grid, [](double x, double) { return x * x; });
    LipschitzFunctional lin{[&](const Field& w) { return inner(w, probe); }, norms(probe).l2};
    const double t = 0.6;
    const auto est = semigroup_mean(su0.basis, lin, eta, xi, 1.0, t, 8, stream);
    Field mild = xi;
    const double d = std::exp(-t);
    for (std::size_t p = 0; p < mild.size(); ++p) mild[p] = 0.3 + (eta[p] - 0.3) * d;
    CHECK(est.mean == doctest::Approx(inner(mild, probe)).epsilon(1e-12));
  }

  SUBCASE("||w||^2 matches the squared mean plus mode variances within 3 SE") {
    LipschitzFunctional sq{[](const Field& w) {
                             const double l2 = norms(w).l2;
                             return l2 * l2;
                           },
                           10.0};
    const double t = 0.9, tau = 1.0;
    const int samples = 20000;
    const auto est = semigroup_mean(su.basis, sq, eta, xi, tau, t, samples, stream);
    Field mild = xi;
    const double d = std::exp(-t / tau);
    for (std::size_t p = 0; p < mild.size(); ++p) mild[p] = xi[p] + (eta[p] - xi[p]) * d;
    double expect = norms(mild).l2 * norms(mild).l2;
    for (double q : su.spec.q) expect += 0.5 * q * (1.0 - d * d);
    CHECK(std::fabs(est.mean - expect) <= 3.0 * est.std_error);
  }
}

TEST_CASE("invariant integral: mean, centered projection, and total variance") {
  auto su = make_setup(31, 6, 0.8);
  const Field xi = sample_field(su.grid, [](double x, double) { return 0.4 * std::sin(x); });
  const auto stream = GaussianStream::derive(6, StreamPurpose::test);

  LipschitzFunctional proj{[&](const Field& w) {
                             Field e1(su.grid);
                             for (std::size_t p = 0; p < e1.size(); ++p)
                               e1[p] = std::sqrt(2.0) * std::sin(std::numbers::pi * su.grid.point(p)[0]);
                             return inner(w, e1);
                           },
                           1.0};
  const auto m1 = invariant_mean(su.basis, proj, xi, 20000, stream);
  Field e1 = sample_field(su.grid, [](double x, double) {
    return std::sqrt(2.0) * std::sin(std::numbers::pi * x);
  });
  CHECK(std::fabs(m1.mean - inner(xi, e1)) <= 3.0 * m1.std_error);

  LipschitzFunctional dev{[&](const Field& w) {
                            Field d = w;
                            kernels::axpy(-1.0, xi.values, d.values, Exec::serial);
                            const double l2 = norms(d, Exec::serial).l2;
                            return l2 * l2;
                          },
                          10.0};
  const auto m2 = invariant_mean(su.basis, dev, xi, 20000, stream);
  CHECK(std::fabs(m2.mean - 0.5 * su.spec.trace()) <= 3.0 * m2.std_error);
}

TEST_CASE("moment bounds of the fast process hold with Monte Carlo slack") {
  auto su = make_setup(15, 4, 0.6);
  const Field eta = sample_field(su.grid, [](double x, double) { return 2.0 * std::sin(6.0 * x); });
  const Field xi(su.grid, -0.2);
  const auto stream = GaussianStream::derive(7, StreamPurpose::test);

  SUBCASE("second moment bound (Ito estimate)") {
    for (double t : {0.1, 0.5, 2.0}) {
      LipschitzFunctional sq{[](const Field& w) {
                               const double l2 = norms(w, Exec::serial).l2;
                               return l2 * l2;
                             },
                             10.0};
      const auto est = semigroup_mean(su.basis, sq, eta, xi, 1.0, t, 4000, stream);
      const double n_eta = norms(eta).l2, n_xi = norms(xi).l2;
      const double bound =
          2.0 * (n_eta * n_eta * std::exp(-2.0 * t) + n_xi * n_xi + su.spec.trace());
      CHECK(est.mean <= bound + 3.0 * est.std_error);
    }
  }

  SUBCASE("first absolute moment of the invariant law") {
    LipschitzFunctional nrm{[](const Field& w) { return norms(w, Exec::serial).l2; }, 1.0};
    const auto est = invariant_mean(su.basis, nrm, xi, 4000, stream);
    const double c = 2.0 + std::sqrt(0.5 * su.spec.trace());
    CHECK(est.mean <= c * (1.0 + norms(xi).l2) + 3.0 * est.std_error);
  }
}

TEST_CASE("markov restart: moment bound holds from a mid-trajectory state") {
  auto su = make_setup(15, 4, 0.5);
  const Field xi(su.grid, 0.1);
  auto ou = make_ou(su.basis, Field(su.grid, 3.0), 1.0,
                    GaussianStream::derive(8, StreamPurpose::test));
  for (int s = 0; s < 20; ++s) ou_step(ou, xi, 0.05);  // run to t0 = 1
  const Field eta = ou.v;                              // F_{t0}-measurable start
  LipschitzFunctional sq{[](const Field& w) {
                           const double l2 = norms(w, Exec::serial).l2;
                           return l2 * l2;
                         },
                         10.0};
  const double t = 0.7;
  const auto est = semigroup_mean(su.basis, sq, eta, xi, 1.0, t, 4000,
                                  GaussianStream::derive(9, StreamPurpose::test));
  const double n_eta = norms(eta).l2, n_xi = norms(xi).l2;
  const double bound = 2.0 * (n_eta * n_eta * std::exp(-2.0 * t) + n_xi * n_xi + su.spec.trace());
  CHECK(est.mean <= bound + 3.0 * est.std_error);
}

TEST_CASE("stationary variance of the exact recursion matches sigma^2(x)") {
  auto su = make_setup(15, 4, 0.7);
  const Field xi(su.grid);  // zero
  const double tau = 1.0, dt = 1.0;
  auto ou = make_ou(su.basis, Field(su.grid), tau,
                    GaussianStream::derive(10, StreamPurpose::ou_noise));
  const int burn = 50, keep = 60000;
  for (int s = 0; s < burn; ++s) ou_step(ou, xi, dt);
  std::vector<double> sum(su.grid.dof(), 0.0), sum2(su.grid.dof(), 0.0);
  for (int s = 0; s < keep; ++s) {
    ou_step(ou, xi, dt);
    for (std::size_t p = 0; p < su.grid.dof(); ++p) {
      sum[p] += ou.v[p];
      sum2[p] += ou.v[p] * ou.v[p];
    }
  }
  for (std::size_t p = 0; p < su.grid.dof(); ++p) {
    const double mean = sum[p] / keep;
    const double var = sum2[p] / keep - mean * mean;
    CHECK(var == doctest::Approx(su.basis.sigma2[p]).epsilon(0.05));
  }
}

TEST_CASE("mixing curve decays at the relaxation rate") {
  auto su = make_setup(15, 3, 0.4);
  const Field xi(su.grid, 0.0);
  const Field eta = sample_field(su.grid, [](double x, double) {
    return 2.0 * std::sin(std::numbers::pi * x);
  });
  Field probe = sample_field(su.grid, [](double x, double) {
    return std::sqrt(2.0) * std::sin(std::numbers::pi * x);
  });
  LipschitzFunctional lin{[probe](const Field& w) { return inner(w, probe, Exec::serial); },
                          1.0};
  const double tau = 0.5;
  const std::vector<double> ts{0.2, 0.4, 0.6, 0.9, 1.2, 1.5};
  const auto curve = mixing_gaps(su.basis, lin, eta, xi, tau, ts, 4000,
                                 GaussianStream::derive(11, StreamPurpose::test));
  REQUIRE(curve.size() == ts.size());
  // constant functional: all gaps vanish
  LipschitzFunctional c{[](const Field&) { return 1.0; }, 0.0};
  const auto flat = mixing_gaps(su.basis, c, eta, xi, tau, ts, 64,
                                GaussianStream::derive(12, StreamPurpose::test));
  for (const auto& p : flat) CHECK(p.gap == doctest::Approx(0.0));

  const double rate = fitted_decay_rate(curve);
  CHECK(rate >= 0.8 / tau);
  // bound envelope is calibrated at the first point
  CHECK(curve[0].bound == doctest::Approx(curve[0].gap));
}
