#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mshom/averaging.hpp"
#include "mshom/gauss_hermite.hpp"
#include "mshom/ou.hpp"
#include "mshom/problem.hpp"

using namespace mshom;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("gauss-hermite rules integrate low moments exactly") {
  for (int order : {5, 20, 40}) {
    const auto& gh = GaussHermite::order(order);
    double w0 = 0, w2 = 0, w4 = 0;
    for (std::size_t i = 0; i < gh.nodes.size(); ++i) {
      w0 += gh.weights[i];
      w2 += gh.weights[i] * gh.nodes[i] * gh.nodes[i];
      w4 += gh.weights[i] * std::pow(gh.nodes[i], 4);
    }
    const double rpi = std::sqrt(kPi);
    CHECK(w0 == doctest::Approx(rpi).epsilon(1e-13));
    CHECK(w2 == doctest::Approx(0.5 * rpi).epsilon(1e-12));
    CHECK(w4 == doctest::Approx(0.75 * rpi).epsilon(1e-12));
    // gaussian_mean of an affine function is the mean
    CHECK(gh.gaussian_mean(1.7, 2.0, [](double z) { return 3.0 * z - 1.0; }) ==
          doctest::Approx(3.0 * 1.7 - 1.0).epsilon(1e-12));
  }
}

TEST_CASE("oscillatory reaction field evaluation") {
  const Grid g = build_grid(1, 31);
  const Field eta(g, 0.8);

  SUBCASE("y-independent alpha is plain pointwise evaluation") {
    const auto alpha = make_reaction("tanh");
    const Field r = reaction_field(alpha, 0.25, eta);
    for (std::size_t p = 0; p < r.size(); ++p)
      CHECK(r[p] == doctest::Approx(-(1.0 + std::tanh(0.8))));
  }

  SUBCASE("pure cell factor repeats with period eps in x") {
    ReactionCoefficient alpha = make_reaction("separable");
    const double eps = 0.25;
    const Field r = reaction_field(alpha, eps, eta);
    // nodes i and i+8 are one period apart on the n=31 grid (h = 1/32)
    for (std::size_t p = 0; p + 8 < r.size(); ++p)
      CHECK(r[p] == doctest::Approx(r[p + 8]).epsilon(1e-12));
  }

  SUBCASE("eps = 1 with grid aligned to Y matches direct sampling") {
    const auto alpha = make_reaction("dissipative");
    const Field r = reaction_field(alpha, 1.0, eta);
    for (std::size_t p = 0; p < r.size(); ++p) {
      const double x = g.point(p)[0];
      CHECK(r[p] == doctest::Approx(alpha.at(x, 0.0, 0.8)));
    }
  }
}

TEST_CASE("cell average: zero-mean factor, constants, and the unit-mean weight") {
  const Grid g = build_grid(1, 15);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 2, 0.1, 2.0));

  SUBCASE("sin(2 pi y) tanh(z) averages to zero") {
    AveragedReaction avg(make_reaction("separable"), basis);
    for (double z : {-2.0, 0.0, 0.7, 5.0}) CHECK(std::fabs(avg.cell_average(z)) < 1e-13);
  }

  SUBCASE("constant reaction") {
    AveragedReaction avg(make_reaction("constant", -0.75), basis);
    for (double z : {-1.0, 2.0}) CHECK(avg.cell_average(z) == doctest::Approx(-0.75));
  }

  SUBCASE("(1 + sin/2) weight has unit mean") {
    AveragedReaction avg(make_reaction("dissipative"), basis);
    for (double z : {-1.0, 0.0, 1.5})
      CHECK(avg.cell_average(z) == doctest::Approx(-(1.0 + std::tanh(z))).epsilon(1e-12));
  }
}

TEST_CASE("invariant-measure average against a Monte Carlo oracle") {
  // E tanh(N(0.5, 0.25)) via 10^6 draws vs pointwise Gauss-Hermite
  const Grid g = build_grid(1, 15);
  NoiseSpec spec;  // single mode tuned so sigma^2 = 0.25 at the midpoint
  spec.mode_index = {{1, 0}};
  spec.q = {0.25};
  auto basis = build_basis(g, spec);
  // override sigma^2 on every point to 0.25 for the scalar comparison
  for (auto& s : basis.sigma2) s = 0.25;

  ReactionCoefficient alpha;
  alpha.id = "tanh_raw";
  alpha.sup_bound = 1.0;
  alpha.lipschitz = 1.0;
  alpha.y_dependent = false;
  alpha.dissipative = false;
  alpha.eval = [](double, double, double eta) { return std::tanh(eta); };

  AveragedReaction avg(alpha, basis, 20);
  const Field xi(g, 0.5);
  const Field out = avg.mean_reaction(xi);

  auto stream = GaussianStream::derive(77, StreamPurpose::test);
  double mc = 0.0;
  const int n = 1000000;
  for (int i = 0; i < n; ++i)
    mc += std::tanh(0.5 + 0.5 * stream.normal(static_cast<std::uint64_t>(i), 0));
  mc /= n;
  for (std::size_t p = 0; p < out.size(); ++p) CHECK(out[p] == doctest::Approx(mc).epsilon(2e-3));
  CHECK(std::fabs(out[7] - mc) < 1e-3);
}

TEST_CASE("degenerate measure and quadrature-order stability") {
  const Grid g = build_grid(1, 15);
  NoiseSpec off;  // no modes: sigma^2 = 0
  auto basis0 = build_basis(g, off);
  AveragedReaction avg0(make_reaction("dissipative"), basis0);
  const Field xi = sample_field(g, [](double x, double) { return std::sin(2.0 * x); });
  const Field out0 = avg0.mean_reaction(xi);
  for (std::size_t p = 0; p < out0.size(); ++p)
    CHECK(out0[p] == doctest::Approx(avg0.cell_average(xi[p])));

  // G = 20 vs G = 40 differ below 1e-8 for the smooth built-in reactions
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 4, 0.3, 2.0));
  for (const char* name : {"dissipative", "separable", "tanh"}) {
    AveragedReaction g20(make_reaction(name), basis, 20);
    AveragedReaction g40(make_reaction(name), basis, 40);
    const Field a = g20.mean_reaction(xi);
    const Field b = g40.mean_reaction(xi);
    for (std::size_t p = 0; p < a.size(); ++p) CHECK(std::fabs(a[p] - b[p]) <= 1e-8);
  }
}

TEST_CASE("oscillatory mean reduces to the plain mean for y-independent alpha") {
  const Grid g = build_grid(1, 31);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 4, 0.3, 2.0));
  AveragedReaction avg(make_reaction("tanh"), basis);
  const Field xi = sample_field(g, [](double x, double) { return 0.5 - x; });
  const Field a = avg.mean_reaction(xi);
  const Field b = avg.mean_reaction_oscillatory(0.1, xi);
  for (std::size_t p = 0; p < a.size(); ++p) CHECK(a[p] == b[p]);  // bitwise
}

TEST_CASE("separable alpha factorizes through the quadrature") {
  const Grid g = build_grid(1, 31);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 4, 0.3, 2.0));
  AveragedReaction avg(make_reaction("separable"), basis);
  const Field xi = sample_field(g, [](double x, double) { return x; });
  const double eps = 0.125;
  const Field full = avg.mean_reaction_oscillatory(eps, xi);
  // oracle: sin(2 pi x/eps) * E tanh(N(xi(x), sigma^2(x)))
  ReactionCoefficient tanh_raw;
  tanh_raw.eval = [](double, double, double eta) { return std::tanh(eta); };
  tanh_raw.y_dependent = false;
  tanh_raw.sup_bound = 1.0;
  tanh_raw.lipschitz = 1.0;
  AveragedReaction scalar(tanh_raw, basis);
  const Field expectation = scalar.mean_reaction(xi);
  for (std::size_t p = 0; p < full.size(); ++p) {
    const double x = g.point(p)[0];
    double y = x / eps;
    y -= std::floor(y);
    CHECK(full[p] ==
          doctest::Approx(std::sin(2.0 * kPi * y) * expectation[p]).epsilon(1e-12));
  }
}

TEST_CASE("boundedness and lipschitz transfer of the averaged reaction") {
  const Grid g = build_grid(1, 31);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 6, 0.5, 2.0));
  AveragedReaction avg(make_reaction("dissipative"), basis);
  auto stream = GaussianStream::derive(123, StreamPurpose::test);
  for (int rep = 0; rep < 50; ++rep) {
    Field xi1(g), xi2(g);
    for (std::size_t p = 0; p < xi1.size(); ++p) {
      xi1[p] = 2.0 * stream.normal(static_cast<std::uint64_t>(rep), 2 * p);
      xi2[p] = 2.0 * stream.normal(static_cast<std::uint64_t>(rep), 2 * p + 1);
    }
    const Field a1 = avg.mean_reaction(xi1);
    const Field a2 = avg.mean_reaction(xi2);
    double dinf = 0, xinf = 0;
    for (std::size_t p = 0; p < a1.size(); ++p) {
      CHECK(std::fabs(a1[p]) <= avg.reaction().sup_bound + 1e-12);
      dinf = std::max(dinf, std::fabs(a1[p] - a2[p]));
      xinf = std::max(xinf, std::fabs(xi1[p] - xi2[p]));
    }
    CHECK(dinf <= avg.reaction().lipschitz * xinf + 1e-12);
  }
}

TEST_CASE("cache interpolation tracks the direct quadrature") {
  const Grid g = build_grid(1, 31);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 4, 0.4, 2.0));
  AveragedReaction avg(make_reaction("dissipative"), basis);
  avg.build_cache(2.0);
  REQUIRE(avg.has_cache());
  for (double z = -3.0; z <= 3.0; z += 0.037)
    CHECK(avg.cell_average_cached(z) == doctest::Approx(avg.cell_average(z)).epsilon(1e-7));
  // far outside the table: falls back to the direct path
  CHECK(avg.cell_average_cached(1e4) == avg.cell_average(1e4));

  const Field xi = sample_field(g, [](double x, double) { return 2.0 * x - 1.0; });
  const Field direct = avg.mean_reaction(xi, false);
  const Field cached = avg.mean_reaction(xi, true);
  for (std::size_t p = 0; p < direct.size(); ++p)
    CHECK(cached[p] == doctest::Approx(direct[p]).epsilon(1e-5));
}

TEST_CASE("measure reduction agrees with the Monte Carlo invariant integral") {
  // functional Phi(z) = <alpha_eps(z), probe>: the pointwise-marginal reduction
  // must match fast_ou's Monte Carlo over the invariant law within 3 SE
  const Grid g = build_grid(1, 31);
  const auto basis = build_basis(g, NoiseSpec::power_law(1, 5, 0.5, 2.0));
  const auto alpha = make_reaction("dissipative");
  AveragedReaction avg(alpha, basis);
  const Field xi = sample_field(g, [](double x, double) { return std::sin(kPi * x); });
  const Field probe = sample_field(g, [](double x, double) { return x * (1.0 - x); });
  const double eps = 0.2;

  LipschitzFunctional phi{[&](const Field& z) {
                            return inner(reaction_field(alpha, eps, z, Exec::serial), probe,
                                         Exec::serial);
                          },
                          alpha.lipschitz * norms(probe).l2};
  const auto mc = invariant_mean(basis, phi, xi, 40000,
                                 GaussianStream::derive(321, StreamPurpose::test));
  const double reduced = inner(avg.mean_reaction_oscillatory(eps, xi), probe);
  CHECK(std::fabs(mc.mean - reduced) <= 3.0 * mc.std_error);
}
