#include "mshom/gauss_hermite.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "mshom/error.hpp"

namespace mshom {

namespace {

// evaluate H_n and H_{n-1} (physicists') at x with the three-term recurrence
void hermite_pair(int n, long double x, long double& pn, long double& pnm1) {
  long double p0 = 1.0L, p1 = 2.0L * x;
  if (n == 0) {
    pn = p0;
    pnm1 = 0.0L;
    return;
  }
  for (int k = 2; k <= n; ++k) {
    const long double p2 = 2.0L * x * p1 - 2.0L * (k - 1) * p0;
    p0 = p1;
    p1 = p2;
  }
  pn = p1;
  pnm1 = p0;
}

GaussHermite compute(int n) {
  if (n < 1 || n > 128) throw ConfigError("gauss-hermite order out of range [1, 128]");
  GaussHermite gh;
  gh.nodes.assign(static_cast<std::size_t>(n), 0.0);
  gh.weights.assign(static_cast<std::size_t>(n), 0.0);

  // log of the weight prefactor 2^{n-1} n! sqrt(pi) / n^2
  long double log_c = 0.5L * std::log((long double)M_PI) + (n - 1) * std::log(2.0L) -
                      2.0L * std::log((long double)n);
  for (int k = 2; k <= n; ++k) log_c += std::log((long double)k);

  long double x = 0.0L;
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // initial guesses from the standard asymptotic ladder
    if (i == 0) {
      x = std::sqrt((long double)(2 * n + 1)) -
          1.85575L * std::pow((long double)(2 * n + 1), -1.0L / 6.0L);
    } else if (i == 1) {
      x -= 1.14L * std::pow((long double)n, 0.426L) / x;
    } else if (i == 2) {
      x = 1.86L * x - 0.86L * gh.nodes[0];
    } else if (i == 3) {
      x = 1.91L * x - 0.91L * gh.nodes[1];
    } else {
      x = 2.0L * x - gh.nodes[static_cast<std::size_t>(i - 2)];
    }
    long double pn = 0.0L, pnm1 = 0.0L;
    for (int it = 0; it < 200; ++it) {
      hermite_pair(n, x, pn, pnm1);
      const long double dp = 2.0L * n * pnm1;  // H_n' = 2 n H_{n-1}
      const long double dx = pn / dp;
      x -= dx;
      if (std::fabs((double)dx) < 1e-18 * (1.0 + std::fabs((double)x))) break;
    }
    hermite_pair(n, x, pn, pnm1);
    gh.nodes[static_cast<std::size_t>(i)] = (double)x;
    // w = 2^{n-1} n! sqrt(pi) / (n^2 H_{n-1}(x)^2)
    const long double log_w = log_c - 2.0L * std::log(std::fabs(pnm1));
    gh.weights[static_cast<std::size_t>(i)] = (double)std::exp(log_w);
  }
  // mirror to the negative axis, largest nodes first then descending order
  for (int i = 0; i < half; ++i) {
    gh.nodes[static_cast<std::size_t>(n - 1 - i)] = -gh.nodes[static_cast<std::size_t>(i)];
    gh.weights[static_cast<std::size_t>(n - 1 - i)] = gh.weights[static_cast<std::size_t>(i)];
  }
  if (n % 2 == 1) gh.nodes[static_cast<std::size_t>(half - 1)] = 0.0;
  return gh;
}

}  // namespace

const GaussHermite& GaussHermite::order(int n) {
  static std::mutex mu;
  static std::map<int, GaussHermite> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute(n)).first;
  return it->second;
}

}  // namespace mshom
