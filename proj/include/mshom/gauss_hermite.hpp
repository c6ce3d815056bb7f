#pragma once

// Gauss-Hermite nodes and weights for the weight e^{-t^2}, computed by Newton
// iteration on the physicists' Hermite recurrence. For X ~ N(mu, sigma^2),
//   E f(X) = (1/sqrt(pi)) sum_g w_g f(mu + sqrt(2) sigma t_g).

#include <vector>

namespace mshom {

struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;

  static const GaussHermite& order(int n);  // cached per order

  template <class F>
  double gaussian_mean(double mu, double sigma, F&& f) const {
    double s = 0.0;
    const double c = sigma * 1.4142135623730951;  // sqrt(2)
    for (std::size_t g = 0; g < nodes.size(); ++g) s += weights[g] * f(mu + c * nodes[g]);
    return s * 0.5641895835477563;  // 1/sqrt(pi)
  }
};

}  // namespace mshom
