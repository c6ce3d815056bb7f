#pragma once

// Exact simulation of the fast mean-reverting process
//   dv = -(1/tau)(v - xi) dt + sqrt(Q/tau) dW
// in the sine spectral basis: over a step the conditional law is Gaussian with
// mean xi + (v - xi) e^{-dt/tau} and mode-k variance (q_k/2)(1 - e^{-2dt/tau}),
// so there is no time-discretization bias for frozen xi. Also the semigroup /
// invariant-measure diagnostics built on top of it.

#include <cstdint>
#include <functional>
#include <vector>

#include "mshom/grid.hpp"
#include "mshom/problem.hpp"
#include "mshom/rng.hpp"

namespace mshom {

struct OuProcess {
  const SpectralBasis* basis = nullptr;
  Field v;
  double tau = 1.0;
  GaussianStream stream;
  std::uint64_t steps_taken = 0;
};

OuProcess make_ou(const SpectralBasis& basis, Field v0, double tau, GaussianStream stream);

// exact update over [t, t+dt] with xi frozen
void ou_step(OuProcess& state, const Field& xi, double dt, Exec exec = Exec::parallel);

// one exact draw of v(t) given v(0) = eta; sample_index picks the noise
Field ou_draw(const SpectralBasis& basis, const Field& eta, const Field& xi, double tau,
              double t, const GaussianStream& stream, std::uint64_t sample_index,
              Exec exec = Exec::parallel);

// draw from the invariant law: xi + centered modes of variance q_k/2
Field invariant_draw(const SpectralBasis& basis, const Field& xi, const GaussianStream& stream,
                     std::uint64_t sample_index, Exec exec = Exec::parallel);

struct LipschitzFunctional {
  std::function<double(const Field&)> eval;
  double lipschitz = 1.0;  // declared constant, used only in bound envelopes
};

// Two trajectories driven by the identical noise stream: their difference is
// deterministic and contracts exactly like e^{-t/tau}.
struct ContractionResult {
  double measured = 0;
  double predicted = 0;
};
ContractionResult coupled_contraction(const SpectralBasis& basis, const Field& eta1,
                                      const Field& eta2, const Field& xi, double tau, double t,
                                      double dt, const GaussianStream& stream);

struct MonteCarloEstimate {
  double mean = 0;
  double std_error = 0;
  int samples = 0;
};

// Monte Carlo mean of Phi(v(t)) started from eta
MonteCarloEstimate semigroup_mean(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                  const Field& eta, const Field& xi, double tau, double t,
                                  int samples, const GaussianStream& stream);

// Monte Carlo integral of Phi against the invariant law
MonteCarloEstimate invariant_mean(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                  const Field& xi, int samples, const GaussianStream& stream);

struct MixingPoint {
  double t = 0;
  double gap = 0;    // |P_t Phi(eta) - mu(Phi)|
  double bound = 0;  // c [Phi] e^{-t/tau} (1 + |eta| + |xi|), c fixed at the first t
  double std_error = 0;
};

std::vector<MixingPoint> mixing_gaps(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                     const Field& eta, const Field& xi, double tau,
                                     const std::vector<double>& t_list, int samples,
                                     const GaussianStream& stream);

// least-squares slope of log(gap) vs t over points with gap > 5 std errors
double fitted_decay_rate(const std::vector<MixingPoint>& curve);

}  // namespace mshom
