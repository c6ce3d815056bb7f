#include "mshom/ou.hpp"

#include <cmath>

#include "mshom/error.hpp"
#include "mshom/kernels.hpp"

namespace mshom {

namespace {

// v <- xi + (v - xi) decay + sum_k scale_k g_k e_k with g_k from (stream, step)
void relax_and_kick(const SpectralBasis& basis, Field& v, const Field& xi, double decay,
                    double kick_variance_factor, const GaussianStream& stream,
                    std::uint64_t step, Exec exec) {
  const auto& xv = xi.values;
  auto& vv = v.values;
  kernels::map_index(
      vv, [&](std::size_t p) { return xv[p] + (vv[p] - xv[p]) * decay; }, exec);
  const int K = basis.modes();
  std::vector<double> coeff(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    coeff[static_cast<std::size_t>(k)] =
        std::sqrt(0.5 * basis.qk[static_cast<std::size_t>(k)] * kick_variance_factor) *
        stream.normal(step, static_cast<std::uint64_t>(k));
  kernels::add_modes(vv, coeff, basis.table, exec);
}

}  // namespace

OuProcess make_ou(const SpectralBasis& basis, Field v0, double tau, GaussianStream stream) {
  if (!(tau > 0.0)) throw ConfigError("time-scale tau must be positive");
  OuProcess st;
  st.basis = &basis;
  st.v = std::move(v0);
  st.tau = tau;
  st.stream = stream;
  return st;
}

void ou_step(OuProcess& state, const Field& xi, double dt, Exec exec) {
  if (!(dt > 0.0)) throw ConfigError("ou_step needs dt > 0");
  const double decay = std::exp(-dt / state.tau);
  relax_and_kick(*state.basis, state.v, xi, decay, 1.0 - decay * decay, state.stream,
                 state.steps_taken, exec);
  ++state.steps_taken;
}

Field ou_draw(const SpectralBasis& basis, const Field& eta, const Field& xi, double tau,
              double t, const GaussianStream& stream, std::uint64_t sample_index, Exec exec) {
  Field v = eta;
  const double decay = std::exp(-t / tau);
  relax_and_kick(basis, v, xi, decay, 1.0 - decay * decay, stream, sample_index, exec);
  return v;
}

Field invariant_draw(const SpectralBasis& basis, const Field& xi, const GaussianStream& stream,
                     std::uint64_t sample_index, Exec exec) {
  Field v = xi;
  const int K = basis.modes();
  std::vector<double> coeff(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    coeff[static_cast<std::size_t>(k)] =
        std::sqrt(0.5 * basis.qk[static_cast<std::size_t>(k)]) *
        stream.normal(sample_index, static_cast<std::uint64_t>(k));
  kernels::add_modes(v.values, coeff, basis.table, exec);
  return v;
}

ContractionResult coupled_contraction(const SpectralBasis& basis, const Field& eta1,
                                      const Field& eta2, const Field& xi, double tau, double t,
                                      double dt, const GaussianStream& stream) {
  OuProcess a = make_ou(basis, eta1, tau, stream);
  OuProcess b = make_ou(basis, eta2, tau, stream);
  const int steps = std::max(1, static_cast<int>(std::lround(t / dt)));
  const double step_dt = t / steps;
  for (int s = 0; s < steps; ++s) {
    ou_step(a, xi, step_dt);
    ou_step(b, xi, step_dt);  // same stream and step index: identical noise
  }
  Field diff = a.v;
  kernels::axpy(-1.0, b.v.values, diff.values, Exec::parallel);
  Field d0 = eta1;
  kernels::axpy(-1.0, eta2.values, d0.values, Exec::parallel);
  ContractionResult res;
  res.measured = norms(diff).l2;
  res.predicted = std::exp(-t / tau) * norms(d0).l2;
  return res;
}

namespace {

MonteCarloEstimate summarize(const std::vector<double>& vals) {
  MonteCarloEstimate est;
  est.samples = static_cast<int>(vals.size());
  const double n = static_cast<double>(vals.size());
  const double sum = kernels::block_sum(vals, Exec::parallel);
  est.mean = sum / n;
  double ss = 0.0;
  for (double v : vals) ss += (v - est.mean) * (v - est.mean);
  est.std_error = est.samples > 1 ? std::sqrt(ss / (n * (n - 1.0))) : 0.0;
  return est;
}

}  // namespace

MonteCarloEstimate semigroup_mean(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                  const Field& eta, const Field& xi, double tau, double t,
                                  int samples, const GaussianStream& stream) {
  if (samples < 1) throw ConfigError("semigroup estimate needs samples >= 1");
  std::vector<double> vals(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (long s = 0; s < samples; ++s) {
    const Field v = ou_draw(basis, eta, xi, tau, t, stream, static_cast<std::uint64_t>(s),
                            Exec::serial);
    vals[static_cast<std::size_t>(s)] = phi.eval(v);
  }
  return summarize(vals);
}

MonteCarloEstimate invariant_mean(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                  const Field& xi, int samples, const GaussianStream& stream) {
  if (samples < 1) throw ConfigError("invariant integral needs samples >= 1");
  std::vector<double> vals(static_cast<std::size_t>(samples));
#pragma omp parallel for schedule(static)
  for (long s = 0; s < samples; ++s) {
    const Field z = invariant_draw(basis, xi, stream, static_cast<std::uint64_t>(s), Exec::serial);
    vals[static_cast<std::size_t>(s)] = phi.eval(z);
  }
  return summarize(vals);
}

std::vector<MixingPoint> mixing_gaps(const SpectralBasis& basis, const LipschitzFunctional& phi,
                                     const Field& eta, const Field& xi, double tau,
                                     const std::vector<double>& t_list, int samples,
                                     const GaussianStream& stream) {
  for (std::size_t i = 1; i < t_list.size(); ++i)
    if (!(t_list[i] > t_list[i - 1])) throw ConfigError("mixing t_list must be increasing");

  const GaussianStream mu_stream =
      GaussianStream::derive(stream.key, StreamPurpose::invariant_draw);
  const MonteCarloEstimate mu = invariant_mean(basis, phi, xi, samples, mu_stream);

  const double amplitude =
      phi.lipschitz * (1.0 + norms(eta).l2 + norms(xi).l2);
  std::vector<MixingPoint> curve;
  double calib = 0.0;
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    const GaussianStream ts = GaussianStream::derive(stream.key, StreamPurpose::semigroup, i);
    const MonteCarloEstimate pt =
        semigroup_mean(basis, phi, eta, xi, tau, t_list[i], samples, ts);
    MixingPoint mp;
    mp.t = t_list[i];
    mp.gap = std::fabs(pt.mean - mu.mean);
    mp.std_error = std::sqrt(pt.std_error * pt.std_error + mu.std_error * mu.std_error);
    if (i == 0) calib = mp.gap * std::exp(t_list[0] / tau) / amplitude;
    mp.bound = calib * amplitude * std::exp(-mp.t / tau);
    curve.push_back(mp);
  }
  return curve;
}

double fitted_decay_rate(const std::vector<MixingPoint>& curve) {
  // ordinary least squares on log(gap) vs t, resolvable points only
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : curve) {
    if (!(p.gap > 5.0 * p.std_error) || p.gap <= 0.0) continue;
    const double y = std::log(p.gap);
    sx += p.t;
    sy += y;
    sxx += p.t * p.t;
    sxy += p.t * y;
    ++n;
  }
  if (n < 2) throw NumericError("mixing curve has fewer than 2 resolvable points");
  const double denom = n * sxx - sx * sx;
  return -(n * sxy - sx * sy) / denom;
}

}  // namespace mshom
