#include "mshom/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mshom/error.hpp"

namespace mshom {

namespace {

constexpr double kPi = std::numbers::pi;

std::string point_str(double a, double b) {
  std::ostringstream os;
  os << "(" << a << ", " << b << ")";
  return os.str();
}

}  // namespace

double NoiseSpec::trace() const {
  double s = 0.0;
  for (double v : q) s += v;
  return s;
}

NoiseSpec NoiseSpec::power_law(int dim, int K, double q0, double decay) {
  if (K < 0) throw ConfigError("noise mode count must be nonnegative");
  if (q0 < 0.0) throw ConfigError("noise amplitude q0 must be nonnegative");
  NoiseSpec spec;
  if (dim == 1) {
    for (int k = 1; k <= K; ++k) spec.mode_index.push_back({k, 0});
  } else {
    // enumerate (k1, k2) ordered by |k|^2, then k1, and keep the first K
    std::vector<std::array<int, 2>> all;
    const int span = K + 2;
    for (int k1 = 1; k1 <= span; ++k1)
      for (int k2 = 1; k2 <= span; ++k2) all.push_back({k1, k2});
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
      const int ra = a[0] * a[0] + a[1] * a[1];
      const int rb = b[0] * b[0] + b[1] * b[1];
      return ra != rb ? ra < rb : a[0] < b[0];
    });
    all.resize(static_cast<std::size_t>(K));
    spec.mode_index = std::move(all);
  }
  for (int j = 1; j <= K; ++j) spec.q.push_back(q0 * std::pow(double(j), -decay));
  return spec;
}

SpectralBasis build_basis(const Grid& grid, const NoiseSpec& noise) {
  SpectralBasis basis;
  basis.grid = grid;
  basis.qk = noise.q;
  const std::size_t dof = grid.dof();
  basis.table.assign(static_cast<std::size_t>(noise.modes()) * dof, 0.0);
  basis.sigma2.assign(dof, 0.0);
  for (int k = 0; k < noise.modes(); ++k) {
    const auto [k1, k2] = noise.mode_index[static_cast<std::size_t>(k)];
    if (k1 > grid.n || (grid.dim == 2 && k2 > grid.n))
      throw ConfigError("noise mode (" + std::to_string(k1) + "," + std::to_string(k2) +
                        ") is not resolved by an n=" + std::to_string(grid.n) + " grid");
    for (std::size_t p = 0; p < dof; ++p) {
      const auto x = grid.point(p);
      double e = std::sqrt(2.0) * std::sin(k1 * kPi * x[0]);
      if (grid.dim == 2) e *= std::sqrt(2.0) * std::sin(k2 * kPi * x[1]);
      basis.table[static_cast<std::size_t>(k) * dof + p] = e;
      basis.sigma2[p] += 0.5 * noise.q[static_cast<std::size_t>(k)] * e * e;
    }
  }
  return basis;
}

std::string ValidationReport::text() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << "\n";
  os << "ellipticity observed: m = " << ellipticity_min_observed
     << ", M = " << ellipticity_max_observed << "\n";
  os << "reaction: sup = " << alpha_sup_observed << ", lipschitz = " << alpha_lipschitz_observed
     << ", nonpositive = " << (alpha_nonpositive_observed ? "yes" : "no") << "\n";
  os << "trace(Q) = " << trace_q << "\n";
  for (const auto& v : violations) os << "violation: " << v << "\n";
  return os.str();
}

ValidationReport validate(const ProblemInstance& instance) {
  ValidationReport rep;
  const int dim = instance.dim;
  const double tol = 1e-9;

  // --- A: ellipticity window on a 64^d lattice, plus quadratic-form spot checks
  const int ny = 64;
  bool first = true;
  const int ny2 = dim == 2 ? ny : 1;
  for (int j = 0; j < ny2; ++j) {
    for (int i = 0; i < ny; ++i) {
      const double y1 = (i + 0.5) / ny;
      const double y2 = (j + 0.5) / ny;
      const CoeffMatrix a = instance.coeff.at(y1, y2);
      double lo = a.a11, hi = a.a11;
      if (dim == 2) {
        const double tr = a.a11 + a.a22;
        const double disc =
            std::sqrt(0.25 * (a.a11 - a.a22) * (a.a11 - a.a22) + a.a12 * a.a12);
        lo = 0.5 * tr - disc;
        hi = 0.5 * tr + disc;
      }
      if (first) {
        rep.ellipticity_min_observed = lo;
        rep.ellipticity_max_observed = hi;
        first = false;
      } else {
        rep.ellipticity_min_observed = std::min(rep.ellipticity_min_observed, lo);
        rep.ellipticity_max_observed = std::max(rep.ellipticity_max_observed, hi);
      }
      if (lo < instance.coeff.ellipticity_min - tol || lo <= 0.0)
        rep.violations.push_back("ellipticity: eigenvalue " + std::to_string(lo) +
                                 " below declared m at y = " + point_str(y1, y2));
      if (hi > instance.coeff.ellipticity_max + tol)
        rep.violations.push_back("ellipticity: eigenvalue " + std::to_string(hi) +
                                 " above declared M at y = " + point_str(y1, y2));
      // periodicity: the wrapped evaluation must agree with a shifted argument
      const CoeffMatrix ashift = instance.coeff.at(y1 + 1.0, y2 + (dim == 2 ? 1.0 : 0.0));
      if (std::fabs(ashift.a11 - a.a11) + std::fabs(ashift.a22 - a.a22) +
              std::fabs(ashift.a12 - a.a12) >
          1e-12)
        rep.violations.push_back("periodicity: A(y) != A(y+e) at y = " + point_str(y1, y2));
    }
  }

  // --- alpha: boundedness and Lipschitz constant on a wide eta sample
  const auto& alpha = instance.reaction;
  const std::vector<double> etas = [] {
    std::vector<double> e;
    for (int i = -40; i <= 40; ++i) e.push_back(0.5 * i);  // [-20, 20]
    return e;
  }();
  rep.alpha_sup_observed = 0.0;
  rep.alpha_lipschitz_observed = 0.0;
  for (int i = 0; i < ny; ++i) {
    const double y1 = (i + 0.5) / ny;
    const double y2 = dim == 2 ? std::fmod(0.37 + 2.0 * y1, 1.0) : 0.0;
    double prev_eta = etas.front();
    double prev_val = alpha.at(y1, y2, prev_eta);
    for (double eta : etas) {
      const double v = alpha.at(y1, y2, eta);
      rep.alpha_sup_observed = std::max(rep.alpha_sup_observed, std::fabs(v));
      if (std::fabs(v) > alpha.sup_bound + tol)
        rep.violations.push_back("boundedness: |alpha| = " + std::to_string(std::fabs(v)) +
                                 " above declared bound at (y, eta) = " +
                                 point_str(y1, eta));
      if (v > tol) rep.alpha_nonpositive_observed = false;
      if (eta != prev_eta) {
        const double slope = std::fabs(v - prev_val) / std::fabs(eta - prev_eta);
        rep.alpha_lipschitz_observed = std::max(rep.alpha_lipschitz_observed, slope);
        if (slope > alpha.lipschitz + tol)
          rep.violations.push_back("lipschitz: slope " + std::to_string(slope) +
                                   " above declared constant at (y, eta) = " +
                                   point_str(y1, eta));
      }
      prev_eta = eta;
      prev_val = v;
    }
  }
  if (alpha.dissipative && !rep.alpha_nonpositive_observed)
    rep.violations.push_back(
        "sign convention: reaction declared dissipative but positive values observed");

  // --- noise
  rep.trace_q = instance.noise.trace();
  for (std::size_t k = 0; k < instance.noise.q.size(); ++k)
    if (instance.noise.q[k] < 0.0)
      rep.violations.push_back("noise: q_" + std::to_string(k + 1) + " negative");

  // --- scalar data on a probe grid
  if (!(instance.horizon > 0.0)) rep.violations.push_back("horizon: T must be positive");
  if (instance.epsilons.empty()) rep.violations.push_back("epsilon list empty");
  for (double e : instance.epsilons)
    if (!(e > 0.0)) rep.violations.push_back("epsilon: nonpositive value");
  if (instance.replicas < 1) rep.violations.push_back("replicas must be >= 1");
  const Grid probe = build_grid(dim, 9);
  for (std::size_t p = 0; p < probe.dof(); ++p) {
    const auto x = probe.point(p);
    const double vals[3] = {instance.u0(x[0], x[1]), instance.v0(x[0], x[1]),
                            instance.forcing(0.0, x[0], x[1])};
    for (double v : vals)
      if (!std::isfinite(v)) {
        rep.violations.push_back("initial data or forcing not finite at x = " +
                                 point_str(x[0], x[1]));
        break;
      }
  }

  rep.pass = rep.violations.empty();
  return rep;
}

CellMatrix make_cell_matrix(const std::string& name, int dim) {
  CellMatrix cm;
  cm.id = name;
  cm.dim = dim;
  if (name == "identity") {
    cm.ellipticity_min = cm.ellipticity_max = 1.0;
    cm.eval = [](double, double) { return CoeffMatrix{1.0, 1.0, 0.0}; };
  } else if (name == "layered") {
    // a(y1) = 1/(2 + sin 2 pi y1); harmonic mean 1/2, arithmetic mean 1/sqrt(3)
    cm.ellipticity_min = 1.0 / 3.0;
    cm.ellipticity_max = 1.0;
    cm.eval = [](double y1, double) {
      const double a = 1.0 / (2.0 + std::sin(2.0 * kPi * y1));
      return CoeffMatrix{a, a, 0.0};
    };
  } else if (name == "oscillatory") {
    if (dim == 1) {
      cm.ellipticity_min = 1.0 / 3.0;
      cm.ellipticity_max = 1.0;
      cm.eval = [](double y1, double) {
        const double a = (2.0 + std::cos(2.0 * kPi * y1)) / 3.0;
        return CoeffMatrix{a, a, 0.0};
      };
    } else {
      cm.ellipticity_min = 1.0 / 9.0;
      cm.ellipticity_max = 1.0;
      cm.eval = [](double y1, double y2) {
        const double a = (2.0 + std::cos(2.0 * kPi * y1)) *
                         (2.0 + std::cos(2.0 * kPi * y2)) / 9.0;
        return CoeffMatrix{a, a, 0.0};
      };
    }
  } else {
    throw ConfigError("unknown cell matrix '" + name + "'");
  }
  return cm;
}

ReactionCoefficient make_reaction(const std::string& name, double constant_value) {
  ReactionCoefficient rc;
  rc.id = name;
  if (name == "zero") {
    rc.sup_bound = 0.0;
    rc.lipschitz = 0.0;
    rc.y_dependent = false;
    rc.dissipative = true;
    rc.eval = [](double, double, double) { return 0.0; };
  } else if (name == "constant") {
    rc.sup_bound = std::fabs(constant_value);
    rc.lipschitz = 0.0;
    rc.y_dependent = false;
    rc.dissipative = constant_value <= 0.0;
    rc.eval = [constant_value](double, double, double) { return constant_value; };
  } else if (name == "dissipative") {
    // -(1 + 1/2 sin 2 pi y1)(1 + tanh eta): bounded by 3, Lipschitz 3/2
    rc.sup_bound = 3.0;
    rc.lipschitz = 1.5;
    rc.y_dependent = true;
    rc.dissipative = true;
    rc.eval = [](double y1, double, double eta) {
      return -(1.0 + 0.5 * std::sin(2.0 * kPi * y1)) * (1.0 + std::tanh(eta));
    };
  } else if (name == "tanh") {
    // y-independent dissipative variant
    rc.sup_bound = 2.0;
    rc.lipschitz = 1.0;
    rc.y_dependent = false;
    rc.dissipative = true;
    rc.eval = [](double, double, double eta) { return -(1.0 + std::tanh(eta)); };
  } else if (name == "separable") {
    // sign-indefinite: kept in the catalog but flagged as non-dissipative
    rc.sup_bound = 1.0;
    rc.lipschitz = 1.0;
    rc.y_dependent = true;
    rc.dissipative = false;
    rc.eval = [](double y1, double, double eta) {
      return std::sin(2.0 * kPi * y1) * std::tanh(eta);
    };
  } else {
    throw ConfigError("unknown reaction '" + name + "'");
  }
  return rc;
}

namespace {

ScalarField make_profile(const std::string& name, double amp, int dim) {
  if (name == "zero") return [](double, double) { return 0.0; };
  if (name == "sine") {
    if (dim == 1) return [amp](double x, double) { return amp * std::sin(kPi * x); };
    return [amp](double x, double y) { return amp * std::sin(kPi * x) * std::sin(kPi * y); };
  }
  if (name == "bump") {
    if (dim == 1) return [amp](double x, double) { return amp * 4.0 * x * (1.0 - x); };
    return [amp](double x, double y) {
      return amp * 16.0 * x * (1.0 - x) * y * (1.0 - y);
    };
  }
  throw ConfigError("unknown profile '" + name + "'");
}

ForcingField make_forcing(const std::string& name, double amp, int dim) {
  if (name == "zero") return [](double, double, double) { return 0.0; };
  if (name == "constant") return [amp](double, double, double) { return amp; };
  if (name == "sine") {
    ScalarField p = make_profile("sine", amp, dim);
    return [p](double, double x, double y) { return p(x, y); };
  }
  throw ConfigError("unknown forcing '" + name + "'");
}

}  // namespace

std::vector<std::string> builtin_instance_ids() {
  return {"constant",            "constant_reaction", "layered",
          "layered_dissipative", "oscillatory",       "separable"};
}

ProblemInstance make_builtin(const std::string& id, const InstanceOptions& options) {
  ProblemInstance inst;
  inst.id = id;
  inst.dim = options.dim;
  if (id == "constant") {
    inst.coeff = make_cell_matrix("identity", options.dim);
    inst.reaction = make_reaction("zero");
  } else if (id == "constant_reaction") {
    inst.coeff = make_cell_matrix("identity", options.dim);
    inst.reaction = make_reaction("constant", options.alpha_constant);
  } else if (id == "layered") {
    inst.coeff = make_cell_matrix("layered", options.dim);
    inst.reaction = make_reaction("zero");
  } else if (id == "layered_dissipative") {
    inst.coeff = make_cell_matrix("layered", options.dim);
    inst.reaction = make_reaction("dissipative");
  } else if (id == "oscillatory") {
    inst.coeff = make_cell_matrix("oscillatory", options.dim);
    inst.reaction = make_reaction("dissipative");
  } else if (id == "separable") {
    inst.coeff = make_cell_matrix("layered", options.dim);
    inst.reaction = make_reaction("separable");
  } else {
    throw ConfigError("unknown built-in instance '" + id + "'");
  }
  inst.noise = options.noise;
  inst.forcing = make_forcing(options.forcing, options.forcing_amplitude, options.dim);
  inst.u0 = make_profile(options.u0, options.u0_amplitude, options.dim);
  inst.v0 = make_profile(options.v0, options.v0_amplitude, options.dim);
  inst.horizon = options.horizon;
  inst.epsilons = options.epsilons;
  inst.replicas = options.replicas;
  inst.seed = options.seed;
  return inst;
}

}  // namespace mshom
