#include "mshom/config.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mshom/error.hpp"

namespace mshom {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += fmt_double(v[i]);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as a number");
  }
}

long long parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an integer");
  }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + value + "' as an unsigned integer");
  }
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + value + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, trim(item)));
  if (out.empty()) throw ConfigError("key '" + key + "': empty list");
  return out;
}

}  // namespace

void RunConfig::write(std::ostream& os) const {
  os << "[run]\n";
  os << "instance = " << instance << "\n";
  os << "dimension = " << dimension << "\n";
  os << "grid_n = " << grid_n << "\n";
  os << "epsilon = " << fmt_list(epsilon) << "\n";
  os << "replicas = " << replicas << "\n";
  os << "horizon = " << fmt_double(horizon) << "\n";
  os << "dt = " << fmt_double(dt) << "\n";
  os << "snapshots = " << snapshots << "\n";
  os << "seed = " << seed << "\n";
  os << "output_dir = " << output_dir << "\n";
  os << "plot = " << (plot ? "true" : "false") << "\n";
  os << "delta_tol = " << fmt_double(delta_tol) << "\n";
  os << "\n[instance]\n";
  os << "forcing = " << forcing << "\n";
  os << "forcing_amplitude = " << fmt_double(forcing_amplitude) << "\n";
  os << "u0 = " << u0 << "\n";
  os << "u0_amplitude = " << fmt_double(u0_amplitude) << "\n";
  os << "v0 = " << v0 << "\n";
  os << "v0_amplitude = " << fmt_double(v0_amplitude) << "\n";
  os << "alpha_constant = " << fmt_double(alpha_constant) << "\n";
  os << "\n[noise]\n";
  os << "modes = " << noise_modes << "\n";
  os << "q0 = " << fmt_double(noise_q0) << "\n";
  os << "decay = " << fmt_double(noise_decay) << "\n";
  os << "\n[cell]\n";
  os << "resolution = " << cell_resolution << "\n";
  os << "\n[averaging]\n";
  os << "gh_order = " << gh_order << "\n";
  os << "table_size = " << table_size << "\n";
  os << "\n[mixing]\n";
  os << "tau = " << fmt_double(mixing_tau) << "\n";
  os << "t_max = " << fmt_double(mixing_t_max) << "\n";
  os << "t_count = " << mixing_t_count << "\n";
  os << "samples = " << mixing_samples << "\n";
  os << "eta_amplitude = " << fmt_double(mixing_eta_amplitude) << "\n";
  os << "\n[khasminskii]\n";
  os << "tau = " << fmt_double(khas_tau) << "\n";
  os << "eps_pattern = " << fmt_double(khas_eps_pattern) << "\n";
  os << "delta = " << fmt_list(khas_delta) << "\n";
  os << "samples = " << khas_samples << "\n";
  os << "steps_per_tau = " << khas_steps_per_tau << "\n";
  os << "xi_amplitude = " << fmt_double(khas_xi_amplitude) << "\n";
  os << "eta_amplitude = " << fmt_double(khas_eta_amplitude) << "\n";
  os << "\n[corrector]\n";
  os << "points_per_period = " << corrector_points_per_period << "\n";
}

std::string RunConfig::text() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  // section -> key -> setter
  std::map<std::string, std::map<std::string, Setter>> schema;

  auto dbl = [](double& slot) {
    return [&slot](const std::string& k, const std::string& v) { slot = parse_double(k, v); };
  };
  auto integer = [](int& slot) {
    return [&slot](const std::string& k, const std::string& v) {
      slot = static_cast<int>(parse_int(k, v));
    };
  };
  auto str = [](std::string& slot) {
    return [&slot](const std::string&, const std::string& v) { slot = v; };
  };
  auto list = [](std::vector<double>& slot) {
    return [&slot](const std::string& k, const std::string& v) { slot = parse_list(k, v); };
  };

  schema["run"] = {
      {"instance", str(cfg.instance)},
      {"dimension", integer(cfg.dimension)},
      {"grid_n", integer(cfg.grid_n)},
      {"epsilon", list(cfg.epsilon)},
      {"replicas", integer(cfg.replicas)},
      {"horizon", dbl(cfg.horizon)},
      {"dt", dbl(cfg.dt)},
      {"snapshots", integer(cfg.snapshots)},
      {"seed", [&cfg](const std::string& k, const std::string& v) { cfg.seed = parse_u64(k, v); }},
      {"output_dir", str(cfg.output_dir)},
      {"plot", [&cfg](const std::string& k, const std::string& v) { cfg.plot = parse_bool(k, v); }},
      {"delta_tol", dbl(cfg.delta_tol)},
  };
  schema["instance"] = {
      {"forcing", str(cfg.forcing)},
      {"forcing_amplitude", dbl(cfg.forcing_amplitude)},
      {"u0", str(cfg.u0)},
      {"u0_amplitude", dbl(cfg.u0_amplitude)},
      {"v0", str(cfg.v0)},
      {"v0_amplitude", dbl(cfg.v0_amplitude)},
      {"alpha_constant", dbl(cfg.alpha_constant)},
  };
  schema["noise"] = {
      {"modes", integer(cfg.noise_modes)},
      {"q0", dbl(cfg.noise_q0)},
      {"decay", dbl(cfg.noise_decay)},
  };
  schema["cell"] = {{"resolution", integer(cfg.cell_resolution)}};
  schema["averaging"] = {{"gh_order", integer(cfg.gh_order)},
                         {"table_size", integer(cfg.table_size)}};
  schema["mixing"] = {
      {"tau", dbl(cfg.mixing_tau)},           {"t_max", dbl(cfg.mixing_t_max)},
      {"t_count", integer(cfg.mixing_t_count)}, {"samples", integer(cfg.mixing_samples)},
      {"eta_amplitude", dbl(cfg.mixing_eta_amplitude)},
  };
  schema["khasminskii"] = {
      {"tau", dbl(cfg.khas_tau)},
      {"eps_pattern", dbl(cfg.khas_eps_pattern)},
      {"delta", list(cfg.khas_delta)},
      {"samples", integer(cfg.khas_samples)},
      {"steps_per_tau", integer(cfg.khas_steps_per_tau)},
      {"xi_amplitude", dbl(cfg.khas_xi_amplitude)},
      {"eta_amplitude", dbl(cfg.khas_eta_amplitude)},
  };
  schema["corrector"] = {{"points_per_period", integer(cfg.corrector_points_per_period)}};

  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!schema.count(section))
        throw ConfigError("unknown section '" + section + "' (line " + std::to_string(lineno) +
                          ")");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("key '" + key + "' appears before any section header");
    auto& keys = schema[section];
    const auto it = keys.find(key);
    if (it == keys.end())
      throw ConfigError("unknown key '" + key + "' in [" + section + "] (line " +
                        std::to_string(lineno) + ")");
    it->second(key, value);
  }
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace mshom
