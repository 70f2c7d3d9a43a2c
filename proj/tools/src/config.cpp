#include "config.hpp"

#include <cmath>
#include <initializer_list>
#include <numbers>
#include <set>

#include <Eigen/Dense>

#include "metriplectic/error.hpp"

namespace metriplectic::cli {

namespace {

[[noreturn]] void config_error(const std::string& message) { throw Error(ErrorCode::ConfigError, message); }

/// node[key], or an undefined node when node is absent, null or not a map.
YAML::Node child(const YAML::Node& node, const char* key) {
  if (!node || !node.IsMap()) return YAML::Node(YAML::NodeType::Undefined);
  return node[key];
}

void check_keys(const YAML::Node& node, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!node || node.IsNull()) return;
  if (!node.IsMap()) config_error(where + " must be a mapping");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (keys.count(key) == 0) config_error("unknown key '" + key + "' in " + where);
  }
}

double number(const YAML::Node& node, const std::string& what) {
  double v = 0.0;
  try {
    v = node.as<double>();
  } catch (const YAML::Exception&) {
    config_error(what + " must be a number");
  }
  if (!std::isfinite(v)) config_error(what + " must be finite");
  return v;
}

double get(const YAML::Node& node, const char* key, double fallback, const std::string& where) {
  const YAML::Node v = child(node, key);
  if (!v) return fallback;
  return number(v, where + "." + key);
}

Vec vector_of(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) config_error(what + " must be a list of numbers");
  Vec out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

Vec get_vector(const YAML::Node& node, const char* key, Vec fallback, const std::string& where) {
  const YAML::Node v = child(node, key);
  if (!v) return fallback;
  return vector_of(v, where + "." + key);
}

/// A scalar (times identity), a list (diagonal) or a list of rows.
Eigen::MatrixXd matrix_of(const YAML::Node& node, Eigen::Index n, const std::string& what) {
  if (node.IsScalar()) {
    return Eigen::MatrixXd::Identity(n, n) * number(node, what);
  }
  if (!node.IsSequence() || static_cast<Eigen::Index>(node.size()) != n) {
    config_error(what + " must be a number, a list of " + std::to_string(n) + " numbers or " +
                 std::to_string(n) + " rows");
  }
  if (node[0].IsScalar()) {
    return as_eigen(vector_of(node, what)).asDiagonal();
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec row = vector_of(node[static_cast<std::size_t>(i)], what);
    if (static_cast<Eigen::Index>(row.size()) != n) config_error(what + " rows must have length " + std::to_string(n));
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  return m;
}

Eigen::MatrixXd get_matrix(const YAML::Node& node, const char* key, const Eigen::MatrixXd& fallback,
                           const std::string& where) {
  const YAML::Node v = child(node, key);
  if (!v) return fallback;
  return matrix_of(v, fallback.rows(), where + "." + key);
}

/// Size of a square matrix given as a list (of rows or of diagonal entries).
Eigen::Index matrix_size(const YAML::Node& node, Eigen::Index fallback) {
  if (node && node.IsSequence()) return static_cast<Eigen::Index>(node.size());
  return fallback;
}

EntropyEnergy entropy_energy(const YAML::Node& node, const std::string& where) {
  check_keys(node, {"kind", "T0", "c"}, where);
  const YAML::Node k = child(node, "kind");
  const std::string kind = k ? k.as<std::string>() : "linear";
  const double t0 = get(node, "T0", 1.0, where);
  if (!(t0 > 0.0)) config_error(where + ".T0 must be positive");
  if (kind == "linear") return linear_entropy_energy(t0);
  if (kind == "exponential") {
    const double c = get(node, "c", 1.0, where);
    if (!(c > 0.0)) config_error(where + ".c must be positive");
    return exponential_entropy_energy(t0, c);
  }
  config_error(where + ".kind must be 'linear' or 'exponential'");
}

IdealGasParams gas_params(const YAML::Node& node, double default_u0, const std::string& where) {
  check_keys(node, {"n_moles", "c_v", "gas_constant", "area", "V0", "S0", "U0"}, where);
  IdealGasParams p;
  p.n_moles = get(node, "n_moles", p.n_moles, where);
  p.c_v = get(node, "c_v", p.c_v, where);
  p.gas_constant = get(node, "gas_constant", p.gas_constant, where);
  p.area = get(node, "area", p.area, where);
  p.V0 = get(node, "V0", p.area, where);
  p.S0 = get(node, "S0", p.S0, where);
  p.U0 = get(node, "U0", default_u0, where);
  return p;
}

SystemSpec piston(const YAML::Node& p) {
  check_keys(p, {"mass", "friction", "gas"}, "parameters");
  const double mass = get(p, "mass", 1.0, "parameters");
  const double friction = get(p, "friction", 1.0, "parameters");
  if (!(mass > 0.0)) config_error("parameters.mass must be positive");
  if (friction < 0.0) config_error("parameters.friction must be nonnegative");
  const auto gas = gas_params(child(p, "gas"), 3.0, "parameters.gas");
  return builtin_piston(mass, friction, ideal_gas_energy(gas));
}

SystemSpec two_pistons(const YAML::Node& p) {
  check_keys(p, {"total_mass", "friction_left", "friction_right", "kappa", "geometry", "gas_left", "gas_right"},
             "parameters");
  const double mass = get(p, "total_mass", 1.0, "parameters");
  if (!(mass > 0.0)) config_error("parameters.total_mass must be positive");
  const YAML::Node g = child(p, "geometry");
  check_keys(g, {"area_left", "area_right", "length"}, "parameters.geometry");
  PistonGeometry geometry;
  geometry.area_left = get(g, "area_left", geometry.area_left, "parameters.geometry");
  geometry.area_right = get(g, "area_right", geometry.area_right, "parameters.geometry");
  geometry.length = get(g, "length", geometry.length, "parameters.geometry");
  if (!(geometry.area_left > 0.0 && geometry.area_right > 0.0 && geometry.length > 0.0)) {
    config_error("parameters.geometry entries must be positive");
  }
  auto left = gas_params(child(p, "gas_left"), 3.0, "parameters.gas_left");
  auto right = gas_params(child(p, "gas_right"), 1.5, "parameters.gas_right");
  left.area = geometry.area_left;
  right.area = geometry.area_right;
  const double fl = get(p, "friction_left", 0.0, "parameters");
  const double fr = get(p, "friction_right", 0.0, "parameters");
  const double kappa = get(p, "kappa", 1.0, "parameters");
  if (fl < 0.0 || fr < 0.0 || kappa < 0.0) config_error("parameters friction and kappa must be nonnegative");
  return builtin_two_pistons(mass, fl, fr, kappa, ideal_gas_energy(left), ideal_gas_energy(right), geometry);
}

SystemSpec chemical(const YAML::Node& p) {
  check_keys(p, {"Q", "psi_star", "lambda", "entropy_energy"}, "parameters");
  Eigen::Matrix3d q_default;
  q_default << 2.0, 0.5, 0.0, 0.5, 1.5, 0.25, 0.0, 0.25, 1.0;
  const Vec psi_star = get_vector(p, "psi_star", {0.0, 0.0, 0.0}, "parameters");
  const auto r = static_cast<Eigen::Index>(psi_star.size());
  if (r == 0) config_error("parameters.psi_star must not be empty");
  const Eigen::MatrixXd q = r == 3 ? get_matrix(p, "Q", q_default, "parameters")
                                   : get_matrix(p, "Q", Eigen::MatrixXd::Identity(r, r), "parameters");
  const Eigen::MatrixXd lambda = get_matrix(p, "lambda", Eigen::MatrixXd::Identity(r, r), "parameters");
  return builtin_chemical(q, psi_star, lambda,
                          entropy_energy(child(p, "entropy_energy"), "parameters.entropy_energy"));
}

SystemSpec rigid_body(const YAML::Node& p) {
  check_keys(p, {"inertia", "friction", "entropy_energy"}, "parameters");
  const Eigen::MatrixXd inertia = get_matrix(p, "inertia", Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal(), "parameters");
  const Eigen::MatrixXd friction = get_matrix(p, "friction", Eigen::Matrix3d::Identity() * 0.1, "parameters");
  return builtin_rigid_body_thermo(inertia, friction,
                                   entropy_energy(child(p, "entropy_energy"), "parameters.entropy_energy"));
}

SystemSpec oscillator(const YAML::Node& p) {
  check_keys(p, {"mass", "stiffness", "friction", "entropy_energy", "dissipative"}, "parameters");
  const Eigen::Index d = matrix_size(child(p, "mass"), 1);
  const Eigen::MatrixXd mass = get_matrix(p, "mass", Eigen::MatrixXd::Identity(d, d), "parameters");
  const Eigen::MatrixXd stiffness = get_matrix(p, "stiffness", Eigen::MatrixXd::Identity(d, d), "parameters");
  const Eigen::MatrixXd friction = get_matrix(p, "friction", Eigen::MatrixXd::Identity(d, d) * 0.1, "parameters");
  const YAML::Node dis = child(p, "dissipative");
  const bool dissipative = dis ? dis.as<bool>() : true;
  return builtin_damped_oscillator(
      mass, stiffness, friction,
      entropy_energy(child(p, "entropy_energy"), "parameters.entropy_energy"), dissipative);
}

SystemSpec fluid(const YAML::Node& p) {
  check_keys(p, {"cells", "length", "mu", "kappa", "eos"}, "parameters");
  const double cells = get(p, "cells", 32.0, "parameters");
  if (cells < 4.0 || cells != std::floor(cells)) config_error("parameters.cells must be an integer >= 4");
  const double length = get(p, "length", 1.0, "parameters");
  FluidParams params;
  params.mu = get(p, "mu", 0.01, "parameters");
  params.kappa = get(p, "kappa", 0.01, "parameters");
  if (params.mu < 0.0 || params.kappa < 0.0) config_error("parameters.mu and kappa must be nonnegative");
  const YAML::Node eos = child(p, "eos");
  check_keys(eos, {"gamma", "c_v", "c"}, "parameters.eos");
  params.eos.gamma = get(eos, "gamma", params.eos.gamma, "parameters.eos");
  params.eos.c_v = get(eos, "c_v", params.eos.c_v, "parameters.eos");
  params.eos.c = get(eos, "c", params.eos.c, "parameters.eos");
  return make_fluid_system(make_grid(static_cast<std::size_t>(cells), length), params);
}

State default_initial_state(const SystemSpec& spec) {
  return std::visit(
      [](const auto& s) -> State {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SimpleSystemSpec>) {
          if (s.name == "piston") return StateSimple{{1.0}, {0.5}, 0.0};
          return StateSimple{Vec(s.dim, 0.5), Vec(s.dim, 0.0), 0.0};
        } else if constexpr (std::is_same_v<T, DiscreteSystemSpec>) {
          return StateDiscrete{{1.0}, {0.0}, Vec(s.entropy_count, 0.0)};
        } else if constexpr (std::is_same_v<T, NoSympSystemSpec>) {
          Vec q(s.dim);
          for (std::size_t i = 0; i < s.dim; ++i) q[i] = (i % 2 == 0 ? 1.0 : -0.5) / static_cast<double>(i + 1);
          return StateSimple{q, {}, 0.0};
        } else if constexpr (std::is_same_v<T, LieSystemSpec>) {
          return StateLie{{0.0, 1.0, 1.0}, {}, 0.0};
        } else {
          return State{};
        }
      },
      spec);
}

StateField1D fluid_profile(const FluidSystemSpec& spec, const YAML::Node& node) {
  check_keys(node, {"rho_mean", "rho_amplitude", "m_amplitude", "s_mean", "s_amplitude", "wavenumber"},
             "initial_state.profile");
  const double rho0 = get(node, "rho_mean", 1.0, "initial_state.profile");
  const double rho1 = get(node, "rho_amplitude", 0.2, "initial_state.profile");
  const double m1 = get(node, "m_amplitude", 0.3, "initial_state.profile");
  const double s0 = get(node, "s_mean", 0.05, "initial_state.profile");
  const double s1 = get(node, "s_amplitude", 0.1, "initial_state.profile");
  const double k = get(node, "wavenumber", 1.0, "initial_state.profile");
  StateField1D x;
  for (std::size_t i = 0; i < spec.grid.cells; ++i) {
    const double phase = 2.0 * std::numbers::pi * k * spec.grid.center(i) / spec.grid.length;
    x.m.push_back(m1 * std::sin(phase));
    x.rho.push_back(rho0 + rho1 * std::cos(phase));
    x.s.push_back(s0 + s1 * std::sin(2.0 * phase));
  }
  return x;
}

State initial_state(const SystemSpec& spec, const YAML::Node& node) {
  if (const auto* f = std::get_if<FluidSystemSpec>(&spec)) {
    check_keys(node, {"m", "rho", "s", "profile"}, "initial_state");
    if (child(node, "m")) {
      return StateField1D{vector_of(child(node, "m"), "initial_state.m"), vector_of(child(node, "rho"), "initial_state.rho"),
                          vector_of(child(node, "s"), "initial_state.s")};
    }
    return fluid_profile(*f, child(node, "profile"));
  }
  State x = default_initial_state(spec);
  if (!node) return x;
  std::visit(
      [&](auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, StateSimple>) {
          check_keys(node, {"q", "p", "S"}, "initial_state");
          s.q = get_vector(node, "q", s.q, "initial_state");
          s.p = get_vector(node, "p", s.p, "initial_state");
          s.S = get(node, "S", s.S, "initial_state");
        } else if constexpr (std::is_same_v<T, StateDiscrete>) {
          check_keys(node, {"q", "p", "S"}, "initial_state");
          s.q = get_vector(node, "q", s.q, "initial_state");
          s.p = get_vector(node, "p", s.p, "initial_state");
          s.S = get_vector(node, "S", s.S, "initial_state");
        } else if constexpr (std::is_same_v<T, StateLie>) {
          check_keys(node, {"mu", "a", "s"}, "initial_state");
          s.mu = get_vector(node, "mu", s.mu, "initial_state");
          s.a = get_vector(node, "a", s.a, "initial_state");
          s.s = get(node, "s", s.s, "initial_state");
        }
      },
      x);
  return x;
}

template <class Enum>
Enum choice(const YAML::Node& node, const char* key, Enum fallback,
            std::initializer_list<std::pair<const char*, Enum>> options, const std::string& where) {
  const YAML::Node v = child(node, key);
  if (!v) return fallback;
  const auto value = v.as<std::string>();
  std::string allowed;
  for (const auto& [name, e] : options) {
    if (value == name) return e;
    allowed += allowed.empty() ? name : std::string("|") + name;
  }
  config_error(where + "." + key + " must be one of " + allowed);
}

}  // namespace

const std::vector<std::string>& system_names() {
  static const std::vector<std::string> names = {"piston", "two_pistons", "chemical", "rigid_body", "fluid1d",
                                                 "oscillator"};
  return names;
}

SystemSpec system_from_yaml(const YAML::Node& root) {
  if (!root || !root.IsMap()) config_error("config must be a mapping");
  if (!root["system"]) config_error("missing key 'system'");
  try {
    const auto name = root["system"].as<std::string>();
    const YAML::Node p = child(root, "parameters");
    if (name == "piston") return piston(p);
    if (name == "two_pistons") return two_pistons(p);
    if (name == "chemical") return chemical(p);
    if (name == "rigid_body") return rigid_body(p);
    if (name == "fluid1d") return fluid(p);
    if (name == "oscillator") return oscillator(p);
    config_error("unknown system '" + name + "'");
  } catch (const YAML::Exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
}

SystemSpec default_system(const std::string& name) {
  YAML::Node root;
  root["system"] = name;
  return system_from_yaml(root);
}

ScenarioConfig scenario_from_yaml(const YAML::Node& root) {
  try {
    check_keys(root, {"system", "parameters", "initial_state", "integrator", "engine", "bracket_form", "output",
                      "compare"},
               "config");
    ScenarioConfig cfg{system_from_yaml(root), State{}, {}, {}, {}};
    cfg.initial_state = initial_state(cfg.system, child(root, "initial_state"));
    try {
      validate(cfg.initial_state);
    } catch (const Error& e) {
      config_error("initial_state: " + e.message());
    }
    if (layout_of(cfg.initial_state) != system_layout(cfg.system) || !is_admissible(cfg.system, cfg.initial_state)) {
      config_error("initial_state is not an admissible state of system '" + system_name(cfg.system) + "'");
    }

    const YAML::Node integ = child(root, "integrator");
    check_keys(integ, {"method", "dt", "t_final", "k_min"}, "integrator");
    auto& io = cfg.integrator;
    io.method = choice(integ, "method", Method::RK4, {{"rk4", Method::RK4}, {"euler", Method::Euler}}, "integrator");
    io.dt = get(integ, "dt", io.dt, "integrator");
    io.t_final = get(integ, "t_final", io.t_final, "integrator");
    io.engine_options.k_min = get(integ, "k_min", io.engine_options.k_min, "integrator");
    if (!(io.dt > 0.0)) config_error("integrator.dt must be positive");
    if (!(io.t_final >= 0.0)) config_error("integrator.t_final must be nonnegative");
    io.engine = choice(root, "engine", EngineKind::Bracket,
                       {{"bracket", EngineKind::Bracket}, {"euler_lagrange", EngineKind::EulerLagrange}}, "config");
    io.engine_options.bracket_form =
        choice(root, "bracket_form", BracketForm::Symmetric,
               {{"symmetric", BracketForm::Symmetric}, {"first", BracketForm::First}}, "config");
    if (io.engine_options.bracket_form == BracketForm::First &&
        !std::holds_alternative<SimpleSystemSpec>(cfg.system)) {
      config_error("bracket_form 'first' applies to simple systems only");
    }

    const YAML::Node out = child(root, "output");
    check_keys(out, {"directory", "prefix"}, "output");
    if (const auto d = child(out, "directory")) cfg.output.directory = d.as<std::string>();
    const YAML::Node prefix = child(out, "prefix");
    cfg.output.prefix = prefix ? prefix.as<std::string>() : system_name(cfg.system);
    if (cfg.output.prefix.empty() || cfg.output.prefix.find('/') != std::string::npos) {
      config_error("output.prefix must be a plain file name");
    }

    const YAML::Node cmp = child(root, "compare");
    check_keys(cmp, {"tolerance"}, "compare");
    cfg.compare.tolerance = get(cmp, "tolerance", cfg.compare.tolerance, "compare");
    if (!(cfg.compare.tolerance > 0.0)) config_error("compare.tolerance must be positive");
    return cfg;
  } catch (const YAML::Exception& e) {
    config_error(std::string("malformed config: ") + e.what());
  }
}

YAML::Node load_yaml(const std::filesystem::path& path) {
  try {
    return YAML::LoadFile(path.string());
  } catch (const YAML::BadFile&) {
    config_error("cannot read config file '" + path.string() + "'");
  } catch (const YAML::Exception& e) {
    config_error("cannot parse '" + path.string() + "': " + e.what());
  }
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return scenario_from_yaml(load_yaml(path)); }

}  // namespace metriplectic::cli
