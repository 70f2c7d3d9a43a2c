#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "config.hpp"
#include "metriplectic/error.hpp"
#include "metriplectic/verify.hpp"

namespace metriplectic::cli {

namespace {

std::shared_ptr<spdlog::logger> logger() {
  static const auto log = [] {
    auto l = spdlog::stderr_logger_st("metriplectic");
    l->set_pattern("[%l] %v");
    const char* env = std::getenv("METRIPLECTIC_LOG");
    const std::string level = env != nullptr ? env : "error";
    l->set_level(level == "debug" ? spdlog::level::debug
                 : level == "info" ? spdlog::level::info
                                   : spdlog::level::err);
    return l;
  }();
  return log;
}

/// One line, key=value, for scripts.
void report_error(std::ostream& err, const Error& e) {
  err << "error code=" << to_string(e.code());
  if (e.index()) err << " index=" << *e.index();
  err << " message=\"" << e.message() << "\"\n";
}

void report_error(std::ostream& err, const std::string& code, const std::string& message) {
  err << "error code=" << code << " message=\"" << message << "\"\n";
}

std::filesystem::path output_dir(const ScenarioConfig& cfg, const SimulateArgs& args) {
  return args.out_dir ? *args.out_dir : cfg.output.directory;
}

nlohmann::json abort_json(const Trajectory& traj) {
  if (!traj.aborted) return nullptr;
  return {{"code", std::string(to_string(traj.aborted->code()))},
          {"step", traj.aborted->index() ? nlohmann::json(*traj.aborted->index()) : nlohmann::json(nullptr)},
          {"message", traj.aborted->message()}};
}

nlohmann::json run_summary(const ScenarioConfig& cfg, const Trajectory& traj, const std::filesystem::path& csv) {
  const auto& io = cfg.integrator;
  const auto& first = traj.diagnostics.front();
  const auto& last = traj.diagnostics.back();
  nlohmann::json j;
  j["system"] = system_name(cfg.system);
  j["engine"] = std::string(to_string(io.engine));
  j["method"] = std::string(to_string(io.method));
  j["bracket_form"] = std::string(to_string(io.engine_options.bracket_form));
  j["dt"] = io.dt;
  j["t_final"] = io.t_final;
  j["steps_requested"] = static_cast<std::uint64_t>(std::llround(io.t_final / io.dt));
  j["steps_completed"] = traj.states.size() - 1;
  j["completed"] = !traj.aborted.has_value();
  j["aborted"] = abort_json(traj);
  j["H_initial"] = first.H;
  j["H_final"] = last.H;
  j["energy_drift_relative"] = std::abs(last.H - first.H) / std::max(std::abs(first.H), 1e-300);
  j["S_initial"] = first.S_total;
  j["S_final"] = last.S_total;
  j["csv"] = csv.filename().string();
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
  os << text;
}

void write_trajectory(const std::filesystem::path& path, const SystemSpec& spec, const Trajectory& traj) {
  std::ostringstream os;
  write_csv(os, spec, traj);
  write_text(path, os.str());
}

/// Loads the config and creates the output directory. Any failure here is a
/// configuration error and leaves no files behind.
std::optional<ScenarioConfig> prepare(const SimulateArgs& args, std::ostream& err,
                                      std::filesystem::path& dir) {
  try {
    ScenarioConfig cfg = load_scenario(args.config);
    dir = output_dir(cfg, args);
    std::filesystem::create_directories(dir);
    return cfg;
  } catch (const Error& e) {
    report_error(err, e);
  } catch (const std::filesystem::filesystem_error& e) {
    report_error(err, "ConfigError", e.what());
  }
  return std::nullopt;
}

int run_and_report(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    report_error(err, e);
    return e.code() == ErrorCode::DomainViolation || e.code() == ErrorCode::NonpositiveTemperature
               ? kRuntimeError
               : kFailure;
  }
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.17g}", v); }

std::vector<std::string> csv_header(const SystemSpec& spec) {
  std::vector<std::string> cols = {"t"};
  for (auto& name : coordinate_names(system_layout(spec))) cols.push_back(std::move(name));
  cols.insert(cols.end(), {"H", "S_total", "dSdt"});
  const Layout layout = system_layout(spec);
  std::size_t n_temps = 1;
  if (layout.cls == StateClass::Discrete || layout.cls == StateClass::Field1D) n_temps = layout.blocks[2];
  if (n_temps == 1) {
    cols.emplace_back("T");
  } else {
    for (std::size_t i = 0; i < n_temps; ++i) cols.push_back("T_" + std::to_string(i + 1));
  }
  return cols;
}

void write_csv(std::ostream& os, const SystemSpec& spec, const Trajectory& traj) {
  const auto header = csv_header(spec);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i == 0 ? "" : ",") << header[i];
  os << '\n';
  std::string line;
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& d = traj.diagnostics[k];
    line = format_number(traj.times[k]);
    for (double v : flatten(traj.states[k])) line += "," + format_number(v);
    for (double v : {d.H, d.S_total, d.dSdt}) line += "," + format_number(v);
    for (double v : d.T) line += "," + format_number(v);
    os << line << '\n';
  }
  if (traj.aborted) {
    os << "# truncated step=" << traj.aborted->index().value_or(0) << " code=" << to_string(traj.aborted->code())
       << '\n';
  }
}

int cmd_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  std::filesystem::path dir;
  const auto cfg = prepare(args, err, dir);
  if (!cfg) return kFailure;
  return run_and_report(
      [&] {
        logger()->info("simulating {} for t = {} with dt = {}", system_name(cfg->system), cfg->integrator.t_final,
                       cfg->integrator.dt);
        const Trajectory traj = integrate(cfg->system, cfg->initial_state, cfg->integrator);
        const auto csv = dir / (cfg->output.prefix + ".csv");
        write_trajectory(csv, cfg->system, traj);
        const auto summary = run_summary(*cfg, traj, csv);
        write_text(dir / (cfg->output.prefix + "_summary.json"), summary.dump(2) + "\n");
        out << csv.string() << '\n';
        if (traj.aborted) {
          report_error(err, *traj.aborted);
          return static_cast<int>(kRuntimeError);
        }
        logger()->info("relative energy drift {}", summary["energy_drift_relative"].get<double>());
        return static_cast<int>(kSuccess);
      },
      err);
}

int cmd_compare(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  std::filesystem::path dir;
  const auto cfg = prepare(args, err, dir);
  if (!cfg) return kFailure;
  return run_and_report(
      [&] {
        IntegratorOptions io = cfg->integrator;
        io.engine = EngineKind::EulerLagrange;
        const Trajectory el = integrate(cfg->system, cfg->initial_state, io);
        io.engine = EngineKind::Bracket;
        const Trajectory br = integrate(cfg->system, cfg->initial_state, io);
        write_trajectory(dir / (cfg->output.prefix + "_euler_lagrange.csv"), cfg->system, el);
        write_trajectory(dir / (cfg->output.prefix + "_bracket.csv"), cfg->system, br);

        const std::size_t n = std::min(el.states.size(), br.states.size());
        double max_diff = 0.0, scale = 1.0, at_time = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          const Vec a = flatten(el.states[k]);
          const Vec b = flatten(br.states[k]);
          for (std::size_t i = 0; i < a.size(); ++i) {
            scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
            const double d = std::abs(a[i] - b[i]);
            if (d > max_diff) {
              max_diff = d;
              at_time = el.times[k];
            }
          }
        }
        const double divergence = max_diff / scale;
        const double threshold = cfg->compare.tolerance * std::max(1.0, io.t_final);
        const bool same_length = el.states.size() == br.states.size();
        const bool pass = divergence <= threshold && same_length && !el.aborted && !br.aborted;

        nlohmann::json j;
        j["system"] = system_name(cfg->system);
        j["steps_compared"] = n - 1;
        j["max_abs_divergence"] = max_diff;
        j["max_divergence_time"] = at_time;
        j["state_scale"] = scale;
        j["divergence"] = divergence;
        j["tolerance"] = cfg->compare.tolerance;
        j["threshold"] = threshold;
        j["euler_lagrange_aborted"] = abort_json(el);
        j["bracket_aborted"] = abort_json(br);
        j["pass"] = pass;
        write_text(dir / (cfg->output.prefix + "_compare.json"), j.dump(2) + "\n");
        out << j.dump(2) << '\n';
        if (el.aborted || br.aborted) {
          report_error(err, el.aborted ? *el.aborted : *br.aborted);
          return static_cast<int>(kRuntimeError);
        }
        return static_cast<int>(pass ? kSuccess : kFailure);
      },
      err);
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  std::optional<SystemSpec> spec;
  try {
    if (args.spec) {
      spec = system_from_yaml(load_yaml(*args.spec));
    } else {
      spec = default_system(args.system);
    }
  } catch (const Error& e) {
    report_error(err, e);
    return kRuntimeError;
  }
  try {
    SuiteOptions options;
    options.jobs = std::max<std::size_t>(1, args.jobs);
    options.use_fd = args.use_fd;
    const VerifyReport report = run_suite(args.suite, *spec, args.seed, args.cases, options);
    logger()->info("suite {} on {} took {:.3f} s", report.suite, report.system, report.wall_seconds);
    out << to_json(report) << '\n';
    return report.pass ? kSuccess : kFailure;
  } catch (const Error& e) {
    report_error(err, e);
    return e.code() == ErrorCode::UnsupportedSuite ? kRuntimeError : kFailure;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Metriplectic dynamics: simulate, verify and compare"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Integrate a scenario and write its trajectory CSV");
  simulate->add_option("--config", sim.config, "Scenario YAML file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim.out_dir, "Output directory (overrides output.directory)");

  SimulateArgs cmp;
  auto* compare = app.add_subcommand("compare", "Run both engines on a scenario and report their divergence");
  compare->add_option("--config", cmp.config, "Scenario YAML file")->required()->check(CLI::ExistingFile);
  compare->add_option("--out", cmp.out_dir, "Output directory (overrides output.directory)");

  VerifyArgs ver;
  auto* verify = app.add_subcommand("verify", "Run a property suite and print its JSON report");
  auto* system_opt = verify->add_option("--system", ver.system, "Built-in system with default parameters")
                         ->check(CLI::IsMember(system_names()));
  verify->add_option("--spec", ver.spec, "YAML file describing the system")
      ->check(CLI::ExistingFile)
      ->excludes(system_opt);
  verify->add_option("--suite", ver.suite, "Suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--seed", ver.seed, "Seed for states and observables");
  verify->add_option("-n", ver.cases, "Number of cases")->check(CLI::PositiveNumber);
  verify->add_option("--jobs", ver.jobs, "Worker threads")->check(CLI::PositiveNumber);
  verify->add_flag("--fd", ver.use_fd, "Use finite-difference gradients");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e, out, err);
    const CLI::App* active = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << active->help();
    return kRuntimeError;
  }
  if (verify->parsed() && ver.system.empty() && !ver.spec) {
    err << "error code=ConfigError message=\"verify needs --system or --spec\"\n" << verify->help();
    return kRuntimeError;
  }
  if (simulate->parsed()) return cmd_simulate(sim, out, err);
  if (compare->parsed()) return cmd_compare(cmp, out, err);
  return cmd_verify(ver, out, err);
}

}  // namespace metriplectic::cli
