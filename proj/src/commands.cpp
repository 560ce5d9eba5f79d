#include "fhlab/commands.hpp"

#include <atomic>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <thread>

#include "fhlab/snapshot.hpp"

namespace fhlab {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

fs::path prepare_dir(const RunConfig& config) {
  fs::create_directories(config.output_dir);
  auto os = open_out(config.output_dir / "config.ini");
  os << to_ini(config);
  return config.output_dir;
}

// config echo as nested JSON object of strings, straight from the INI text
ordered_json config_json(const RunConfig& config) {
  boost::property_tree::ptree tree;
  std::istringstream is(to_ini(config));
  boost::property_tree::read_ini(is, tree);
  ordered_json out = ordered_json::object();
  for (const auto& [section, body] : tree) {
    ordered_json sec = ordered_json::object();
    for (const auto& [key, value] : body) sec[key] = value.data();
    out[section] = sec;
  }
  return out;
}

ordered_json energy_json(const EnergyBreakdown& e) {
  return {{"kinetic", e.kinetic}, {"potential", e.potential}, {"hartree", e.hartree}, {"total", e.total}};
}

ordered_json ground_state_json(const GroundStateResult& r) {
  return {{"converged", r.converged},
          {"status", to_string(r.status)},
          {"omega", r.omega},
          {"energy", energy_json(r.energy)},
          {"residual", r.residual},
          {"iters", r.iters},
          {"final_step", r.final_step},
          {"mass", mass(r.field)},
          {"diagnostic", r.diagnostic}};
}

void write_json(const fs::path& path, const ordered_json& j) {
  auto os = open_out(path);
  os << j.dump(2) << "\n";
}

FieldState initial_field(const RunConfig& config, std::ostream& log, std::optional<GroundStateResult>& gs) {
  const GridSpec& g = config.grid;
  switch (config.initial.kind) {
    case InitialFieldKind::zero:
      return FieldState(g);
    case InitialFieldKind::gaussian: {
      const double w = config.initial.width, x0 = config.initial.offset;
      if (!(w > 0.0)) throw ConfigError("evolve.width", "must be positive");
      FieldState u = sample_field(g, [&](const std::array<double, 3>& x) {
        double r2 = (x[0] - x0) * (x[0] - x0);
        for (int d = 1; d < g.dim(); ++d) r2 += x[d] * x[d];
        return Complex(std::exp(-0.5 * r2 / (w * w)), 0.0);
      });
      return renormalize(u, config.model.mass_target);
    }
    case InitialFieldKind::file: {
      FieldState u = load_snapshot(config.initial.file);
      if (!(u.grid == g))
        throw ConfigError("evolve.initial_file",
                          "snapshot grid " + u.grid.describe() + " does not match configured grid " + g.describe());
      return u;
    }
    case InitialFieldKind::ground_state: {
      auto r = solve_ground_state(config.model, g, config.ground_state);
      log << "ground state: " << to_string(r.status) << " after " << r.iters << " iterations, residual "
          << r.residual << "\n";
      if (!r.converged) throw NotConvergedError("evolve: ground state did not converge: " + r.diagnostic, r);
      FieldState u = r.field;
      gs = std::move(r);
      return u;
    }
  }
  throw ConfigError("evolve.initial", "unknown initial field");
}

int run_loaded(const std::string& subcommand, const RunConfig& config, std::ostream& log) {
  if (subcommand == "ground-state") return cmd_ground_state(config, log);
  if (subcommand == "evolve") return cmd_evolve(config, log);
  if (subcommand == "stability") return cmd_stability(config, log);
  if (subcommand == "verify") return cmd_verify(config, log);
  log << "error: unknown subcommand '" << subcommand << "'\n";
  return kExitConfig;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

int cmd_ground_state(const RunConfig& config, std::ostream& log) {
  const fs::path dir = prepare_dir(config);
  const Hamiltonian ham(config.model, make_kernel(config.grid, config.model, config.dealias));
  std::vector<TraceEntry> trace;
  const auto r = solve_ground_state(ham, config.ground_state, &trace);

  save_snapshot(dir / "ground_state.frh", r.field);
  {
    auto os = open_out(dir / "trace.csv");
    os << "iter,energy,sigma_norm_sq,mass,hs_seminorm_sq,hartree,residual\n";
    for (const auto& t : trace)
      os << t.iter << ',' << num(t.energy) << ',' << num(t.sigma_norm_sq) << ',' << num(t.mass) << ','
         << num(t.hs_seminorm_sq) << ',' << num(t.hartree) << ',' << num(t.residual) << '\n';
  }
  ordered_json j;
  j["command"] = "ground-state";
  j["seed"] = config.seed;
  j["ground_state"] = ground_state_json(r);
  j["config"] = config_json(config);
  write_json(dir / "summary.json", j);

  log << "ground state: " << to_string(r.status) << ", iters " << r.iters << ", energy " << num(r.energy.total)
      << ", omega " << num(r.omega) << ", residual " << r.residual << "\n";
  if (!r.converged) {
    log << "error: not converged: " << r.diagnostic << "\n";
    return kExitNotConverged;
  }
  return kExitOk;
}

int cmd_evolve(const RunConfig& config, std::ostream& log) {
  const fs::path dir = prepare_dir(config);
  std::optional<GroundStateResult> gs;
  const FieldState u0 = initial_field(config, log, gs);
  const Hamiltonian ham(config.model, make_kernel(config.grid, config.model, config.dealias));
  const auto res = evolve(u0, ham, config.evolve);

  save_snapshot(dir / "final.frh", res.final_state);
  {
    auto os = open_out(dir / "conservation.csv");
    os << "time,mass,energy\n";
    for (std::size_t i = 0; i < res.trace.times.size(); ++i)
      os << num(res.trace.times[i]) << ',' << num(res.trace.mass_values[i]) << ','
         << num(res.trace.energy_values[i]) << '\n';
  }
  ordered_json j;
  j["command"] = "evolve";
  j["seed"] = config.seed;
  j["steps"] = config.evolve.steps();
  j["initial"] = to_string(config.initial.kind);
  j["max_relative_mass_drift"] = res.trace.max_relative_mass_drift();
  j["max_relative_energy_drift"] = res.trace.max_relative_energy_drift();
  j["initial_mass"] = res.trace.mass_values.front();
  j["final_mass"] = res.trace.mass_values.back();
  j["initial_energy"] = res.trace.energy_values.front();
  j["final_energy"] = res.trace.energy_values.back();
  if (gs) j["ground_state"] = ground_state_json(*gs);
  j["config"] = config_json(config);
  write_json(dir / "summary.json", j);
  log << "evolve: " << config.evolve.steps() << " steps, mass drift " << res.trace.max_relative_mass_drift()
      << ", energy drift " << res.trace.max_relative_energy_drift() << "\n";
  return kExitOk;
}

int cmd_stability(const RunConfig& config, std::ostream& log) {
  const fs::path dir = prepare_dir(config);
  const auto rep = run_stability_experiment(config.model, config.grid, config.ground_state, config.perturbation,
                                            config.evolve, config.dealias);
  save_snapshot(dir / "ground_state.frh", rep.ground_state->field);
  {
    auto os = open_out(dir / "report.csv");
    os << "time,orbit_distance,mass,energy\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i)
      os << num(rep.times[i]) << ',' << num(rep.orbit_distance[i]) << ',' << num(rep.mass_trace[i]) << ','
         << num(rep.energy_trace[i]) << '\n';
  }
  {
    auto os = open_out(dir / "report_long.csv");
    os << "time,quantity,value\n";
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
      os << num(rep.times[i]) << ",orbit_distance," << num(rep.orbit_distance[i]) << '\n';
      os << num(rep.times[i]) << ",mass," << num(rep.mass_trace[i]) << '\n';
      os << num(rep.times[i]) << ",energy," << num(rep.energy_trace[i]) << '\n';
    }
  }
  ordered_json j;
  j["command"] = "stability";
  j["seed"] = config.seed;
  j["max_distance"] = rep.max_distance;
  j["initial_distance"] = rep.initial_distance;
  j["growth_factor"] = rep.initial_distance > 0.0 ? ordered_json(rep.max_distance / rep.initial_distance)
                                                  : ordered_json(nullptr);
  j["ground_norm"] = rep.ground_norm;
  j["in_hypothesis"] = rep.in_hypothesis;
  j["hypothesis_note"] = rep.hypothesis_note;
  if (rep.perturbation) {
    const auto& p = *rep.perturbation;
    j["perturbation"] = {{"delta", p.delta},
                         {"mode", to_string(p.mode)},
                         {"seed", p.seed},
                         {"k_index", p.k_index},
                         {"factor", p.factor},
                         {"renormalize_mass", p.renormalize_mass}};
  } else {
    j["perturbation"] = nullptr;
  }
  ConservationTrace ct{rep.times, rep.mass_trace, rep.energy_trace};
  j["max_relative_mass_drift"] = ct.max_relative_mass_drift();
  j["max_relative_energy_drift"] = ct.max_relative_energy_drift();
  j["ground_state"] = ground_state_json(*rep.ground_state);
  j["config"] = config_json(config);
  write_json(dir / "summary.json", j);
  log << "stability: initial distance " << rep.initial_distance << ", max distance " << rep.max_distance
      << (rep.in_hypothesis ? "" : " [" + rep.hypothesis_note + "]") << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  const fs::path dir = prepare_dir(config);
  const auto checks = run_verify_suite(config.model, config.grid, config.verify);
  bool all = true;
  auto csv = open_out(dir / "verify.csv");
  csv << "name,applicable,passed,value,threshold,detail\n";
  ordered_json list = ordered_json::array();
  log << std::left << std::setw(26) << "check" << std::setw(7) << "result" << std::setw(12) << "value"
      << std::setw(11) << "threshold" << "detail\n";
  for (const auto& c : checks) {
    all = all && c.passed;
    const std::string status = !c.applicable ? "n/a" : c.passed ? "PASS" : "FAIL";
    log << std::setw(26) << c.name << std::setw(7) << status << std::setw(12) << short_num(c.value)
        << std::setw(11) << short_num(c.threshold) << c.detail << "\n";
    csv << c.name << ',' << (c.applicable ? "true" : "false") << ',' << (c.passed ? "true" : "false") << ','
        << num(c.value) << ',' << num(c.threshold) << ',' << csv_quote(c.detail) << '\n';
    list.push_back({{"name", c.name},
                    {"applicable", c.applicable},
                    {"passed", c.passed},
                    {"value", c.value},
                    {"threshold", c.threshold},
                    {"detail", c.detail}});
  }
  ordered_json j;
  j["command"] = "verify";
  j["seed"] = config.seed;
  j["all_passed"] = all;
  j["checks"] = list;
  j["config"] = config_json(config);
  write_json(dir / "summary.json", j);
  log << (all ? "verify: all checks passed\n" : "verify: FAILED\n");
  return all ? kExitOk : kExitFailure;
}

int run_command(const std::string& subcommand, const fs::path& config_path, const CommandOverrides& overrides,
                std::ostream& log) {
  try {
    RunConfig config = load_config(config_path);
    if (overrides.output_dir) config.output_dir = *overrides.output_dir;
    if (overrides.seed) config.apply_seed(*overrides.seed);
    return run_loaded(subcommand, config, log);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NotConvergedError& e) {
    log << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const BlowUpError& e) {
    log << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

int cmd_sweep(const fs::path& sweep_path, const CommandOverrides& overrides, std::ostream& log) {
  struct Job {
    std::string subcommand;
    fs::path config;
    fs::path dir;
    int code = kExitFailure;
  };
  std::vector<Job> jobs;
  std::ifstream is(sweep_path);
  if (!is) {
    log << "config error: cannot open sweep file " << sweep_path.string() << "\n";
    return kExitConfig;
  }
  const fs::path out = overrides.output_dir.value_or("out");
  std::string line;
  for (int lineno = 1; std::getline(is, line); ++lineno) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, extra;
    ls >> a >> b >> extra;
    if (!extra.empty()) {
      log << "config error: " << sweep_path.string() << ":" << lineno << ": expected '[subcommand] config'\n";
      return kExitConfig;
    }
    Job job;
    job.subcommand = b.empty() ? "stability" : a;
    if (job.subcommand != "ground-state" && job.subcommand != "evolve" && job.subcommand != "stability" &&
        job.subcommand != "verify") {
      log << "config error: " << sweep_path.string() << ":" << lineno << ": unknown subcommand '"
          << job.subcommand << "'\n";
      return kExitConfig;
    }
    const fs::path cfg = b.empty() ? a : b;
    job.config = cfg.is_absolute() ? cfg : sweep_path.parent_path() / cfg;
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03zu_", jobs.size());
    job.dir = out / (prefix + job.config.stem().string());
    jobs.push_back(job);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      Job& job = jobs[i];
      std::error_code ec;
      fs::create_directories(job.dir, ec);
      std::ofstream job_log(job.dir / "log.txt");
      CommandOverrides o = overrides;
      o.output_dir = job.dir;
      job.code = run_command(job.subcommand, job.config, o, job_log);
    }
  };
  const int workers = std::max(1, std::min<int>(overrides.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  fs::create_directories(out);
  auto csv = open_out(out / "sweep.csv");
  csv << "index,subcommand,config,output_dir,exit_code\n";
  bool all = true;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    all = all && job.code == kExitOk;
    csv << i << ',' << job.subcommand << ',' << csv_quote(job.config.string()) << ','
        << csv_quote(job.dir.string()) << ',' << job.code << '\n';
    log << "job " << i << " (" << job.subcommand << " " << job.config.string() << "): exit " << job.code << "\n";
  }
  return all ? kExitOk : kExitFailure;
}

}  // namespace fhlab
