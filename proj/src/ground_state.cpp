#include "fhlab/ground_state.hpp"

#include <cmath>
#include <sstream>

#include "fhlab/random_field.hpp"
#include "fhlab/snapshot.hpp"

namespace fhlab {
namespace {

struct Iterate {
  FieldState u;
  Hamiltonian::Evaluation ev;
};

double omega_from(const Hamiltonian::Evaluation& ev) {
  return (4.0 * ev.energy.hartree - ev.energy.sigma_norm_sq()) / ev.mass;
}

double residual_from(const Hamiltonian& ham, const Iterate& it, double omega) {
  const auto& u = it.u.values;
  double sum = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const Complex r = it.ev.kinetic_applied[i] + (ham.potential()[i] - it.ev.mean_field[i] + omega) * u[i];
    sum += std::norm(r);
  }
  const double l2 = std::sqrt(it.u.grid.cell_volume() * sum);
  return l2 / std::sqrt(it.ev.energy.sigma_norm_sq());
}

// One projected descent step u - tau P^{-1} (grad E + omega u). The
// semi-implicit variant takes P = 1 + tau (|k|^2+m^2)^s, which amounts to
// dividing (1 - tau (V - W*|u|^2 + omega)) u by (1 + tau symbol) mode-wise.
// Solutions of the Euler-Lagrange equation are fixed points of both.
FieldState descent_step(const Hamiltonian& ham, const Iterate& it, double omega, double tau, bool semi_implicit) {
  const auto& u = it.u.values;
  FieldState out(it.u.grid);
  if (semi_implicit) {
    for (std::size_t i = 0; i < u.size(); ++i)
      out.values[i] = (1.0 - tau * (ham.potential()[i] - it.ev.mean_field[i] + omega)) * u[i];
    fft_forward(out.grid, out.values, out.values);
    for (std::size_t i = 0; i < u.size(); ++i) out.values[i] /= 1.0 + tau * ham.symbol()[i];
    fft_inverse(out.grid, out.values, out.values);
  } else {
    for (std::size_t i = 0; i < u.size(); ++i)
      out.values[i] =
          u[i] - tau * (it.ev.kinetic_applied[i] + (ham.potential()[i] - it.ev.mean_field[i] + omega) * u[i]);
  }
  return out;
}

TraceEntry trace_entry(int iter, const Iterate& it, double s, double residual) {
  TraceEntry e;
  e.iter = iter;
  e.energy = it.ev.energy.total;
  e.sigma_norm_sq = it.ev.energy.sigma_norm_sq();
  e.mass = it.ev.mass;
  e.hs_seminorm_sq = hs_seminorm_sq(it.u, s);
  e.hartree = it.ev.energy.hartree;
  e.residual = residual;
  return e;
}

}  // namespace

void GroundStateConfig::validate() const {
  if (!(step_size > 0.0)) throw std::invalid_argument("ground_state: step_size must be positive");
  if (!(residual_tol > 0.0)) throw std::invalid_argument("ground_state: residual_tol must be positive");
  if (max_iters < 0) throw std::invalid_argument("ground_state: max_iters must be non-negative");
  if (max_halvings < 0) throw std::invalid_argument("ground_state: max_halvings must be non-negative");
  if (init == InitKind::from_file && init_file.empty())
    throw std::invalid_argument("ground_state: init = file needs init_file");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iters: return "max_iters";
    case SolveStatus::step_collapse: return "step_collapse";
  }
  return "unknown";
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::gaussian: return "gaussian";
    case InitKind::random_seeded: return "random";
    case InitKind::from_file: return "file";
  }
  return "unknown";
}

InitKind init_kind_from_string(const std::string& name) {
  if (name == "gaussian") return InitKind::gaussian;
  if (name == "random") return InitKind::random_seeded;
  if (name == "file") return InitKind::from_file;
  throw std::invalid_argument("unknown init kind '" + name + "' (expected gaussian, random or file)");
}

double lagrange_omega(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel) {
  const Hamiltonian ham(params, kernel);
  const auto ev = ham.evaluate(field);
  if (!(ev.mass > 0.0)) throw std::invalid_argument("lagrange_omega: zero field");
  return omega_from(ev);
}

double el_residual(const FieldState& field, double omega, const ModelParams& params, const HartreeKernel& kernel) {
  const Hamiltonian ham(params, kernel);
  Iterate it{field, ham.evaluate(field)};
  if (!(it.ev.mass > 0.0)) throw std::invalid_argument("el_residual: zero field");
  return residual_from(ham, it, omega);
}

FieldState renormalize(const FieldState& field, double target) {
  const double current = mass(field);
  if (!(current > 0.0)) throw std::invalid_argument("renormalize: zero field");
  FieldState out = field;
  const double scale = std::sqrt(target / current);
  for (auto& z : out.values) z *= scale;
  return out;
}

void fix_gauge(FieldState& field) {
  std::size_t best = 0;
  double best_abs = -1.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    const double a = std::abs(field.values[i]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (!(best_abs > 0.0)) return;
  const Complex rot = std::conj(field.values[best]) / best_abs;
  for (auto& z : field.values) z *= rot;
  field.values[best] = Complex(best_abs, 0.0);
}

FieldState initial_guess(const GridSpec& grid, const ModelParams& params, const GroundStateConfig& config) {
  FieldState u(grid);
  switch (config.init) {
    case InitKind::gaussian:
      for (std::size_t i = 0; i < grid.size(); ++i) u.values[i] = std::exp(-0.5 * grid.radius_sq(i));
      break;
    case InitKind::random_seeded: {
      Rng rng(config.seed);
      u = random_smooth_field(grid, rng, 4, 1.0);
      // keep a definite overlap with even, positive profiles
      for (std::size_t i = 0; i < grid.size(); ++i) u.values[i] += std::exp(-0.5 * grid.radius_sq(i));
      break;
    }
    case InitKind::from_file:
      u = load_snapshot(config.init_file);
      require_same_grid(u.grid, grid, "initial_guess");
      break;
  }
  return renormalize(u, params.mass_target);
}

GroundStateResult solve_ground_state(const Hamiltonian& ham, const GroundStateConfig& config,
                                     std::vector<TraceEntry>* trace) {
  return solve_ground_state(ham, config, initial_guess(ham.grid(), ham.params(), config), trace);
}

GroundStateResult solve_ground_state(const Hamiltonian& ham, const GroundStateConfig& config,
                                     const FieldState& initial, std::vector<TraceEntry>* trace) {
  config.validate();
  const ModelParams& params = ham.params();
  require_same_grid(initial.grid, ham.grid(), "solve_ground_state");
  if (!params.subcritical())
    warn_once("gs-supercritical",
              "gamma >= 2s: outside the mass-subcritical regime, the minimization may not converge");

  const double M = params.mass_target;
  FieldState u0 = renormalize(initial, M);
  Iterate cur{u0, ham.evaluate(u0)};

  GroundStateResult res{cur.u, 0.0, {}, 0.0, 0, false, SolveStatus::max_iters, 0.0, {}};
  double tau = config.step_size;
  int iter = 0;
  double omega = omega_from(cur.ev);
  double residual = residual_from(ham, cur, omega);
  if (trace) trace->push_back(trace_entry(0, cur, params.s, residual));

  for (;;) {
    if (residual < config.residual_tol) {
      res.status = SolveStatus::converged;
      break;
    }
    if (iter >= config.max_iters) {
      res.status = SolveStatus::max_iters;
      break;
    }
    const double e_old = cur.ev.energy.total;
    const double slack = 1e-14 * std::max(1.0, std::abs(e_old));
    int halvings = 0;
    bool accepted = false;
    while (!accepted) {
      FieldState trial = renormalize(descent_step(ham, cur, omega, tau, config.semi_implicit), M);
      auto ev = ham.evaluate(trial);
      if (trial.all_finite() && ev.energy.total <= e_old + slack) {
        cur = Iterate{std::move(trial), std::move(ev)};
        accepted = true;
      } else if (++halvings > config.max_halvings) {
        break;
      } else {
        tau *= 0.5;
      }
    }
    if (!accepted) {
      res.status = SolveStatus::step_collapse;
      break;
    }
    ++iter;
    omega = omega_from(cur.ev);
    residual = residual_from(ham, cur, omega);
    if (trace) trace->push_back(trace_entry(iter, cur, params.s, residual));
  }

  fix_gauge(cur.u);
  res.field = std::move(cur.u);
  res.omega = omega;
  res.energy = cur.ev.energy;
  res.residual = residual;
  res.iters = iter;
  res.converged = res.status == SolveStatus::converged;
  res.final_step = tau;
  std::ostringstream diag;
  diag << to_string(res.status) << " after " << iter << " iterations, residual " << residual << " (tol "
       << config.residual_tol << "), step " << tau;
  if (res.status == SolveStatus::step_collapse)
    diag << "; energy kept increasing after " << config.max_halvings << " step halvings";
  res.diagnostic = diag.str();
  return res;
}

GroundStateResult solve_ground_state(const ModelParams& params, const GridSpec& grid, const GroundStateConfig& config) {
  const Hamiltonian ham(params, make_kernel(grid, params));
  return solve_ground_state(ham, config);
}

std::vector<TraceEntry> minimizing_sequence_trace(const ModelParams& params, const GridSpec& grid,
                                                  const GroundStateConfig& config) {
  const Hamiltonian ham(params, make_kernel(grid, params));
  std::vector<TraceEntry> trace;
  solve_ground_state(ham, config, &trace);
  return trace;
}

}  // namespace fhlab
