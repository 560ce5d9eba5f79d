#include "fhlab/dynamics.hpp"

#include <cmath>

namespace fhlab {
namespace {

double max_relative_drift(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const double ref = values.front();
  double worst = 0.0;
  for (double v : values) worst = std::max(worst, std::abs(v - ref));
  return ref != 0.0 ? worst / std::abs(ref) : worst;
}

}  // namespace

long EvolveConfig::steps() const { return std::lround(t_final / dt); }

void EvolveConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("evolve: dt must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("evolve: t_final must be non-negative");
  if (monitor_stride < 1) throw std::invalid_argument("evolve: monitor_stride must be >= 1");
  const double ratio = t_final / dt;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw std::invalid_argument("evolve: t_final/dt must be an integer");
}

double ConservationTrace::max_relative_mass_drift() const { return max_relative_drift(mass_values); }
double ConservationTrace::max_relative_energy_drift() const { return max_relative_drift(energy_values); }

StrangStepper::StrangStepper(const Hamiltonian& ham) : ham_(ham) {}

void StrangStepper::phase_half_step(FieldState& u, double half_dt) const {
  // |u| is invariant along this substep, so the rotation is exact.
  const auto mean_field = hartree_potential(u, ham_.kernel());
  const auto& v = ham_.potential();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double phase = -half_dt * (v[i] - mean_field[i]);
    u.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
}

void StrangStepper::step(FieldState& u, double dt) const {
  require_same_grid(u.grid, ham_.grid(), "strang_step");
  phase_half_step(u, 0.5 * dt);
  fft_forward(u.grid, u.values, u.values);
  const auto& symbol = ham_.symbol();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double phase = -dt * symbol[i];
    u.values[i] *= Complex(std::cos(phase), std::sin(phase));
  }
  fft_inverse(u.grid, u.values, u.values);
  phase_half_step(u, 0.5 * dt);
}

FieldState strang_step(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel, double dt) {
  field.validate();
  const Hamiltonian ham(params, kernel);
  FieldState u = field;
  StrangStepper(ham).step(u, dt);
  return u;
}

EvolveResult evolve(const FieldState& field, const Hamiltonian& ham, const EvolveConfig& config,
                    const MonitorHook& hook) {
  config.validate();
  field.validate();
  require_same_grid(field.grid, ham.grid(), "evolve");
  const StrangStepper stepper(ham);
  const long steps = config.steps();
  const double dt = config.reverse ? -config.dt : config.dt;

  EvolveResult out{field, {}};
  FieldState& u = out.final_state;
  auto monitor = [&](long k) {
    const double t = k * dt;
    const auto ev = ham.evaluate(u);
    out.trace.times.push_back(t);
    out.trace.mass_values.push_back(ev.mass);
    out.trace.energy_values.push_back(ev.energy.total);
    if (hook) hook(k, t, u);
  };

  monitor(0);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(u, dt);
    if (k % config.monitor_stride == 0 || k == steps) {
      if (!u.all_finite())
        throw BlowUpError("evolve: non-finite field at step " + std::to_string(k) + " (t=" +
                              std::to_string(k * dt) + ")",
                          k);
      monitor(k);
    }
  }
  if (!u.all_finite()) throw BlowUpError("evolve: non-finite field at final step", steps);
  return out;
}

EvolveResult evolve(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel,
                    const EvolveConfig& config) {
  const Hamiltonian ham(params, kernel);
  return evolve(field, ham, config);
}

}  // namespace fhlab
