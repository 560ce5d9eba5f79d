#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "fhlab/functionals.hpp"

namespace fhlab {

struct EvolveConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int monitor_stride = 10;
  /// Integrate toward negative times (steps of -dt).
  bool reverse = false;

  /// round(t_final / dt); t_final = 0 means zero steps.
  long steps() const;
  /// Rejects dt <= 0, t_final < 0, stride < 1, or t_final/dt more than
  /// 1e-9 away from an integer.
  void validate() const;
};

struct ConservationTrace {
  std::vector<double> times;
  std::vector<double> mass_values;
  std::vector<double> energy_values;

  double max_relative_mass_drift() const;
  double max_relative_energy_drift() const;
};

/// Raised when a non-finite sample appears mid-run.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, long step) : std::runtime_error(what), step_(step) {}
  long step() const { return step_; }

 private:
  long step_;
};

/// Strang splitting for i u_t = (-Delta+m^2)^s u + V u - (W*|u|^2) u:
/// half phase rotation by V - W*|u|^2, exact linear step in Fourier space,
/// half phase rotation with the updated density. dt may be negative.
class StrangStepper {
 public:
  explicit StrangStepper(const Hamiltonian& ham);

  void step(FieldState& u, double dt) const;

 private:
  void phase_half_step(FieldState& u, double half_dt) const;

  const Hamiltonian& ham_;
};

FieldState strang_step(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel, double dt);

struct EvolveResult {
  FieldState final_state;
  ConservationTrace trace;
};

/// Called at every monitor point with (step index, time, state).
using MonitorHook = std::function<void(long, double, const FieldState&)>;

/// Repeated Strang steps; monitors at step 0, every monitor_stride steps
/// and at the final step. Throws BlowUpError on a non-finite state.
EvolveResult evolve(const FieldState& field, const Hamiltonian& ham, const EvolveConfig& config,
                    const MonitorHook& hook = {});
EvolveResult evolve(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel,
                    const EvolveConfig& config);

}  // namespace fhlab
