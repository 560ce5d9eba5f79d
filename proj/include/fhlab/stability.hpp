#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhlab/dynamics.hpp"
#include "fhlab/ground_state.hpp"

namespace fhlab {

/// Phase-minimized Sigma^s distance to the orbit {e^{i theta} U}.
///
/// The optimal phase is theta* = arg <u, U>_{Sigma^s}, where the squared
/// distance equals |u|^2 + |U|^2 - 2 |<u, U>|. The returned value is the
/// norm of u - e^{i theta*} U evaluated directly, which avoids the
/// cancellation in the closed form when u is on the orbit.
double orbit_distance(const FieldState& u, const FieldState& reference, const SigmaForm& form);
double orbit_distance(const FieldState& u, const FieldState& reference, const ModelParams& params);

enum class PerturbationMode { random_seeded, single_mode, width_dilation };
std::string to_string(PerturbationMode mode);
PerturbationMode perturbation_mode_from_string(const std::string& name);

struct PerturbationSpec {
  /// Target orbit distance relative to |U|_{Sigma^s}.
  double delta = 1e-2;
  PerturbationMode mode = PerturbationMode::random_seeded;
  std::uint64_t seed = 0;
  /// single_mode: direction U(x) e^{i (pi/L) k_index x_1}.
  int k_index = 1;
  /// width_dilation: direction f^{N/2} U(f x) - U(x).
  double factor = 1.1;
  bool renormalize_mass = false;

  void validate() const;
};

class PerturbationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// f^{N/2} u(f x) by trigonometric interpolation along each axis.
FieldState dilate(const FieldState& field, double factor);

/// u0 = U + t phi_perp, where phi_perp is the chosen direction with its
/// complex Sigma^s projection on U removed and t = delta |U| / |phi_perp|,
/// so that orbit_distance(u0, U) = delta |U|_{Sigma^s} before optional mass
/// renormalization. A zero direction (dilation factor 1) returns U.
/// Throws PerturbationError if the direction lies in span{U, iU} or the
/// renormalized result leaves [0.5, 1.5] delta |U|.
FieldState perturb(const FieldState& ground, const PerturbationSpec& spec, const ModelParams& params);

class NotConvergedError : public std::runtime_error {
 public:
  NotConvergedError(const std::string& what, GroundStateResult result)
      : std::runtime_error(what), result_(std::move(result)) {}
  const GroundStateResult& result() const { return result_; }

 private:
  GroundStateResult result_;
};

struct StabilityReport {
  std::vector<double> times;
  std::vector<double> orbit_distance;
  std::vector<double> mass_trace;
  std::vector<double> energy_trace;
  double max_distance = 0.0;
  double initial_distance = 0.0;
  double ground_norm = 0.0;  // |U|_{Sigma^s}
  ModelParams params;
  std::optional<PerturbationSpec> perturbation;
  /// gamma < 2s and V confining: the orbital stability theorem applies.
  bool in_hypothesis = false;
  std::string hypothesis_note;
  std::optional<GroundStateResult> ground_state;
};

/// Ground state, optional perturbation (nullopt or delta = 0 evolves U
/// itself), then evolution with orbit distance sampled on the monitor
/// stride. Throws NotConvergedError before evolving if the ground state
/// solve fails.
StabilityReport run_stability_experiment(const ModelParams& params, const GridSpec& grid,
                                         const GroundStateConfig& gs_config,
                                         const std::optional<PerturbationSpec>& perturbation,
                                         const EvolveConfig& evolve_config, bool dealias = false);

/// Samples reused on the grid [-L/lambda, L/lambda)^N and multiplied by
/// `amplitude`: realizes x -> amplitude * u(lambda x).
FieldState grid_rescaled(const FieldState& field, double lambda, double amplitude);

struct ScalingReport {
  double lambda = 1.0;
  /// mass(lambda^{N/2} u(lambda x)) / mass(u)
  double mass_ratio = 1.0;
  /// Ratios of the H^s and Hartree terms under the mass-invariant scaling,
  /// each divided by lambda^{2s}; only when 2s < N (kernel gamma = 2s).
  std::optional<double> mass_critical_kinetic;
  std::optional<double> mass_critical_hartree;
  /// E(lambda^{-(N-2s)/2} u(x/lambda)) / E(u) with gamma = 4s; only when 4s < N.
  std::optional<double> energy_critical_ratio;

  bool passed(double mass_tol = 1e-10, double ratio_tol = 1e-2) const;
};

/// Scaling identities for V = 0, m = 0. Rejects any other configuration.
ScalingReport scaling_checks(const FieldState& field, const ModelParams& params, double lambda = 2.0);

}  // namespace fhlab
