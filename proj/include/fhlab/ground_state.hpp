#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fhlab/functionals.hpp"

namespace fhlab {

enum class InitKind { gaussian, random_seeded, from_file };

struct GroundStateConfig {
  double step_size = 0.02;
  int max_iters = 20000;
  double residual_tol = 1e-9;
  InitKind init = InitKind::gaussian;
  std::uint64_t seed = 0;
  std::filesystem::path init_file;
  bool semi_implicit = true;
  /// Consecutive step halvings tolerated before giving up.
  int max_halvings = 20;

  void validate() const;
};

enum class SolveStatus { converged, max_iters, step_collapse };
std::string to_string(SolveStatus status);
std::string to_string(InitKind kind);
InitKind init_kind_from_string(const std::string& name);

struct GroundStateResult {
  FieldState field;
  double omega = 0.0;
  EnergyBreakdown energy;
  double residual = 0.0;
  int iters = 0;
  bool converged = false;
  SolveStatus status = SolveStatus::max_iters;
  double final_step = 0.0;
  std::string diagnostic;
};

/// One accepted iterate of the descent.
struct TraceEntry {
  int iter = 0;
  double energy = 0.0;
  double sigma_norm_sq = 0.0;
  double mass = 0.0;
  double hs_seminorm_sq = 0.0;
  double hartree = 0.0;
  double residual = 0.0;
};

/// (4 hartree - |u|^2_{Sigma^s}) / mass: the multiplier that makes the
/// Euler-Lagrange equation paired with u vanish.
double lagrange_omega(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel);

/// |grad E(u) + omega u|_{L^2} / |u|_{Sigma^s}
double el_residual(const FieldState& field, double omega, const ModelParams& params,
                   const HartreeKernel& kernel);

/// Scales the field so that its mass equals target. Rejects the zero field.
FieldState renormalize(const FieldState& field, double target);

/// Rotates the global phase so the sample of largest modulus is real and
/// positive (first such sample on ties).
void fix_gauge(FieldState& field);

/// Mass-M starting field for the descent.
FieldState initial_guess(const GridSpec& grid, const ModelParams& params, const GroundStateConfig& config);

/// Normalized gradient flow for min E on |u|_2^2 = M. Never throws on
/// non-convergence: see result.status. `trace`, when given, receives one
/// entry per accepted iterate (including the initial one).
GroundStateResult solve_ground_state(const Hamiltonian& ham, const GroundStateConfig& config,
                                     std::vector<TraceEntry>* trace = nullptr);
GroundStateResult solve_ground_state(const Hamiltonian& ham, const GroundStateConfig& config,
                                     const FieldState& initial, std::vector<TraceEntry>* trace = nullptr);
GroundStateResult solve_ground_state(const ModelParams& params, const GridSpec& grid,
                                     const GroundStateConfig& config);

std::vector<TraceEntry> minimizing_sequence_trace(const ModelParams& params, const GridSpec& grid,
                                                  const GroundStateConfig& config);

}  // namespace fhlab
