#pragma once

#include <vector>

#include "fhlab/grid.hpp"
#include "fhlab/potentials.hpp"
#include "fhlab/spectral.hpp"

namespace fhlab {

/// Parameters of i u_t = (-Delta+m^2)^s u + V u - (|x|^{-gamma} * |u|^2) u.
struct ModelParams {
  double s = 1.0;
  double m = 0.0;
  double gamma = 0.5;
  PotentialSpec potential;
  double mass_target = 1.0;
  /// Multiplies the Hartree kernel; 0 gives the linear problem.
  double hartree_weight = 1.0;

  /// gamma < 2s: energy bounded below on the mass sphere.
  bool subcritical() const { return gamma < 2.0 * s; }
  /// Rejects s <= 0, m < 0, gamma outside (0, min(4s, N)), mass_target <= 0.
  /// s >= N/2 only warns.
  void validate(int dim) const;
};

struct EnergyBreakdown {
  double kinetic = 0.0;    // 1/2 <(-Delta+m^2)^s u, u>
  double potential = 0.0;  // 1/2 int V |u|^2
  double hartree = 0.0;    // 1/4 int (W*|u|^2) |u|^2
  double total = 0.0;      // kinetic + potential - hartree

  double sigma_norm_sq() const { return 2.0 * (kinetic + potential); }
};

/// The Sigma^s quadratic form on one grid: (|k|^2+m^2)^s in Fourier space
/// plus V in real space.
class SigmaForm {
 public:
  SigmaForm(const GridSpec& grid, const ModelParams& params);

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& potential() const { return potential_; }
  const std::vector<double>& symbol() const { return symbol_; }

  /// <u, v>_{Sigma^s}, conjugate-linear in v.
  Complex inner(const FieldState& u, const FieldState& v) const;
  double norm_sq(const FieldState& u) const;

 private:
  GridSpec grid_;
  std::vector<double> potential_;
  std::vector<double> symbol_;
};

/// Kernel that matches params on the given grid.
HartreeKernel make_kernel(const GridSpec& grid, const ModelParams& params, bool dealias = false);

/// Discrete operator H = (-Delta+m^2)^s + V - W*|u|^2 with its samples
/// cached. Immutable after construction; share freely between threads.
class Hamiltonian {
 public:
  Hamiltonian(const ModelParams& params, const HartreeKernel& kernel);

  const GridSpec& grid() const { return kernel_.grid; }
  const ModelParams& params() const { return params_; }
  const HartreeKernel& kernel() const { return kernel_; }
  const std::vector<double>& potential() const { return form_.potential(); }
  /// (|k|^2+m^2)^s per mode.
  const std::vector<double>& symbol() const { return form_.symbol(); }
  const SigmaForm& form() const { return form_; }

  /// Everything needed for energy, gradient and multiplier of one field.
  struct Evaluation {
    std::vector<Complex> kinetic_applied;  // (-Delta+m^2)^s u
    std::vector<double> mean_field;        // W * |u|^2
    EnergyBreakdown energy;
    double mass = 0.0;
  };
  Evaluation evaluate(const FieldState& u) const;

  EnergyBreakdown energy(const FieldState& u) const { return evaluate(u).energy; }
  /// L^2 gradient (-Delta+m^2)^s u + V u - (W*|u|^2) u.
  FieldState gradient(const FieldState& u, const Evaluation& eval) const;
  FieldState gradient(const FieldState& u) const { return gradient(u, evaluate(u)); }

  Complex sigma_inner(const FieldState& u, const FieldState& v) const { return form_.inner(u, v); }
  double sigma_norm_sq(const FieldState& u) const { return form_.norm_sq(u); }

 private:
  ModelParams params_;
  HartreeKernel kernel_;
  SigmaForm form_;
};

/// h^N sum |u|^2
double mass(const FieldState& field);
/// h^N sum conj(v) u
Complex l2_inner(const FieldState& u, const FieldState& v);
/// Sum over modes of |k|^{2s} |u_k|^2, weighted so that s = 0 gives mass.
double hs_seminorm_sq(const FieldState& field, double s);
/// <(-Delta+m^2)^s u, u> + int V |u|^2
double sigma_norm_sq(const FieldState& field, const ModelParams& params);
EnergyBreakdown energy(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel);
FieldState energy_gradient(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel);

/// 4*hartree / (|u|_{H^s}^{gamma/s} * mass^{(4s-gamma)/(2s)}). Rejects zero fields.
double gn_ratio(const FieldState& field, const ModelParams& params, const HartreeKernel& kernel);

struct HardyResult {
  double sup = 0.0;             // max_x int |u(y)|^2 / |x-y|^{2s} dy
  double hs_seminorm_sq = 0.0;  // |u|^2_{H^s}
  double ratio = 0.0;           // sup / hs_seminorm_sq (0 for the zero field)
};
/// Rejects 2s >= N.
HardyResult hardy_sup(const FieldState& field, double s);

/// min over X > 0 of X/2 - c X^p (0 < p < 1); the floor of the energy on
/// the mass sphere once the Hartree term is bounded by c X^p.
double energy_floor(double c, double p);
/// Largest Y with Y/2 - c Y^p <= energy: a priori bound on the Sigma^s norm
/// squared along any sequence with energy at most `energy`.
double sigma_norm_sq_bound(double energy, double c, double p);

}  // namespace fhlab
