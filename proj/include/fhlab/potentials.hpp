#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fhlab/grid.hpp"

namespace fhlab {

enum class PotentialKind { zero, harmonic, anisotropic_quadratic, even_polynomial };

/// Confining potential V plus additive shift C.
///
/// - zero:                  V = 0
/// - harmonic:              V = |x|^2
/// - anisotropic_quadratic: V = sum_d weights[d] x_d^2
/// - even_polynomial:       V = sum_j coefficients[j] |x|^{2j}
///
/// `lower_bound` is the declared c1: sampling fails if min(V + C) < c1.
/// The default 0 only demands non-negativity (V = |x|^2 touches 0 at the
/// origin sample).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::harmonic;
  std::vector<double> weights;
  std::vector<double> coefficients;
  double shift = 0.0;
  double lower_bound = 0.0;

  static PotentialSpec zero(double shift = 0.0);
  static PotentialSpec harmonic(double shift = 0.0);
  static PotentialSpec anisotropic(std::vector<double> weights, double shift = 0.0);
  static PotentialSpec polynomial(std::vector<double> coefficients, double shift = 0.0);

  /// V(x) + C at a point given |x|^2 and the coordinates.
  double evaluate(std::span<const double> x) const;
  /// True for every kind except `zero`.
  bool confining() const;
  PotentialSpec shifted(double extra) const;
  std::string describe() const;
  /// Structural checks (weights length/positivity, leading coefficient > 0).
  void validate(int dim) const;
};

std::string to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(const std::string& name);

class PotentialError : public std::invalid_argument {
 public:
  PotentialError(const std::string& what, double minimum)
      : std::invalid_argument(what), minimum_(minimum) {}
  double minimum() const { return minimum_; }

 private:
  double minimum_;
};

/// V(x) + C on the grid. Throws PotentialError carrying the offending
/// minimum if it drops below spec.lower_bound.
std::vector<double> sample_potential_values(const GridSpec& grid, const PotentialSpec& spec);

/// sample_potential_values as a (real-valued) field.
FieldState sample_potential(const GridSpec& grid, const PotentialSpec& spec);

}  // namespace fhlab
