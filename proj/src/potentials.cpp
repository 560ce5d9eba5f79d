#include "fhlab/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace fhlab {

PotentialSpec PotentialSpec::zero(double shift) {
  PotentialSpec p;
  p.kind = PotentialKind::zero;
  p.shift = shift;
  return p;
}

PotentialSpec PotentialSpec::harmonic(double shift) {
  PotentialSpec p;
  p.kind = PotentialKind::harmonic;
  p.shift = shift;
  return p;
}

PotentialSpec PotentialSpec::anisotropic(std::vector<double> weights, double shift) {
  PotentialSpec p;
  p.kind = PotentialKind::anisotropic_quadratic;
  p.weights = std::move(weights);
  p.shift = shift;
  return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> coefficients, double shift) {
  PotentialSpec p;
  p.kind = PotentialKind::even_polynomial;
  p.coefficients = std::move(coefficients);
  p.shift = shift;
  return p;
}

double PotentialSpec::evaluate(std::span<const double> x) const {
  double r2 = 0.0;
  for (double xi : x) r2 += xi * xi;
  double v = 0.0;
  switch (kind) {
    case PotentialKind::zero:
      break;
    case PotentialKind::harmonic:
      v = r2;
      break;
    case PotentialKind::anisotropic_quadratic:
      for (std::size_t d = 0; d < x.size(); ++d) v += weights.at(d) * x[d] * x[d];
      break;
    case PotentialKind::even_polynomial: {
      // Horner in r^2
      for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * r2 + *it;
      break;
    }
  }
  return v + shift;
}

bool PotentialSpec::confining() const { return kind != PotentialKind::zero; }

PotentialSpec PotentialSpec::shifted(double extra) const {
  PotentialSpec p = *this;
  p.shift += extra;
  return p;
}

void PotentialSpec::validate(int dim) const {
  if (!std::isfinite(shift)) throw std::invalid_argument("potential: shift must be finite");
  if (kind == PotentialKind::anisotropic_quadratic) {
    if (static_cast<int>(weights.size()) != dim)
      throw std::invalid_argument("potential: anisotropic_quadratic needs one weight per axis");
    for (double w : weights)
      if (!(w > 0.0)) throw std::invalid_argument("potential: anisotropic weights must be positive");
  }
  if (kind == PotentialKind::even_polynomial) {
    if (coefficients.size() < 2)
      throw std::invalid_argument("potential: even_polynomial needs degree >= 2 in |x|");
    if (!(coefficients.back() > 0.0))
      throw std::invalid_argument("potential: even_polynomial leading coefficient must be positive");
  }
}

std::string PotentialSpec::describe() const {
  std::ostringstream os;
  os << to_string(kind);
  auto list = [&os](const std::vector<double>& v) {
    os << '[';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ']';
  };
  if (kind == PotentialKind::anisotropic_quadratic) list(weights);
  if (kind == PotentialKind::even_polynomial) list(coefficients);
  os << " shift=" << shift;
  return os.str();
}

std::string to_string(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::zero: return "zero";
    case PotentialKind::harmonic: return "harmonic";
    case PotentialKind::anisotropic_quadratic: return "anisotropic_quadratic";
    case PotentialKind::even_polynomial: return "even_polynomial";
  }
  return "unknown";
}

PotentialKind potential_kind_from_string(const std::string& name) {
  if (name == "zero") return PotentialKind::zero;
  if (name == "harmonic") return PotentialKind::harmonic;
  if (name == "anisotropic_quadratic") return PotentialKind::anisotropic_quadratic;
  if (name == "even_polynomial") return PotentialKind::even_polynomial;
  throw std::invalid_argument("unknown potential kind '" + name + "'");
}

std::vector<double> sample_potential_values(const GridSpec& grid, const PotentialSpec& spec) {
  spec.validate(grid.dim());
  std::vector<double> values(grid.size());
  std::array<double, 3> x{};
  double minimum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    for (int d = 0; d < grid.dim(); ++d) x[d] = grid.coordinate(idx[d]);
    values[i] = spec.evaluate(std::span<const double>(x.data(), grid.dim()));
    minimum = std::min(minimum, values[i]);
  }
  if (!(minimum >= spec.lower_bound)) {
    std::ostringstream os;
    os << "potential " << spec.describe() << " has minimum " << minimum
       << " on the grid, below the declared lower bound " << spec.lower_bound;
    throw PotentialError(os.str(), minimum);
  }
  return values;
}

FieldState sample_potential(const GridSpec& grid, const PotentialSpec& spec) {
  const auto v = sample_potential_values(grid, spec);
  FieldState out(grid);
  for (std::size_t i = 0; i < v.size(); ++i) out.values[i] = v[i];
  return out;
}

}  // namespace fhlab
