#include "fhlab/random_field.hpp"

#include <cmath>

#include "fhlab/spectral.hpp"

namespace fhlab {

FieldState random_smooth_field(const GridSpec& grid, Rng& rng, int max_mode, double envelope_width) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField spec(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    bool inside = true;
    double m2 = 0.0;
    for (int d = 0; d < grid.dim(); ++d) {
      const int m = grid.mode_number(idx[d]);
      inside = inside && std::abs(m) <= max_mode;
      m2 += double(m) * m;
    }
    if (!inside) continue;
    // two statements: argument evaluation order is unspecified
    const double re = normal(rng), im = normal(rng);
    spec.coeffs[i] = Complex(re, im) / (1.0 + m2);
  }
  FieldState out = inverse_transform(spec);
  const double w2 = 2.0 * envelope_width * envelope_width;
  for (std::size_t i = 0; i < grid.size(); ++i) out.values[i] *= std::exp(-grid.radius_sq(i) / w2);
  return out;
}

FieldState random_bump_field(const GridSpec& grid, Rng& rng, int bumps, double min_width, double max_width,
                             double spread) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  FieldState out(grid);
  for (int b = 0; b < bumps; ++b) {
    const double width = min_width + (max_width - min_width) * unit(rng);
    std::array<double, 3> centre{0.0, 0.0, 0.0};
    for (int d = 0; d < grid.dim(); ++d) centre[d] = spread * (2.0 * unit(rng) - 1.0);
    const double re = normal(rng), im = normal(rng);
    const Complex amp(re, im);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto idx = grid.unflatten(i);
      double r2 = 0.0;
      for (int d = 0; d < grid.dim(); ++d) {
        const double dx = grid.coordinate(idx[d]) - centre[d];
        r2 += dx * dx;
      }
      out.values[i] += amp * std::exp(-r2 / (2.0 * width * width));
    }
  }
  return out;
}

}  // namespace fhlab
