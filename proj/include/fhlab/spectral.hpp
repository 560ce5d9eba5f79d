#pragma once

#include <span>
#include <vector>

#include "fhlab/grid.hpp"

namespace fhlab {

/// Unnormalized forward DFT over sample indices. A plane wave e^{i k x}
/// lands in exactly one coefficient.
SpectralField forward_transform(const FieldState& field);
/// Inverse of forward_transform (carries the 1/n^N factor).
FieldState inverse_transform(const SpectralField& spectrum);

// Raw-buffer forms. `in` and `out` may alias. Safe to call concurrently.
void fft_forward(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);
void fft_inverse(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);

/// (|k|^2 + m^2)^s for every mode, in transform ordering. s = 0 yields 1
/// everywhere, including the zero mode with m = 0.
std::vector<double> fractional_symbol(const GridSpec& grid, double s, double m);

/// F^{-1}[(|k|^2+m^2)^s F[field]]. Rejects s <= 0 and m < 0; warns when
/// s >= N/2.
FieldState apply_fractional(const FieldState& field, double s, double m);

/// Multiplies each mode by symbol[k] and transforms back.
FieldState apply_symbol(const FieldState& field, std::span<const double> symbol);

/// Regularized Riesz kernel |x|^{-gamma} on the periodic grid.
///
/// Samples are indexed by displacement (same layout as a field): the
/// displacement index j along an axis stands for (j h) folded into [-L, L).
/// The origin sample holds the cell average of |x|^{-gamma} over the
/// origin cell. `spectral_samples` holds h^N times the transform of the
/// samples, so that inverse(spectral * forward(f)) is h^N sum_y K(x-y) f(y).
struct HartreeKernel {
  GridSpec grid;
  double gamma;
  double weight;
  bool dealias;
  std::vector<double> samples;
  std::vector<double> spectral_samples;

  double origin_value() const;
};

/// (1/h^N) * integral of |x|^{-gamma} over [-h/2, h/2]^N, for gamma < N.
double origin_cell_average(int dim, double spacing, double gamma);

/// Builds the kernel. `weight` scales the whole kernel (0 switches the
/// nonlinearity off); `dealias` applies the 2/3 rule to densities before
/// convolving. Rejects gamma <= 0 and gamma >= N.
HartreeKernel build_hartree_kernel(const GridSpec& grid, double gamma, double weight = 1.0,
                                   bool dealias = false);

/// W * |u|^2 sampled on the grid (imaginary parts dropped).
FieldState hartree_convolve(const FieldState& field, const HartreeKernel& kernel);

/// Same as hartree_convolve but returns the real samples directly.
std::vector<double> hartree_potential(const FieldState& field, const HartreeKernel& kernel);

/// Convolution of the kernel with an arbitrary real density.
std::vector<double> convolve_density(std::span<const double> density, const HartreeKernel& kernel);

/// Emits a warning on stderr the first time `key` is seen.
void warn_once(const std::string& key, const std::string& message);

}  // namespace fhlab
