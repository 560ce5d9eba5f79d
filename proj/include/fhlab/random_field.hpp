#pragma once

#include <random>

#include "fhlab/grid.hpp"

namespace fhlab {

using Rng = std::mt19937_64;

/// Band-limited complex noise (modes with |m_d| <= max_mode, amplitudes
/// decaying like 1/(1+|m|^2)) under a Gaussian envelope of the given width.
FieldState random_smooth_field(const GridSpec& grid, Rng& rng, int max_mode = 4, double envelope_width = 1.0);

/// Sum of `bumps` Gaussians with random complex amplitude, width in
/// [min_width, max_width] and centre within `spread` of the origin.
FieldState random_bump_field(const GridSpec& grid, Rng& rng, int bumps, double min_width, double max_width,
                             double spread);

}  // namespace fhlab
