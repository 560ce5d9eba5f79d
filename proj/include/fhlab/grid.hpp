#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fhlab {

using Complex = std::complex<double>;

/// Thrown when two objects that must share a discretization do not.
class GridMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Periodic box [-L, L)^N sampled with n points per axis.
///
/// Grid point j along an axis sits at x_j = -L + j h, so the origin is the
/// sample with index n/2. Wavenumbers follow the usual transform ordering:
/// index j carries k_j = (pi/L) m_j with m_j = j for j < n/2 and j - n
/// otherwise.
class GridSpec {
 public:
  GridSpec(int dim, double half_width, int points_per_axis);

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  int points_per_axis() const { return n_; }
  double spacing() const { return 2.0 * half_width_ / n_; }

  /// n^N
  std::size_t size() const { return size_; }
  /// h^N, the quadrature weight of one cell.
  double cell_volume() const;

  double coordinate(int index) const { return -half_width_ + index * spacing(); }
  int mode_number(int index) const { return index < n_ / 2 ? index : index - n_; }
  double wavenumber(int index) const;

  /// Per-axis indices of flat (row-major) sample i. Only the first dim()
  /// entries are meaningful.
  std::array<int, 3> unflatten(std::size_t flat) const;
  std::size_t flatten(const std::array<int, 3>& idx) const;

  /// |x|^2 at flat index.
  double radius_sq(std::size_t flat) const;
  /// |k|^2 at flat index.
  double wavenumber_sq(std::size_t flat) const;

  bool operator==(const GridSpec& other) const;
  bool operator!=(const GridSpec& other) const { return !(*this == other); }

  std::string describe() const;

 private:
  int dim_;
  double half_width_;
  int n_;
  std::size_t size_;
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what);

/// Complex samples of a field on a grid, row-major over axes.
struct FieldState {
  GridSpec grid;
  std::vector<Complex> values;

  explicit FieldState(const GridSpec& g) : grid(g), values(g.size()) {}
  FieldState(const GridSpec& g, std::vector<Complex> v);

  std::size_t size() const { return values.size(); }
  bool all_finite() const;
  /// Throws std::invalid_argument when the length or finiteness invariant fails.
  void validate() const;
};

/// Transform coefficients in transform ordering (unnormalized forward DFT
/// over sample indices).
struct SpectralField {
  GridSpec grid;
  std::vector<Complex> coeffs;

  explicit SpectralField(const GridSpec& g) : grid(g), coeffs(g.size()) {}
};

/// Field whose samples are f(x) for the given function of position.
template <class F>
FieldState sample_field(const GridSpec& grid, F&& f) {
  FieldState out(grid);
  std::array<double, 3> x{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto idx = grid.unflatten(i);
    for (int d = 0; d < grid.dim(); ++d) x[d] = grid.coordinate(idx[d]);
    out.values[i] = f(x);
  }
  return out;
}

}  // namespace fhlab
