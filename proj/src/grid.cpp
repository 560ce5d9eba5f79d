#include "fhlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace fhlab {

GridSpec::GridSpec(int dim, double half_width, int points_per_axis)
    : dim_(dim), half_width_(half_width), n_(points_per_axis), size_(1) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
  if (!(half_width > 0.0) || !std::isfinite(half_width))
    throw std::invalid_argument("grid: half_width must be positive and finite");
  if (points_per_axis < 8 || (points_per_axis & (points_per_axis - 1)) != 0)
    throw std::invalid_argument("grid: points_per_axis must be a power of two >= 8");
  for (int d = 0; d < dim; ++d) size_ *= static_cast<std::size_t>(n_);
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim_); }

double GridSpec::wavenumber(int index) const {
  return std::numbers::pi / half_width_ * mode_number(index);
}

std::array<int, 3> GridSpec::unflatten(std::size_t flat) const {
  std::array<int, 3> idx{0, 0, 0};
  for (int d = dim_ - 1; d >= 0; --d) {
    idx[d] = static_cast<int>(flat % n_);
    flat /= n_;
  }
  return idx;
}

std::size_t GridSpec::flatten(const std::array<int, 3>& idx) const {
  std::size_t flat = 0;
  for (int d = 0; d < dim_; ++d) flat = flat * n_ + static_cast<std::size_t>(idx[d]);
  return flat;
}

double GridSpec::radius_sq(std::size_t flat) const {
  const auto idx = unflatten(flat);
  double r2 = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double x = coordinate(idx[d]);
    r2 += x * x;
  }
  return r2;
}

double GridSpec::wavenumber_sq(std::size_t flat) const {
  const auto idx = unflatten(flat);
  double k2 = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double k = wavenumber(idx[d]);
    k2 += k * k;
  }
  return k2;
}

bool GridSpec::operator==(const GridSpec& other) const {
  return dim_ == other.dim_ && n_ == other.n_ && half_width_ == other.half_width_;
}

std::string GridSpec::describe() const {
  std::ostringstream os;
  os << "grid(dim=" << dim_ << ", L=" << half_width_ << ", n=" << n_ << ")";
  return os.str();
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* what) {
  if (a != b)
    throw GridMismatch(std::string(what) + ": " + a.describe() + " vs " + b.describe());
}

FieldState::FieldState(const GridSpec& g, std::vector<Complex> v) : grid(g), values(std::move(v)) {
  if (values.size() != grid.size())
    throw std::invalid_argument("field: sample count does not match grid");
}

bool FieldState::all_finite() const {
  for (const auto& z : values)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

void FieldState::validate() const {
  if (values.size() != grid.size())
    throw std::invalid_argument("field: sample count does not match grid");
  if (!all_finite()) throw std::invalid_argument("field: non-finite sample");
}

}  // namespace fhlab
