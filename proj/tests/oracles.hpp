#pragma once
// Independent reference computations used by the tests. Nothing here calls
// the transform, kernel or energy code of the library.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "fhlab/grid.hpp"
#include "fhlab/random_field.hpp"

namespace oracle {

using fhlab::Complex;
using fhlab::FieldState;
using fhlab::GridSpec;

// O(n^{2N}) transform with the same convention: sum_j u_j e^{-+2 pi i k.j/n}
inline std::vector<Complex> direct_dft(const GridSpec& g, const std::vector<Complex>& in, int sign = -1) {
  const int n = g.points_per_axis();
  std::vector<Complex> out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto kk = g.unflatten(k);
    Complex acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto jj = g.unflatten(j);
      long phase = 0;
      for (int d = 0; d < g.dim(); ++d) phase += static_cast<long>(kk[d]) * jj[d];
      phase %= n;
      const double a = sign * 2.0 * std::numbers::pi * static_cast<double>(phase) / n;
      acc += in[j] * Complex(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

// dense multiplier through the direct transform
inline std::vector<Complex> dense_multiplier(const GridSpec& g, const std::vector<Complex>& in, double s, double m) {
  auto c = direct_dft(g, in, -1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto kk = g.unflatten(k);
    double k2 = 0.0;
    for (int d = 0; d < g.dim(); ++d) k2 += g.wavenumber(kk[d]) * g.wavenumber(kk[d]);
    c[k] *= std::pow(k2 + m * m, s);
  }
  auto out = direct_dft(g, c, +1);
  for (auto& z : out) z /= static_cast<double>(g.size());
  return out;
}

// (1/h^N) * integral of |x|^{-gamma} over [-h/2, h/2]^N by nested tanh-sinh
// quadrature on the fundamental simplex 0 <= x_N <= ... <= x_1 <= h/2.
inline double cell_average_quadrature(int dim, double h, double gamma) {
  boost::math::quadrature::tanh_sinh<double> q;
  const double a = 0.5 * h;
  double integral = 0.0;
  if (dim == 1) {
    integral = 2.0 * q.integrate([&](double x) { return x > 0.0 ? std::pow(x, -gamma) : 0.0; }, 0.0, a);
  } else if (dim == 2) {
    integral = 8.0 * q.integrate(
                         [&](double x) {
                           if (x <= 0.0) return 0.0;
                           return q.integrate([&](double y) {
                             const double r2 = x * x + y * y;
                             return r2 > 0.0 ? std::pow(r2, -0.5 * gamma) : 0.0;
                           }, 0.0, x);
                         },
                         0.0, a);
  } else {
    integral = 48.0 * q.integrate(
                          [&](double x) {
                            if (x <= 0.0) return 0.0;
                            return q.integrate(
                                [&](double y) {
                                  if (y <= 0.0) return 0.0;
                                  return q.integrate(
                                      [&](double z) {
                                        const double r2 = x * x + y * y + z * z;
                                        return r2 > 0.0 ? std::pow(r2, -0.5 * gamma) : 0.0;
                                      },
                                      0.0, y);
                                },
                                0.0, x);
                          },
                          0.0, a);
  }
  return integral / std::pow(h, dim);
}

// minimum-image |x|^{-gamma} for a displacement given in cells
inline double kernel_value(const GridSpec& g, const std::array<int, 3>& cells, double gamma, double origin) {
  const int n = g.points_per_axis();
  double r2 = 0.0;
  bool at_origin = true;
  for (int d = 0; d < g.dim(); ++d) {
    int c = ((cells[d] % n) + n) % n;
    if (c >= n / 2) c -= n;
    at_origin = at_origin && c == 0;
    r2 += (c * g.spacing()) * (c * g.spacing());
  }
  return at_origin ? origin : std::pow(r2, -0.5 * gamma);
}

// h^N sum_y K(x - y) |u(y)|^2
inline std::vector<double> direct_convolution(const FieldState& u, double gamma, double origin, double weight = 1.0) {
  const GridSpec& g = u.grid;
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto xi = g.unflatten(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const auto yj = g.unflatten(j);
      const std::array<int, 3> diff{xi[0] - yj[0], xi[1] - yj[1], xi[2] - yj[2]};
      acc += kernel_value(g, diff, gamma, origin) * std::norm(u.values[j]);
    }
    out[i] = weight * g.cell_volume() * acc;
  }
  return out;
}

// |a - b| / |b| in the discrete l2 sense
inline double rel_l2(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

inline double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

inline double max_abs_diff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Central differences of a real functional E along each real and imaginary
// sample direction, divided by h^N: the L^2 gradient it implies.
inline std::vector<Complex> fd_gradient(const FieldState& u, const std::function<double(const FieldState&)>& E,
                                        double eps) {
  std::vector<Complex> g(u.size());
  FieldState w = u;
  const double vol = u.grid.cell_volume();
  for (std::size_t i = 0; i < u.size(); ++i) {
    double part[2];
    for (int c = 0; c < 2; ++c) {
      const Complex step = c == 0 ? Complex(eps, 0.0) : Complex(0.0, eps);
      w.values[i] = u.values[i] + step;
      const double ep = E(w);
      w.values[i] = u.values[i] - step;
      const double em = E(w);
      w.values[i] = u.values[i];
      part[c] = (ep - em) / (2.0 * eps * vol);
    }
    g[i] = Complex(part[0], part[1]);
  }
  return g;
}

// centred second difference Laplacian (periodic)
inline std::vector<Complex> fd_laplacian(const FieldState& u) {
  const GridSpec& g = u.grid;
  const int n = g.points_per_axis();
  const double h2 = g.spacing() * g.spacing();
  std::vector<Complex> out(g.size(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto idx = g.unflatten(i);
    for (int d = 0; d < g.dim(); ++d) {
      auto p = idx, m = idx;
      p[d] = (p[d] + 1) % n;
      m[d] = (m[d] + n - 1) % n;
      out[i] += (u.values[g.flatten(p)] - 2.0 * u.values[i] + u.values[g.flatten(m)]) / h2;
    }
  }
  return out;
}

inline FieldState random_field(const GridSpec& g, fhlab::Rng& rng) {
  std::normal_distribution<double> nd;
  FieldState u(g);
  for (auto& z : u.values) z = Complex(nd(rng), nd(rng));
  return u;
}

}  // namespace oracle
