#include "fhlab/stability.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fhlab/random_field.hpp"

namespace fhlab {

double orbit_distance(const FieldState& u, const FieldState& reference, const SigmaForm& form) {
  require_same_grid(u.grid, reference.grid, "orbit_distance");
  const Complex overlap = form.inner(u, reference);
  const double a = std::abs(overlap);
  const Complex rot = a > 0.0 ? overlap / a : Complex(1.0, 0.0);
  FieldState diff(u.grid);
  for (std::size_t i = 0; i < u.size(); ++i) diff.values[i] = u.values[i] - rot * reference.values[i];
  return std::sqrt(std::max(0.0, form.norm_sq(diff)));
}

double orbit_distance(const FieldState& u, const FieldState& reference, const ModelParams& params) {
  return orbit_distance(u, reference, SigmaForm(u.grid, params));
}

std::string to_string(PerturbationMode mode) {
  switch (mode) {
    case PerturbationMode::random_seeded: return "random";
    case PerturbationMode::single_mode: return "single_mode";
    case PerturbationMode::width_dilation: return "width_dilation";
  }
  return "unknown";
}

PerturbationMode perturbation_mode_from_string(const std::string& name) {
  if (name == "random") return PerturbationMode::random_seeded;
  if (name == "single_mode") return PerturbationMode::single_mode;
  if (name == "width_dilation") return PerturbationMode::width_dilation;
  throw std::invalid_argument("unknown perturbation mode '" + name +
                              "' (expected random, single_mode or width_dilation)");
}

void PerturbationSpec::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("perturbation: delta must be positive");
  if (mode == PerturbationMode::width_dilation && !(factor > 0.0))
    throw std::invalid_argument("perturbation: dilation factor must be positive");
}

FieldState dilate(const FieldState& field, double factor) {
  if (!(factor > 0.0)) throw std::invalid_argument("dilate: factor must be positive");
  const GridSpec& g = field.grid;
  const int n = g.points_per_axis();
  const double L = g.half_width();
  const GridSpec line_grid(1, L, n);

  // e^{i k_m (f x_j + L)} for every (j, m), Nyquist mode split as a cosine.
  std::vector<Complex> basis(static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    const double y = factor * g.coordinate(j) + L;
    // points mapped outside the box see the (decayed) exterior, not the periodic image
    if (y < 0.0 || y >= 2.0 * L) continue;
    for (int m = 0; m < n; ++m) {
      const double k = line_grid.wavenumber(m);
      basis[static_cast<std::size_t>(j) * n + m] =
          m == n / 2 ? Complex(std::cos(k * y), 0.0) : Complex(std::cos(k * y), std::sin(k * y));
    }
  }

  FieldState out = field;
  std::vector<Complex> line(n), coeffs(n);
  const std::size_t total = g.size();
  for (int axis = 0; axis < g.dim(); ++axis) {
    std::size_t stride = 1;
    for (int d = axis + 1; d < g.dim(); ++d) stride *= n;
    for (std::size_t start = 0; start < total; ++start) {
      if ((start / stride) % n != 0) continue;
      for (int j = 0; j < n; ++j) line[j] = out.values[start + j * stride];
      fft_forward(line_grid, line, coeffs);
      for (int j = 0; j < n; ++j) {
        Complex acc = 0.0;
        for (int m = 0; m < n; ++m) acc += coeffs[m] * basis[static_cast<std::size_t>(j) * n + m];
        out.values[start + j * stride] = acc * (std::sqrt(factor) / n);
      }
    }
  }
  return out;
}

FieldState perturb(const FieldState& ground, const PerturbationSpec& spec, const ModelParams& params) {
  spec.validate();
  ground.validate();
  const GridSpec& g = ground.grid;
  const SigmaForm form(g, params);

  FieldState direction(g);
  switch (spec.mode) {
    case PerturbationMode::random_seeded: {
      Rng rng(spec.seed);
      direction = random_smooth_field(g, rng, 4, 1.0);
      break;
    }
    case PerturbationMode::single_mode: {
      const double k = std::numbers::pi / g.half_width() * spec.k_index;
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g.coordinate(g.unflatten(i)[0]);
        direction.values[i] = ground.values[i] * Complex(std::cos(k * x), std::sin(k * x));
      }
      break;
    }
    case PerturbationMode::width_dilation: {
      direction = dilate(ground, spec.factor);
      for (std::size_t i = 0; i < g.size(); ++i) direction.values[i] -= ground.values[i];
      break;
    }
  }

  const double ground_sq = form.norm_sq(ground);
  if (!(ground_sq > 0.0)) throw PerturbationError("perturb: reference field has zero Sigma^s norm");
  const double dir_sq = form.norm_sq(direction);
  if (spec.mode == PerturbationMode::width_dilation && dir_sq <= 1e-28 * ground_sq) return ground;

  const Complex proj = form.inner(direction, ground) / ground_sq;
  for (std::size_t i = 0; i < g.size(); ++i) direction.values[i] -= proj * ground.values[i];
  const double perp_sq = form.norm_sq(direction);
  if (!(perp_sq > 1e-20 * std::max(dir_sq, ground_sq)))
    throw PerturbationError("perturb: direction " + to_string(spec.mode) +
                            " has no component transverse to the phase orbit");

  const double ground_norm = std::sqrt(ground_sq);
  const double t = spec.delta * ground_norm / std::sqrt(perp_sq);
  FieldState u0(g);
  for (std::size_t i = 0; i < g.size(); ++i) u0.values[i] = ground.values[i] + t * direction.values[i];

  if (spec.renormalize_mass) {
    u0 = renormalize(u0, mass(ground));
    const double d = orbit_distance(u0, ground, form);
    const double target = spec.delta * ground_norm;
    if (d < 0.5 * target || d > 1.5 * target) {
      std::ostringstream os;
      os << "perturb: mass renormalization moved the orbit distance to " << d << ", outside [0.5, 1.5] x "
         << target;
      throw PerturbationError(os.str());
    }
  }
  return u0;
}

StabilityReport run_stability_experiment(const ModelParams& params, const GridSpec& grid,
                                         const GroundStateConfig& gs_config,
                                         const std::optional<PerturbationSpec>& perturbation,
                                         const EvolveConfig& evolve_config, bool dealias) {
  evolve_config.validate();
  const Hamiltonian ham(params, make_kernel(grid, params, dealias));

  StabilityReport report;
  report.params = params;
  report.perturbation = perturbation;
  report.in_hypothesis = params.subcritical() && params.potential.confining();
  if (!params.subcritical())
    report.hypothesis_note = "outside theorem hypotheses: gamma >= 2s";
  else if (!params.potential.confining())
    report.hypothesis_note = "outside theorem hypotheses: V is not confining";

  auto gs = solve_ground_state(ham, gs_config);
  if (!gs.converged) {
    const std::string msg = "stability: ground state did not converge: " + gs.diagnostic;
    throw NotConvergedError(msg, std::move(gs));
  }
  const FieldState& U = gs.field;
  const SigmaForm& form = ham.form();
  report.ground_norm = std::sqrt(form.norm_sq(U));

  FieldState u0 = U;
  if (perturbation && perturbation->delta > 0.0) u0 = perturb(U, *perturbation, params);
  report.initial_distance = orbit_distance(u0, U, form);

  auto hook = [&](long, double t, const FieldState& u) {
    report.times.push_back(t);
    report.orbit_distance.push_back(orbit_distance(u, U, form));
  };
  auto evolved = evolve(u0, ham, evolve_config, hook);
  report.mass_trace = std::move(evolved.trace.mass_values);
  report.energy_trace = std::move(evolved.trace.energy_values);
  report.max_distance = 0.0;
  for (double d : report.orbit_distance) report.max_distance = std::max(report.max_distance, d);
  report.ground_state = std::move(gs);
  return report;
}

FieldState grid_rescaled(const FieldState& field, double lambda, double amplitude) {
  if (!(lambda > 0.0)) throw std::invalid_argument("grid_rescaled: lambda must be positive");
  const GridSpec& g = field.grid;
  FieldState out(GridSpec(g.dim(), g.half_width() / lambda, g.points_per_axis()));
  for (std::size_t i = 0; i < field.size(); ++i) out.values[i] = amplitude * field.values[i];
  return out;
}

bool ScalingReport::passed(double mass_tol, double ratio_tol) const {
  bool ok = std::abs(mass_ratio - 1.0) <= mass_tol;
  if (mass_critical_kinetic) ok = ok && std::abs(*mass_critical_kinetic - 1.0) <= ratio_tol;
  if (mass_critical_hartree) ok = ok && std::abs(*mass_critical_hartree - 1.0) <= ratio_tol;
  if (energy_critical_ratio) ok = ok && std::abs(*energy_critical_ratio - 1.0) <= ratio_tol;
  return ok;
}

ScalingReport scaling_checks(const FieldState& field, const ModelParams& params, double lambda) {
  if (params.potential.kind != PotentialKind::zero || params.potential.shift != 0.0 || params.m != 0.0)
    throw std::invalid_argument("scaling_checks: requires V = 0 and m = 0");
  field.validate();
  const int N = field.grid.dim();
  const double s = params.s;
  ScalingReport r;
  r.lambda = lambda;

  // mass-invariant family lambda^{N/2} u(lambda x)
  const FieldState mass_scaled = grid_rescaled(field, lambda, std::pow(lambda, 0.5 * N));
  r.mass_ratio = mass(mass_scaled) / mass(field);

  if (2.0 * s < N) {
    ModelParams crit = params;
    crit.gamma = 2.0 * s;
    const double expected = std::pow(lambda, 2.0 * s);
    const auto e0 = energy(field, crit, make_kernel(field.grid, crit));
    const auto e1 = energy(mass_scaled, crit, make_kernel(mass_scaled.grid, crit));
    r.mass_critical_kinetic = e1.kinetic / e0.kinetic / expected;
    r.mass_critical_hartree = e1.hartree / e0.hartree / expected;
  }
  if (4.0 * s < N) {
    // gamma = 4s sits on the edge of the admissible models, so the energy is
    // assembled here from its two terms (V = 0, m = 0) without a Hamiltonian
    auto critical_energy = [&](const FieldState& u) {
      const auto w = hartree_potential(u, build_hartree_kernel(u.grid, 4.0 * s, params.hartree_weight));
      double h = 0.0;
      for (std::size_t i = 0; i < u.size(); ++i) h += w[i] * std::norm(u.values[i]);
      return 0.5 * hs_seminorm_sq(u, s) - 0.25 * u.grid.cell_volume() * h;
    };
    // lambda^{-(N-2s)/2} u(x/lambda): grid stretched by lambda
    const FieldState energy_scaled = grid_rescaled(field, 1.0 / lambda, std::pow(lambda, -0.5 * (N - 2.0 * s)));
    r.energy_critical_ratio = critical_energy(energy_scaled) / critical_energy(field);
  }
  return r;
}

}  // namespace fhlab
