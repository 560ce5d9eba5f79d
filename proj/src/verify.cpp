#include "fhlab/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "fhlab/random_field.hpp"
#include "fhlab/stability.hpp"

namespace fhlab {
namespace {

FieldState next_bump_field(const GridSpec& grid, Rng& rng) {
  std::uniform_int_distribution<int> count(1, 3);
  const int bumps = count(rng);
  return random_bump_field(grid, rng, bumps, 0.5, 1.5, std::min(2.0, 0.25 * grid.half_width()));
}

HartreeKernel kernel_for(const GridSpec& grid, const ModelParams& params, const VerifyConfig& config) {
  return build_hartree_kernel(grid, config.kernel_gamma_override.value_or(params.gamma), params.hartree_weight);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

CheckResult guarded(const std::string& name, double threshold, const std::function<void(CheckResult&)>& body) {
  CheckResult r;
  r.name = name;
  r.threshold = threshold;
  try {
    body(r);
  } catch (const std::exception& e) {
    r.passed = false;
    r.value = std::numeric_limits<double>::quiet_NaN();
    r.detail = std::string("error: ") + e.what();
  }
  return r;
}

void not_applicable(CheckResult& r, const std::string& why) {
  r.applicable = false;
  r.passed = true;
  r.detail = "not applicable: " + why;
}

}  // namespace

double empirical_gn_constant(const ModelParams& params, const GridSpec& grid, int count, std::uint64_t seed) {
  const auto kernel = make_kernel(grid, params);
  Rng rng(seed);
  double sup = 0.0;
  for (int i = 0; i < count; ++i) sup = std::max(sup, gn_ratio(next_bump_field(grid, rng), params, kernel));
  return sup;
}

std::vector<CheckResult> run_verify_suite(const ModelParams& params, const GridSpec& grid,
                                          const VerifyConfig& config) {
  std::vector<CheckResult> out;
  const double s = params.s, gamma = params.gamma;

  out.push_back(guarded("gn_scale_invariance", 0.02, [&](CheckResult& r) {
    Rng rng(config.seed);
    const FieldState u = next_bump_field(grid, rng);
    const double base = gn_ratio(u, params, kernel_for(grid, params, config));
    double worst = 0.0;
    for (double lambda : {0.5, 2.0}) {
      const FieldState ul = grid_rescaled(u, lambda, std::pow(lambda, 0.5 * grid.dim()));
      worst = std::max(worst, rel(gn_ratio(ul, params, kernel_for(ul.grid, params, config)), base));
    }
    r.value = worst;
    r.passed = worst <= r.threshold;
    std::ostringstream os;
    os << "ratio(u)=" << base << ", max relative change over lambda in {1/2, 2}";
    r.detail = os.str();
  }));

  double gn_sup_all = 0.0;
  out.push_back(guarded("gn_sup_stability", 0.05, [&](CheckResult& r) {
    const auto kernel = kernel_for(grid, params, config);
    Rng rng(config.seed + 1);
    double sup_first = 0.0, sup_all = 0.0;
    for (int i = 0; i < 2 * config.samples; ++i) {
      const double q = gn_ratio(next_bump_field(grid, rng), params, kernel);
      if (i < config.samples) sup_first = std::max(sup_first, q);
      sup_all = std::max(sup_all, q);
    }
    gn_sup_all = sup_all;
    r.value = rel(sup_all, sup_first);
    r.passed = std::isfinite(sup_all) && sup_all > 0.0 && r.value <= r.threshold;
    std::ostringstream os;
    os << "sup over " << config.samples << " = " << sup_first << ", over " << 2 * config.samples << " = "
       << sup_all;
    r.detail = os.str();
  }));

  out.push_back(guarded("hardy_sup_stability", 0.05, [&](CheckResult& r) {
    if (!(2.0 * s < grid.dim())) return not_applicable(r, "2s >= N");
    Rng rng(config.seed + 2);
    double sup_first = 0.0, sup_all = 0.0;
    for (int i = 0; i < 2 * config.samples; ++i) {
      const double q = hardy_sup(next_bump_field(grid, rng), s).ratio;
      if (i < config.samples) sup_first = std::max(sup_first, q);
      sup_all = std::max(sup_all, q);
    }
    r.value = rel(sup_all, sup_first);
    r.passed = std::isfinite(sup_all) && r.value <= r.threshold;
    std::ostringstream os;
    os << "sup ratio over " << config.samples << " = " << sup_first << ", over " << 2 * config.samples << " = "
       << sup_all;
    r.detail = os.str();
  }));

  out.push_back(guarded("energy_lower_bound", 0.0, [&](CheckResult& r) {
    if (!params.subcritical()) return not_applicable(r, "gamma >= 2s");
    const auto kernel = kernel_for(grid, params, config);
    const Hamiltonian ham(params, kernel);
    const double M = params.mass_target;
    Rng rng(config.seed + 3);
    std::vector<FieldState> fields;
    double sup = gn_sup_all;
    for (int i = 0; i < config.energy_samples; ++i) {
      fields.push_back(renormalize(next_bump_field(grid, rng), M));
      sup = std::max(sup, gn_ratio(fields.back(), params, kernel));
    }
    const double p = gamma / (2.0 * s);
    const double c_prime = 0.25 * sup * std::pow(M, (4.0 * s - gamma) / (2.0 * s));
    const double floor = energy_floor(c_prime, p);
    double lowest = std::numeric_limits<double>::infinity();
    for (const auto& f : fields) lowest = std::min(lowest, ham.energy(f).total);
    r.threshold = floor;
    r.value = lowest;
    r.passed = lowest >= floor;
    std::ostringstream os;
    os << "min energy over " << config.energy_samples << " mass-" << M << " fields vs floor -C_M = " << floor
       << " (C' = " << c_prime << ")";
    r.detail = os.str();
  }));

  out.push_back(guarded("shift_equivalence", 1e-12, [&](CheckResult& r) {
    const auto kernel = kernel_for(grid, params, config);
    Rng rng(config.seed + 4);
    const FieldState u = next_bump_field(grid, rng);
    const double M = mass(u);
    const double base = energy(u, params, kernel).total;
    double worst = 0.0;
    for (double C : {1.0, 10.0}) {
      ModelParams shifted = params;
      shifted.potential = params.potential.shifted(C);
      const double e = energy(u, shifted, kernel).total;
      worst = std::max(worst, rel(e, base + 0.5 * C * M));
    }
    r.value = worst;
    r.passed = worst <= r.threshold;
    r.detail = "E_{V+C} - E_V - C M/2, C in {1, 10}";
  }));

  out.push_back(guarded("phase_invariance", 1e-12, [&](CheckResult& r) {
    const auto kernel = kernel_for(grid, params, config);
    Rng rng(config.seed + 5);
    const FieldState u = next_bump_field(grid, rng);
    FieldState v = u;
    const Complex rot = std::polar(1.0, 0.7);
    for (auto& z : v.values) z *= rot;
    double worst = rel(mass(v), mass(u));
    worst = std::max(worst, rel(sigma_norm_sq(v, params), sigma_norm_sq(u, params)));
    worst = std::max(worst, rel(energy(v, params, kernel).total, energy(u, params, kernel).total));
    r.value = worst;
    r.passed = worst <= r.threshold;
    r.detail = "mass, Sigma^s norm and energy under u -> e^{0.7 i} u";
  }));

  ModelParams free = params;
  free.potential = PotentialSpec::zero();
  free.m = 0.0;
  Rng scaling_rng(config.seed + 6);
  const FieldState scaling_field = next_bump_field(grid, scaling_rng);
  const double lambda = config.scaling_lambda;

  out.push_back(guarded("scaling_mass_invariance", 1e-10, [&](CheckResult& r) {
    const auto rep = scaling_checks(scaling_field, free, lambda);
    r.value = std::abs(rep.mass_ratio - 1.0);
    r.passed = r.value <= r.threshold;
    r.detail = "mass(lambda^{N/2} u(lambda x)) / mass(u) - 1";
  }));
  out.push_back(guarded("scaling_mass_critical", 1e-2, [&](CheckResult& r) {
    const auto rep = scaling_checks(scaling_field, free, lambda);
    if (!rep.mass_critical_kinetic) return not_applicable(r, "2s >= N");
    r.value = std::max(std::abs(*rep.mass_critical_kinetic - 1.0), std::abs(*rep.mass_critical_hartree - 1.0));
    r.passed = r.value <= r.threshold;
    r.detail = "H^s and Hartree terms scale by lambda^{2s} at gamma = 2s";
  }));
  out.push_back(guarded("scaling_energy_critical", 1e-2, [&](CheckResult& r) {
    const auto rep = scaling_checks(scaling_field, free, lambda);
    if (!rep.energy_critical_ratio) return not_applicable(r, "4s >= N");
    r.value = std::abs(*rep.energy_critical_ratio - 1.0);
    r.passed = r.value <= r.threshold;
    r.detail = "E invariant under lambda^{-(N-2s)/2} u(x/lambda) at gamma = 4s";
  }));
  return out;
}

}  // namespace fhlab
