// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numbers>
#include <set>
#include <sstream>
#include <string>

#include "fhlab/dynamics.hpp"
#include "fhlab/ground_state.hpp"
#include "fhlab/stability.hpp"
#include "fhlab/verify.hpp"
#include "oracles.hpp"

using namespace fhlab;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

// collects named measurements against thresholds
class Ledger {
 public:
  void le(const std::string& name, double value, double limit) { record(name, value, limit, value <= limit, "<="); }
  void lt(const std::string& name, double value, double limit) { record(name, value, limit, value < limit, "<"); }
  void within(const std::string& name, double value, double lo, double hi) {
    const bool ok = value >= lo && value <= hi;
    if (!ok) passed_ = false;
    std::ostringstream os;
    os.precision(4);
    os << name << "=" << value << " in [" << lo << "," << hi << "]";
    note(os.str(), !ok);
  }
  void require(const std::string& name, bool ok) {
    if (!ok) passed_ = false;
    note(name + (ok ? " ok" : " violated"), !ok);
  }
  void info(const std::string& text) { note(text, false); }
  Outcome outcome() const { return {passed_, failures_.empty() ? summary_ : failures_}; }

 private:
  void record(const std::string& name, double value, double limit, bool ok, const char* rel) {
    if (!ok) passed_ = false;
    std::ostringstream os;
    os.precision(3);
    os << name << "=" << value << " " << rel << " " << limit;
    note(os.str(), !ok);
  }
  void note(const std::string& text, bool failure) {
    std::string& target = failure ? failures_ : summary_;
    if (!target.empty()) target += "; ";
    target += text;
  }
  bool passed_ = true;
  std::string summary_, failures_;
};

ModelParams model(double s, double gamma, double weight = 1.0) {
  ModelParams p;
  p.s = s;
  p.gamma = gamma;
  p.hartree_weight = weight;
  p.potential = PotentialSpec::harmonic();
  return p;
}

const GridSpec kLine(1, 8.0, 256);

double signed_mode(int j, int n) { return j < n / 2 ? j : j - n; }

// worst max over a set of values
struct Worst {
  double value = 0.0;
  void add(double v) { value = std::max(value, v); }
};

FieldState displaced_gaussian(const GridSpec& g, double x0) {
  auto u = sample_field(g, [&](const std::array<double, 3>& x) {
    return Complex(std::exp(-0.5 * (x[0] - x0) * (x[0] - x0)), 0.0);
  });
  return renormalize(u, 1.0);
}

GroundStateResult tight_solve(const ModelParams& p, const GridSpec& g, double tol = 1e-11, InitKind init = InitKind::gaussian,
                              std::uint64_t seed = 0) {
  GroundStateConfig c;
  c.residual_tol = tol;
  c.init = init;
  c.seed = seed;
  c.max_iters = 100000;
  return solve_ground_state(p, g, c);
}

// 1: plane waves are eigenfunctions of the fractional multiplier
Outcome plane_waves() {
  Ledger led;
  Worst worst;
  const GridSpec grids[] = {GridSpec(1, 8.0, 64), GridSpec(2, 5.0, 32), GridSpec(3, 3.0, 16)};
  for (const auto& g : grids) {
    const int n = g.points_per_axis();
    const double base = std::numbers::pi / g.half_width();
    const std::array<int, 3> modes[] = {{1, 0, 0}, {3, n - 2, 1}, {n / 2 - 1, 5, n - 3}, {n / 2, n / 2, n / 2}, {0, 0, 0}};
    for (const auto& mode : modes) {
      std::array<double, 3> k{};
      double k2 = 0.0;
      for (int d = 0; d < g.dim(); ++d) {
        k[d] = base * signed_mode(mode[d], n);
        k2 += k[d] * k[d];
      }
      const auto u = sample_field(g, [&](const std::array<double, 3>& x) {
        double phase = 0.0;
        for (int d = 0; d < g.dim(); ++d) phase += k[d] * x[d];
        return std::polar(1.0, phase);
      });
      for (double s : {0.3, 0.5, 0.7, 1.0})
        for (double m : {0.0, 1.0}) {
          const double lambda = std::pow(k2 + m * m, s);
          const auto v = apply_fractional(u, s, m);
          std::vector<Complex> expect(u.size());
          for (std::size_t i = 0; i < u.size(); ++i) expect[i] = lambda * u.values[i];
          if (lambda == 0.0)
            worst.add(oracle::max_abs_diff(v.values, expect));
          else
            worst.add(oracle::rel_l2(v.values, expect));
        }
    }
  }
  led.lt("max rel err", worst.value, 1e-12);
  return led.outcome();
}

// 2: FFT convolution against the direct double sum
Outcome convolution_oracle() {
  Ledger led;
  Rng rng(2024);
  Worst worst;
  const double gammas[] = {0.3, 0.5, 0.9};
  for (const GridSpec g : {GridSpec(1, 4.0, 32), GridSpec(2, 3.0, 16)}) {
    for (int f = 0; f < 20; ++f) {
      const double gamma = gammas[f % 3];
      const auto k = build_hartree_kernel(g, gamma);
      const auto u = oracle::random_field(g, rng);
      const double origin = oracle::cell_average_quadrature(g.dim(), g.spacing(), gamma);
      worst.add(oracle::rel_l2(hartree_potential(u, k), oracle::direct_convolution(u, gamma, origin)));
    }
  }
  led.lt("max rel err", worst.value, 1e-10);
  return led.outcome();
}

// 3: energy gradient against central differences
Outcome gradient_consistency() {
  Ledger led;
  Rng rng(33);
  const GridSpec g(1, 4.0, 32);
  Worst worst;
  int pairs = 0;
  for (double s : {0.5, 0.7, 1.0})
    for (double gamma : {0.3, 0.5, 0.9}) {
      if (!(gamma < 2.0 * s)) continue;
      ++pairs;
      const auto p = model(s, gamma);
      const auto k = make_kernel(g, p);
      for (int f = 0; f < 10; ++f) {
        const auto u = random_smooth_field(g, rng, 4, 1.0);
        const auto grad = energy_gradient(u, p, k);
        const auto fd = oracle::fd_gradient(u, [&](const FieldState& w) { return energy(w, p, k).total; }, 1e-5);
        worst.add(oracle::rel_l2(fd, grad.values));
      }
    }
  led.require("9 subcritical pairs", pairs == 9);
  led.lt("max rel err", worst.value, 1e-6);
  return led.outcome();
}

// 4: linear harmonic oscillator ground state
Outcome analytic_ground_state() {
  Ledger led;
  // random start: the default Gaussian guess already is the answer here
  const auto r = tight_solve(model(1.0, 0.5, 0.0), kLine, 1e-11, InitKind::random_seeded, 4);
  led.require("converged", r.converged);
  led.info("iters=" + std::to_string(r.iters));
  led.lt("|d_M-0.5|", std::abs(r.energy.total - 0.5), 1e-6);
  led.lt("|omega+1|", std::abs(r.omega + 1.0), 1e-6);
  double worst = 0.0;
  for (std::size_t i = 0; i < kLine.size(); ++i) {
    const double x = kLine.coordinate(static_cast<int>(i));
    worst = std::max(worst, std::abs(r.field.values[i] - std::exp(-0.5 * x * x) / std::pow(std::numbers::pi, 0.25)));
  }
  led.lt("max field err", worst, 1e-5);
  return led.outcome();
}

// 5: mass conservation and second-order energy drift
Outcome conservation() {
  Ledger led;
  const auto p = model(0.7, 0.5);
  const Hamiltonian ham(p, make_kernel(kLine, p));
  const auto u0 = displaced_gaussian(kLine, 1.0);
  double drift[2] = {0.0, 0.0};
  for (int level = 0; level < 2; ++level) {
    EvolveConfig c;
    c.dt = level == 0 ? 1e-3 : 5e-4;
    c.t_final = 10.0;  // 1e4 steps at dt = 1e-3
    c.monitor_stride = level == 0 ? 10 : 20;
    const auto r = evolve(u0, ham, c);
    if (level == 0) led.lt("mass drift", r.trace.max_relative_mass_drift(), 1e-12);
    drift[level] = r.trace.max_relative_energy_drift();
  }
  std::ostringstream os;
  os.precision(3);
  os << "energy drift " << drift[0] << " -> " << drift[1];
  led.info(os.str());
  led.within("halving ratio", drift[0] / drift[1], 3.0, 5.0);
  return led.outcome();
}

// 6: the ground state evolves as a standing wave
Outcome standing_wave() {
  Ledger led;
  const auto p = model(0.7, 0.5);
  const Hamiltonian ham(p, make_kernel(kLine, p));
  GroundStateConfig gc;
  gc.residual_tol = 1e-11;
  const auto gs = solve_ground_state(ham, gc);
  led.require("converged", gs.converged);
  EvolveConfig c;
  c.dt = 1e-3;
  c.t_final = 20.0;
  c.monitor_stride = 100;
  double dist = 0.0, mod = 0.0;
  evolve(gs.field, ham, c, [&](long, double, const FieldState& u) {
    dist = std::max(dist, orbit_distance(u, gs.field, ham.form()));
    for (std::size_t i = 0; i < u.size(); ++i)
      mod = std::max(mod, std::abs(std::abs(u.values[i]) - std::abs(gs.field.values[i])));
  });
  led.lt("orbit distance", dist, 1e-5);
  led.lt("modulus drift", mod, 1e-6);
  return led.outcome();
}

// 7: perturbed ground states stay near the orbit
Outcome orbital_stability() {
  Ledger led;
  const std::pair<double, double> matrix[] = {{0.7, 0.5}, {0.9, 0.8}, {1.0, 0.9}};
  for (const auto& [s, gamma] : matrix) {
    const auto p = model(s, gamma);
    double max_d[2] = {0.0, 0.0};
    int idx = 0;
    for (double delta : {1e-3, 1e-2}) {
      GroundStateConfig gc;
      gc.residual_tol = 1e-10;
      PerturbationSpec ps;
      ps.delta = delta;
      ps.seed = 7;
      EvolveConfig ec;
      ec.dt = 1e-3;
      ec.t_final = 20.0;
      ec.monitor_stride = 100;
      const auto rep = run_stability_experiment(p, kLine, gc, ps, ec);
      std::ostringstream name;
      name << "(" << s << "," << gamma << ",d=" << delta << ") max/initial";
      led.require(name.str() + " in hypothesis", rep.in_hypothesis);
      led.le(name.str(), rep.max_distance / rep.initial_distance, 10.0);
      max_d[idx++] = rep.max_distance;
    }
    std::ostringstream name;
    name << "(" << s << "," << gamma << ") monotone in delta";
    led.require(name.str(), max_d[0] <= max_d[1]);
  }
  return led.outcome();
}

// 8: interpolation inequality ratio and empirical suprema
Outcome inequality_suites() {
  Ledger led;
  Rng rng(88);
  Worst scale;
  struct Case {
    GridSpec grid;
    double s, gamma;
  };
  const Case cases[] = {{GridSpec(1, 8.0, 256), 0.7, 0.5}, {GridSpec(1, 8.0, 256), 1.0, 0.9},
                        {GridSpec(2, 6.0, 64), 0.7, 0.5}};
  for (const auto& c : cases) {
    ModelParams p = model(c.s, c.gamma);
    p.potential = PotentialSpec::zero();
    const int N = c.grid.dim();
    for (int f = 0; f < 5; ++f) {
      const auto u = random_bump_field(c.grid, rng, 2, 0.5, 1.5, 2.0);
      const double base = gn_ratio(u, p, make_kernel(c.grid, p));
      for (double lambda : {0.5, 2.0}) {
        const auto ul = grid_rescaled(u, lambda, std::pow(lambda, 0.5 * N));
        scale.add(std::abs(gn_ratio(ul, p, make_kernel(ul.grid, p)) / base - 1.0));
      }
    }
    const double a = empirical_gn_constant(p, c.grid, 200, 5);
    const double b = empirical_gn_constant(p, c.grid, 400, 5);
    std::ostringstream name;
    name << "sup400/sup200-1 (N=" << N << ",s=" << c.s << ",g=" << c.gamma << ")";
    led.require(name.str() + " finite", std::isfinite(a) && std::isfinite(b) && a > 0.0);
    led.le(name.str(), std::abs(b / a - 1.0), 0.05);
  }
  led.le("scale deviation", scale.value, 0.02);
  return led.outcome();
}

// 9: constant shifts of V
Outcome shift_equivalence() {
  Ledger led;
  const auto p = model(0.7, 0.5);
  const auto base = tight_solve(p, kLine, 1e-12);
  led.require("base converged", base.converged);
  Rng rng(9);
  Worst identity, dm, field, omega;
  for (double C : {1.0, 10.0}) {
    auto q = p;
    q.potential = p.potential.shifted(C);
    const auto kq = make_kernel(kLine, q), kp = make_kernel(kLine, p);
    for (int f = 0; f < 5; ++f) {
      const auto u = random_bump_field(kLine, rng, 2, 0.5, 1.5, 2.0);
      const double expect = energy(u, p, kp).total + 0.5 * C * mass(u);
      identity.add(std::abs(energy(u, q, kq).total - expect) / std::abs(expect));
    }
    const auto r = tight_solve(q, kLine, 1e-12);
    led.require("C=" + std::to_string(static_cast<int>(C)) + " converged", r.converged);
    const double expect = base.energy.total + 0.5 * C;
    dm.add(std::abs(r.energy.total - expect) / std::abs(expect));
    field.add(oracle::max_abs_diff(r.field.values, base.field.values));
    omega.add(std::abs(r.omega - (base.omega - C)));
  }
  led.lt("energy identity rel", identity.value, 1e-12);
  led.lt("d_M shift rel", dm.value, 1e-12);
  led.lt("field diff", field.value, 1e-10);
  led.lt("omega shift err", omega.value, 1e-10);
  return led.outcome();
}

// 10: multi-start agreement
Outcome multi_start() {
  Ledger led;
  for (const auto& [s, gamma] : {std::pair{0.7, 0.5}, std::pair{0.9, 0.8}}) {
    const auto p = model(s, gamma);
    std::vector<GroundStateResult> runs;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) runs.push_back(tight_solve(p, kLine, 1e-11, InitKind::random_seeded, seed));
    double de = 0.0, df = 0.0;
    bool all = true;
    for (const auto& r : runs) {
      all = all && r.converged;
      de = std::max(de, std::abs(r.energy.total - runs[0].energy.total));
      FieldState a = r.field, b = runs[0].field;
      fix_gauge(a);
      fix_gauge(b);
      for (std::size_t i = 0; i < a.size(); ++i) df = std::max(df, std::abs(std::abs(a.values[i]) - std::abs(b.values[i])));
    }
    std::ostringstream tag;
    tag << "(" << s << "," << gamma << ")";
    led.require(tag.str() + " all converged", all);
    led.lt(tag.str() + " d_M spread", de, 1e-8);
    led.lt(tag.str() + " |field| spread", df, 1e-6);
  }
  return led.outcome();
}

// 11: box size and resolution convergence in the anchor configuration
Outcome box_convergence() {
  Ledger led;
  const auto p = model(1.0, 0.5, 0.0);
  const auto solve = [&](const GridSpec& g) { return tight_solve(p, g, 1e-11, InitKind::random_seeded, 11); };
  const auto base = solve(kLine);
  const auto wide = solve(GridSpec(1, 16.0, 512));
  const auto fine = solve(GridSpec(1, 8.0, 512));
  led.require("converged", base.converged && wide.converged && fine.converged);
  led.lt("|dd_M| doubling L", std::abs(wide.energy.total - base.energy.total), 1e-6);
  led.lt("|dd_M| doubling n", std::abs(fine.energy.total - base.energy.total), 1e-6);

  // reported only: for s < 1 the periodic images of the nonlocal operator decay like
  // (2L)^{-(N+2s)}, and the sampled singular kernel converges like h^{1-gamma}
  const auto q = model(0.7, 0.5);
  const auto qb = tight_solve(q, kLine), qw = tight_solve(q, GridSpec(1, 16.0, 512)), qf = tight_solve(q, GridSpec(1, 8.0, 512));
  std::ostringstream os;
  os.precision(3);
  os << "info (0.7,0.5): dd_M doubling L=" << qw.energy.total - qb.energy.total
     << ", doubling n=" << qf.energy.total - qb.energy.total;
  led.info(os.str());
  return led.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"spectral plane waves", plane_waves},
      {"convolution oracle", convolution_oracle},
      {"gradient consistency", gradient_consistency},
      {"analytic ground state", analytic_ground_state},
      {"conservation", conservation},
      {"standing wave", standing_wave},
      {"orbital stability", orbital_stability},
      {"inequality suites", inequality_suites},
      {"shift equivalence", shift_equivalence},
      {"multi-start agreement", multi_start},
      {"box/resolution convergence", box_convergence},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!selected.empty() && !selected.count(id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!out.passed) ++failed;
    std::printf("%s %2d %-28s (%.1fs) %s\n", out.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(), secs,
                out.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
