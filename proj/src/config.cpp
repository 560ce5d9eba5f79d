#include "fhlab/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace fhlab {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"run", {"seed", "output_dir"}},
      {"grid", {"dim", "half_width", "points", "dealias"}},
      {"model", {"s", "m", "gamma", "mass", "hartree_weight"}},
      {"potential", {"kind", "weights", "coefficients", "shift", "lower_bound"}},
      {"ground_state",
       {"step_size", "max_iters", "residual_tol", "init", "init_file", "semi_implicit", "max_halvings", "seed"}},
      {"evolve", {"dt", "t_final", "monitor_stride", "reverse", "initial", "initial_file", "offset", "width"}},
      {"perturbation", {"delta", "mode", "seed", "k_index", "factor", "renormalize_mass"}},
      {"verify", {"samples", "energy_samples", "lambda", "kernel_gamma_override", "seed"}},
  };
  return keys;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class Reader {
 public:
  explicit Reader(const pt::ptree& tree) : tree_(tree) {
    for (const auto& [section, body] : tree_) {
      const auto it = known_keys().find(section);
      if (it == known_keys().end())
        throw ConfigError(section, "unknown section [" + section + "]");
      if (body.data().size() && body.empty())
        throw ConfigError(section, "key outside of any section");
      for (const auto& [key, value] : body)
        if (!it->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
    }
  }

  bool has(const std::string& section, const std::string& key) const { return raw(section, key).has_value(); }
  bool has_section(const std::string& section) const { return tree_.find(section) != tree_.not_found(); }

  double number(const std::string& section, const std::string& key, std::optional<double> fallback) const {
    const auto text = raw(section, key);
    if (!text) return required(section, key, fallback);
    double v = 0.0;
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(section + "." + key, "cannot parse '" + *text + "' as a number");
    return v;
  }

  long long integer(const std::string& section, const std::string& key, std::optional<long long> fallback) const {
    const auto text = raw(section, key);
    if (!text) return required(section, key, fallback);
    long long v = 0;
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(section + "." + key, "cannot parse '" + *text + "' as an integer");
    return v;
  }

  std::uint64_t unsigned_integer(const std::string& section, const std::string& key,
                                 std::optional<std::uint64_t> fallback) const {
    const auto text = raw(section, key);
    if (!text) return required(section, key, fallback);
    std::uint64_t v = 0;
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(section + "." + key, "cannot parse '" + *text + "' as a non-negative integer");
    return v;
  }

  bool boolean(const std::string& section, const std::string& key, bool fallback) const {
    const auto text = raw(section, key);
    if (!text) return fallback;
    if (*text == "true" || *text == "yes" || *text == "1") return true;
    if (*text == "false" || *text == "no" || *text == "0") return false;
    throw ConfigError(section + "." + key, "cannot parse '" + *text + "' as a boolean");
  }

  std::string text(const std::string& section, const std::string& key, std::optional<std::string> fallback) const {
    const auto t = raw(section, key);
    if (!t) return required(section, key, fallback);
    return *t;
  }

  std::vector<double> list(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    const auto t = raw(section, key);
    if (!t) return out;
    std::stringstream ss(*t);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      double v = 0.0;
      const auto* end = item.data() + item.size();
      const auto [ptr, ec] = std::from_chars(item.data(), end, v);
      if (item.empty() || ec != std::errc() || ptr != end)
        throw ConfigError(section + "." + key, "cannot parse list entry '" + item + "'");
      out.push_back(v);
    }
    return out;
  }

 private:
  std::optional<std::string> raw(const std::string& section, const std::string& key) const {
    const auto sec = tree_.find(section);
    if (sec == tree_.not_found()) return std::nullopt;
    const auto it = sec->second.find(key);
    if (it == sec->second.not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  template <class T>
  static T required(const std::string& section, const std::string& key, const std::optional<T>& fallback) {
    if (!fallback) throw ConfigError(section + "." + key, "required key is missing");
    return *fallback;
  }

  const pt::ptree& tree_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class F>
auto at(const std::string& where, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

std::string to_string(InitialFieldKind kind) {
  switch (kind) {
    case InitialFieldKind::ground_state: return "ground_state";
    case InitialFieldKind::zero: return "zero";
    case InitialFieldKind::gaussian: return "gaussian";
    case InitialFieldKind::file: return "file";
  }
  return "unknown";
}

void RunConfig::apply_seed(std::uint64_t new_seed) {
  seed = new_seed;
  if (!gs_seed_explicit_) ground_state.seed = new_seed;
  if (perturbation && !perturbation_seed_explicit_) perturbation->seed = new_seed;
  if (!verify_seed_explicit_) verify.seed = new_seed;
}

void RunConfig::validate() const {
  at("model", [&] { model.validate(grid.dim()); return 0; });
  at("ground_state", [&] { ground_state.validate(); return 0; });
  at("evolve", [&] { evolve.validate(); return 0; });
  if (perturbation && perturbation->delta != 0.0) at("perturbation", [&] { perturbation->validate(); return 0; });
  if (perturbation && perturbation->delta < 0.0) throw ConfigError("perturbation.delta", "must be >= 0");
  if (initial.kind == InitialFieldKind::file && initial.file.empty())
    throw ConfigError("evolve.initial_file", "required when evolve.initial = file");
  if (verify.samples < 1) throw ConfigError("verify.samples", "must be >= 1");
  if (verify.energy_samples < 1) throw ConfigError("verify.energy_samples", "must be >= 1");
}

RunConfig parse_config(std::istream& is, const std::string& source_name, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(source_name + ":" + std::to_string(e.line()), e.message());
  }
  const Reader r(tree);
  RunConfig c;

  c.grid = at("grid", [&] {
    return GridSpec(static_cast<int>(r.integer("grid", "dim", std::nullopt)),
                    r.number("grid", "half_width", std::nullopt),
                    static_cast<int>(r.integer("grid", "points", std::nullopt)));
  });
  c.dealias = r.boolean("grid", "dealias", false);

  c.model.s = r.number("model", "s", std::nullopt);
  c.model.m = r.number("model", "m", 0.0);
  c.model.gamma = r.number("model", "gamma", std::nullopt);
  c.model.mass_target = r.number("model", "mass", 1.0);
  c.model.hartree_weight = r.number("model", "hartree_weight", 1.0);

  auto& pot = c.model.potential;
  pot.kind = at("potential.kind", [&] { return potential_kind_from_string(r.text("potential", "kind", "harmonic")); });
  pot.weights = r.list("potential", "weights");
  pot.coefficients = r.list("potential", "coefficients");
  pot.shift = r.number("potential", "shift", 0.0);
  pot.lower_bound = r.number("potential", "lower_bound", 0.0);

  auto& gs = c.ground_state;
  gs.step_size = r.number("ground_state", "step_size", gs.step_size);
  gs.max_iters = static_cast<int>(r.integer("ground_state", "max_iters", gs.max_iters));
  gs.residual_tol = r.number("ground_state", "residual_tol", gs.residual_tol);
  gs.init = at("ground_state.init", [&] { return init_kind_from_string(r.text("ground_state", "init", "gaussian")); });
  if (r.has("ground_state", "init_file")) gs.init_file = resolve(base_dir, r.text("ground_state", "init_file", ""));
  gs.semi_implicit = r.boolean("ground_state", "semi_implicit", true);
  gs.max_halvings = static_cast<int>(r.integer("ground_state", "max_halvings", gs.max_halvings));

  auto& ev = c.evolve;
  ev.dt = r.number("evolve", "dt", ev.dt);
  ev.t_final = r.number("evolve", "t_final", ev.t_final);
  ev.monitor_stride = static_cast<int>(r.integer("evolve", "monitor_stride", ev.monitor_stride));
  ev.reverse = r.boolean("evolve", "reverse", false);
  const std::string initial = r.text("evolve", "initial", "ground_state");
  if (initial == "ground_state")
    c.initial.kind = InitialFieldKind::ground_state;
  else if (initial == "zero")
    c.initial.kind = InitialFieldKind::zero;
  else if (initial == "gaussian")
    c.initial.kind = InitialFieldKind::gaussian;
  else if (initial == "file")
    c.initial.kind = InitialFieldKind::file;
  else
    throw ConfigError("evolve.initial", "unknown initial field '" + initial + "'");
  if (r.has("evolve", "initial_file")) c.initial.file = resolve(base_dir, r.text("evolve", "initial_file", ""));
  c.initial.offset = r.number("evolve", "offset", 0.0);
  c.initial.width = r.number("evolve", "width", 1.0);

  if (r.has_section("perturbation")) {
    PerturbationSpec p;
    p.delta = r.number("perturbation", "delta", p.delta);
    p.mode = at("perturbation.mode",
                [&] { return perturbation_mode_from_string(r.text("perturbation", "mode", "random")); });
    p.k_index = static_cast<int>(r.integer("perturbation", "k_index", p.k_index));
    p.factor = r.number("perturbation", "factor", p.factor);
    p.renormalize_mass = r.boolean("perturbation", "renormalize_mass", false);
    c.perturbation = p;
  }

  c.verify.samples = static_cast<int>(r.integer("verify", "samples", c.verify.samples));
  c.verify.energy_samples = static_cast<int>(r.integer("verify", "energy_samples", c.verify.energy_samples));
  c.verify.scaling_lambda = r.number("verify", "lambda", c.verify.scaling_lambda);
  if (r.has("verify", "kernel_gamma_override"))
    c.verify.kernel_gamma_override = r.number("verify", "kernel_gamma_override", std::nullopt);

  c.output_dir = r.text("run", "output_dir", "out");
  c.apply_seed(r.unsigned_integer("run", "seed", 0));
  if (r.has("ground_state", "seed")) {
    c.ground_state.seed = r.unsigned_integer("ground_state", "seed", std::nullopt);
    c.gs_seed_explicit_ = true;
  }
  if (c.perturbation && r.has("perturbation", "seed")) {
    c.perturbation->seed = r.unsigned_integer("perturbation", "seed", std::nullopt);
    c.perturbation_seed_explicit_ = true;
  }
  if (r.has("verify", "seed")) {
    c.verify.seed = r.unsigned_integer("verify", "seed", std::nullopt);
    c.verify_seed_explicit_ = true;
  }

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path.string(), "cannot open configuration file");
  return parse_config(is, path.string(), path.parent_path());
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt_double(v[i]);
    return s;
  };
  os << "[run]\nseed = " << c.seed << "\noutput_dir = " << c.output_dir.string() << "\n\n";
  os << "[grid]\ndim = " << c.grid.dim() << "\nhalf_width = " << fmt_double(c.grid.half_width())
     << "\npoints = " << c.grid.points_per_axis() << "\ndealias = " << (c.dealias ? "true" : "false") << "\n\n";
  os << "[model]\ns = " << fmt_double(c.model.s) << "\nm = " << fmt_double(c.model.m)
     << "\ngamma = " << fmt_double(c.model.gamma) << "\nmass = " << fmt_double(c.model.mass_target)
     << "\nhartree_weight = " << fmt_double(c.model.hartree_weight) << "\n\n";
  const auto& p = c.model.potential;
  os << "[potential]\nkind = " << to_string(p.kind) << "\n";
  if (!p.weights.empty()) os << "weights = " << list(p.weights) << "\n";
  if (!p.coefficients.empty()) os << "coefficients = " << list(p.coefficients) << "\n";
  os << "shift = " << fmt_double(p.shift) << "\nlower_bound = " << fmt_double(p.lower_bound) << "\n\n";
  const auto& gs = c.ground_state;
  os << "[ground_state]\nstep_size = " << fmt_double(gs.step_size) << "\nmax_iters = " << gs.max_iters
     << "\nresidual_tol = " << fmt_double(gs.residual_tol) << "\ninit = " << to_string(gs.init) << "\n";
  if (!gs.init_file.empty()) os << "init_file = " << gs.init_file.string() << "\n";
  os << "semi_implicit = " << (gs.semi_implicit ? "true" : "false") << "\nmax_halvings = " << gs.max_halvings
     << "\nseed = " << gs.seed << "\n\n";
  const auto& ev = c.evolve;
  os << "[evolve]\ndt = " << fmt_double(ev.dt) << "\nt_final = " << fmt_double(ev.t_final)
     << "\nmonitor_stride = " << ev.monitor_stride << "\nreverse = " << (ev.reverse ? "true" : "false")
     << "\ninitial = " << to_string(c.initial.kind) << "\n";
  if (!c.initial.file.empty()) os << "initial_file = " << c.initial.file.string() << "\n";
  os << "offset = " << fmt_double(c.initial.offset) << "\nwidth = " << fmt_double(c.initial.width) << "\n\n";
  if (c.perturbation) {
    const auto& q = *c.perturbation;
    os << "[perturbation]\ndelta = " << fmt_double(q.delta) << "\nmode = " << to_string(q.mode)
       << "\nseed = " << q.seed << "\nk_index = " << q.k_index << "\nfactor = " << fmt_double(q.factor)
       << "\nrenormalize_mass = " << (q.renormalize_mass ? "true" : "false") << "\n\n";
  }
  const auto& v = c.verify;
  os << "[verify]\nsamples = " << v.samples << "\nenergy_samples = " << v.energy_samples
     << "\nlambda = " << fmt_double(v.scaling_lambda) << "\nseed = " << v.seed << "\n";
  if (v.kernel_gamma_override) os << "kernel_gamma_override = " << fmt_double(*v.kernel_gamma_override) << "\n";
  return os.str();
}

}  // namespace fhlab
