#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "fhlab/dynamics.hpp"
#include "fhlab/ground_state.hpp"
#include "fhlab/stability.hpp"
#include "fhlab/verify.hpp"

namespace fhlab {

/// Bad or missing configuration. `where()` is "file:line" for syntax errors
/// and "section.key" for value errors.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(where) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

enum class InitialFieldKind { ground_state, zero, gaussian, file };
std::string to_string(InitialFieldKind kind);

/// Starting point of the evolve subcommand.
struct InitialFieldSpec {
  InitialFieldKind kind = InitialFieldKind::ground_state;
  std::filesystem::path file;
  /// gaussian: centre displaced by `offset` along the first axis.
  double offset = 0.0;
  double width = 1.0;
};

struct RunConfig {
  ModelParams model;
  GridSpec grid{1, 8.0, 256};
  bool dealias = false;
  GroundStateConfig ground_state;
  EvolveConfig evolve;
  InitialFieldSpec initial;
  std::optional<PerturbationSpec> perturbation;
  VerifyConfig verify;
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;

  /// Pushes run.seed into every seeded sub-config that did not set its own.
  void apply_seed(std::uint64_t new_seed);
  void validate() const;

 private:
  friend RunConfig parse_config(std::istream&, const std::string&, const std::filesystem::path&);
  bool gs_seed_explicit_ = false;
  bool perturbation_seed_explicit_ = false;
  bool verify_seed_explicit_ = false;
};

/// Parses the INI-style run configuration. Relative file paths inside it
/// are resolved against `base_dir`.
RunConfig parse_config(std::istream& is, const std::string& source_name,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Canonical text form with every value at round-trip precision; parsing
/// it back reproduces the configuration.
std::string to_ini(const RunConfig& config);

}  // namespace fhlab
