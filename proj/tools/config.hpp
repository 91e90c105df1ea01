#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "softdeco/decoherence.hpp"
#include "softdeco/experiment.hpp"
#include "softdeco/numerics.hpp"

namespace softdeco::app {

/// A bad configuration. `key` is the dotted key path, `where` is
/// "file:line" or the name of the overriding environment variable.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, std::string where, const std::string& message);
  const std::string& key() const { return key_; }
  const std::string& where() const { return where_; }

 private:
  std::string key_;
  std::string where_;
};

enum class SweepScale { linear, log };

struct SweepSpec {
  std::string parameter;  ///< dotted key path, e.g. cutoffs.omega_uv
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  SweepScale scale = SweepScale::linear;

  std::vector<double> values() const;
};

struct SlitBlock {
  SlitGeometry geometry;
  std::optional<double> ell_o;
  double z_f = 0.0;
};

struct MirrorBlock {
  ParticleMirror mirror;
  std::optional<double> q_scatter;
};

struct RunConfig {
  std::optional<double> l;
  std::optional<double> tau;
  CutoffSet cutoffs;
  bool has_omega_uv = false;
  double Q = 1.0;
  double alpha = kFineStructure;
  QuadratureSpec quadrature;
  std::vector<Variant> variants{Variant::dressed, Variant::sub, Variant::hard};
  std::optional<SweepSpec> sweep;
  std::optional<SlitBlock> slit;
  std::optional<MirrorBlock> mirror;

  std::string source;  ///< file name, for messages
  std::string text;    ///< raw document, for line lookups
  std::vector<std::string> overridden;  ///< key paths taken from the environment

  /// "file:line" of a key, or the environment variable that set it.
  std::string where(const std::string& key) const;

  double charge() const;
  /// Geometry from l, tau and the charge block; requires both lengths.
  InterferometerGeometry geometry() const;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

/// Environment lookup through getenv.
EnvLookup process_environment();

/// "SOFTDECO_" + upper-cased key path with dots replaced by underscores.
std::string env_name(const std::string& key_path);

/// Every key path the schema knows, in document order.
const std::vector<std::string>& schema_keys();

/// Parse and validate a JSON document (comments allowed). Environment
/// overrides are applied before validation.
RunConfig parse_config(const std::string& text, const std::string& source, const EnvLookup& env);
RunConfig load_config(const std::string& path, const EnvLookup& env);

/// Empty config with only environment overrides applied.
RunConfig default_config(const EnvLookup& env);

/// Checks needed by gamma and sweep: geometry and cutoffs present and
/// consistent, and no undressed variant at lambda_ir = 0.
void require_interferometer(const RunConfig& cfg);

/// Set a sweepable numeric key on a copy of `cfg`. Throws ConfigError for
/// keys that cannot be swept.
RunConfig with_parameter(const RunConfig& cfg, const std::string& key, double value);

/// Keys accepted by sweep.parameter.
const std::vector<std::string>& sweepable_keys();

/// Validate the cross-field constraints of a fully assembled config.
void validate(const RunConfig& cfg);

}  // namespace softdeco::app
