#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cqs/propagate.hpp"
#include "cqs/pulse.hpp"

namespace cqs {

class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace cfg {

/// Raw declarative config text: `key = value` lines, `#` comments, and
/// `[curve NAME]` sections whose keys override the globals for that curve.
struct Entry {
  std::string key;
  std::string value;
  bool operator==(const Entry&) const = default;
};

struct Section {
  std::string name;
  std::vector<Entry> entries;
  bool operator==(const Section&) const = default;
};

struct Document {
  std::vector<Entry> globals;
  std::vector<Section> sections;
  bool operator==(const Document&) const = default;

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
};

Document parse(std::istream& in);
Document parse_string(const std::string& text);
Document parse_file(const std::string& path);
std::string serialize(const Document& doc);

/// Applies "key=value" to the globals or "NAME/key=value" to curve NAME.
void apply_override(Document& doc, const std::string& spec);

/// FNV-1a hash of the canonical serialization, as fixed-width hex.
std::string hash_hex(const Document& doc);

}  // namespace cfg

struct GridConfig {
  std::size_t n = 1024;
  double t_span = 40.0;
};

struct IntegratorConfig {
  double dz = 1e-3;
  SplitScheme scheme = SplitScheme::strang;
  std::size_t checkpoint_stride = 1;
  double divergence_factor = 1e3;

  StepConfig step_config() const {
    return {dz, scheme, checkpoint_stride, divergence_factor};
  }
};

struct PulseConfig {
  enum class Type { soliton, gaussian };
  Type type = Type::soliton;
  // Soliton selection: exactly one of beta, amplitude, or (tau, branch).
  std::optional<double> beta;
  std::optional<double> amplitude;
  std::optional<double> tau;
  std::string branch;  // "lower" | "upper", with tau
  // Gaussian: alpha plus exactly one of amplitude or energy; chirp optional.
  std::optional<double> alpha;
  std::optional<double> energy;
  double chirp = 0.0;
};

struct AnalysisConfig {
  std::optional<double> distance;
  std::optional<double> periods;
  std::size_t samples = 25;
  std::size_t theta_points = 256;
};

struct CurveConfig {
  std::string name;
  CqParams params;
  GridConfig grid;
  IntegratorConfig integrator;
  PulseConfig pulse;
  AnalysisConfig analysis;
};

struct FamilyConfig {
  std::vector<double> gammas;
  double amplitude_min = 0.05;
  double amplitude_max = 0.0;  // 0 = admissible window upper edge
  std::size_t points = 400;
  std::vector<double> marker_taus;
};

struct ExperimentConfig {
  std::string run_name = "run";
  std::string output_dir = "out";
  std::size_t export_stride = 0;  // 0 = auto (about 100 exported checkpoints)
  unsigned threads = 0;
  double validate_distance = 2.0;
  std::size_t validate_pairs = 20;

  CurveConfig base;
  FamilyConfig family;
  std::vector<CurveConfig> curves;  // resolved sections; empty = just base

  std::string config_hash;
  cfg::Document document;

  /// Curves to run: the named sections, or the base alone.
  std::vector<CurveConfig> effective_curves() const {
    return curves.empty() ? std::vector<CurveConfig>{base} : curves;
  }
};

/// Validates and types a raw document. Unknown keys, malformed numbers, and
/// violated preconditions raise config_error.
ExperimentConfig load_experiment(const cfg::Document& doc);

/// Initial pulse plus the soliton-period normalization for a curve.
/// Solitons use z_sp = pi/(2 beta); Gaussian pulses use the beta of the
/// equal-rms-width NLSE soliton, beta = pi^2/(6 alpha^2).
struct ResolvedPulse {
  ComplexField field;
  double beta = 0.0;
  double soliton_period = 0.0;
  std::string summary;
};

ResolvedPulse resolve_pulse(const CurveConfig& curve, const GridPtr& grid);

/// Propagation length for a curve: analysis.distance, or analysis.periods
/// times the pulse's soliton period.
double resolve_length(const CurveConfig& curve, const ResolvedPulse& pulse);

}  // namespace cqs
