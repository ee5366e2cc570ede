#include "cqs/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <sstream>

namespace cqs {

namespace cfg {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::optional<std::string> Document::get(const std::string& key) const {
  std::optional<std::string> out;
  for (const auto& e : globals) {
    if (e.key == key) out = e.value;
  }
  return out;
}

void Document::set(const std::string& key, const std::string& value) {
  for (auto it = globals.rbegin(); it != globals.rend(); ++it) {
    if (it->key == key) {
      it->value = value;
      return;
    }
  }
  globals.push_back({key, value});
}

Document parse(std::istream& in) {
  Document doc;
  Section* current = nullptr;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw config_error("config line " + std::to_string(lineno) + ": unterminated section header");
      }
      std::istringstream header(line.substr(1, line.size() - 2));
      std::string kind, name;
      header >> kind >> name;
      if (kind != "curve" || name.empty()) {
        throw config_error("config line " + std::to_string(lineno) +
                           ": section header must be [curve NAME]");
      }
      doc.sections.push_back({name, {}});
      current = &doc.sections.back();
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
    }
    Entry entry{trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (entry.key.empty()) {
      throw config_error("config line " + std::to_string(lineno) + ": empty key");
    }
    if (current) {
      current->entries.push_back(std::move(entry));
    } else {
      doc.globals.push_back(std::move(entry));
    }
  }
  return doc;
}

Document parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  return parse(in);
}

std::string serialize(const Document& doc) {
  std::ostringstream out;
  for (const auto& e : doc.globals) out << e.key << " = " << e.value << "\n";
  for (const auto& s : doc.sections) {
    out << "\n[curve " << s.name << "]\n";
    for (const auto& e : s.entries) out << e.key << " = " << e.value << "\n";
  }
  return out.str();
}

void apply_override(Document& doc, const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) {
    throw config_error("override must be key=value: " + spec);
  }
  std::string key = trim(spec.substr(0, eq));
  const std::string value = trim(spec.substr(eq + 1));
  const auto slash = key.find('/');
  if (slash == std::string::npos) {
    doc.set(key, value);
    return;
  }
  const std::string section = key.substr(0, slash);
  key = key.substr(slash + 1);
  for (auto& s : doc.sections) {
    if (s.name == section) {
      for (auto it = s.entries.rbegin(); it != s.entries.rend(); ++it) {
        if (it->key == key) {
          it->value = value;
          return;
        }
      }
      s.entries.push_back({key, value});
      return;
    }
  }
  throw config_error("override names unknown curve section: " + section);
}

std::string hash_hex(const Document& doc) {
  const std::string text = serialize(doc);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace cfg

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double x = std::stod(value, &used);
    if (used != value.size() || !std::isfinite(x)) throw std::invalid_argument(value);
    return x;
  } catch (const std::exception&) {
    throw config_error("config key " + key + ": not a finite number: '" + value + "'");
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(value, &used);
    if (used != value.size() || x < 0) throw std::invalid_argument(value);
    return static_cast<std::size_t>(x);
  } catch (const std::exception&) {
    throw config_error("config key " + key + ": not a nonnegative integer: '" + value + "'");
  }
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(),
                              [](unsigned char c) { return std::isspace(c); }),
               item.end());
    if (!item.empty()) out.push_back(parse_double(key, item));
  }
  return out;
}

// One curve's settings assembled from global entries plus optional section
// overrides; unknown keys are rejected.
struct KeyTarget {
  ExperimentConfig* experiment;  // null inside a section
  CurveConfig* curve;
};

bool apply_curve_key(CurveConfig& c, const std::string& key, const std::string& value) {
  if (key == "params.chi") {
    c.params.chi = parse_double(key, value);
  } else if (key == "params.gamma") {
    c.params.gamma = parse_double(key, value);
  } else if (key == "grid.n") {
    c.grid.n = parse_size(key, value);
  } else if (key == "grid.t_span") {
    c.grid.t_span = parse_double(key, value);
  } else if (key == "integrator.dz") {
    c.integrator.dz = parse_double(key, value);
  } else if (key == "integrator.scheme") {
    if (value == "strang") {
      c.integrator.scheme = SplitScheme::strang;
    } else if (value == "lie") {
      c.integrator.scheme = SplitScheme::lie;
    } else {
      throw config_error("integrator.scheme must be strang or lie");
    }
  } else if (key == "integrator.checkpoint_stride") {
    c.integrator.checkpoint_stride = std::max<std::size_t>(1, parse_size(key, value));
  } else if (key == "integrator.divergence_factor") {
    c.integrator.divergence_factor = parse_double(key, value);
  } else if (key == "pulse.type") {
    if (value == "soliton") {
      c.pulse.type = PulseConfig::Type::soliton;
    } else if (value == "gaussian") {
      c.pulse.type = PulseConfig::Type::gaussian;
    } else {
      throw config_error("pulse.type must be soliton or gaussian");
    }
  } else if (key == "pulse.beta") {
    c.pulse.beta = parse_double(key, value);
  } else if (key == "pulse.amplitude") {
    c.pulse.amplitude = parse_double(key, value);
  } else if (key == "pulse.tau") {
    c.pulse.tau = parse_double(key, value);
  } else if (key == "pulse.branch") {
    if (value != "lower" && value != "upper") {
      throw config_error("pulse.branch must be lower or upper");
    }
    c.pulse.branch = value;
  } else if (key == "pulse.alpha") {
    c.pulse.alpha = parse_double(key, value);
  } else if (key == "pulse.chirp") {
    c.pulse.chirp = parse_double(key, value);
  } else if (key == "pulse.energy") {
    c.pulse.energy = parse_double(key, value);
  } else if (key == "analysis.distance") {
    c.analysis.distance = parse_double(key, value);
  } else if (key == "analysis.periods") {
    c.analysis.periods = parse_double(key, value);
  } else if (key == "analysis.samples") {
    c.analysis.samples = parse_size(key, value);
  } else if (key == "analysis.theta_points") {
    c.analysis.theta_points = parse_size(key, value);
  } else {
    return false;
  }
  return true;
}

void apply_global_key(ExperimentConfig& e, const std::string& key, const std::string& value) {
  if (apply_curve_key(e.base, key, value)) return;
  if (key == "run.name") {
    e.run_name = value;
  } else if (key == "output.dir") {
    e.output_dir = value;
  } else if (key == "output.export_stride") {
    e.export_stride = parse_size(key, value);
  } else if (key == "runtime.threads") {
    e.threads = static_cast<unsigned>(parse_size(key, value));
  } else if (key == "validate.distance") {
    e.validate_distance = parse_double(key, value);
  } else if (key == "validate.pairs") {
    e.validate_pairs = parse_size(key, value);
  } else if (key == "family.gammas") {
    e.family.gammas = parse_double_list(key, value);
  } else if (key == "family.amplitude_min") {
    e.family.amplitude_min = parse_double(key, value);
  } else if (key == "family.amplitude_max") {
    e.family.amplitude_max = parse_double(key, value);
  } else if (key == "family.points") {
    e.family.points = parse_size(key, value);
  } else if (key == "family.marker_taus") {
    e.family.marker_taus = parse_double_list(key, value);
  } else {
    throw config_error("unknown config key: " + key);
  }
}

void validate_curve(const CurveConfig& c) {
  try {
    validate(c.params);
    // Grid and integrator preconditions surface before any compute.
    TimeGrid probe(c.grid.n, c.grid.t_span);
  } catch (const std::exception& err) {
    throw config_error(std::string("invalid configuration: ") + err.what());
  }
  if (!(c.integrator.dz > 0.0)) throw config_error("integrator.dz must be positive");
  if (!(c.integrator.divergence_factor > 1.0)) {
    throw config_error("integrator.divergence_factor must exceed 1");
  }
  if (c.analysis.samples < 2) throw config_error("analysis.samples must be >= 2");
  if (c.analysis.distance && c.analysis.periods) {
    throw config_error("set analysis.distance or analysis.periods, not both");
  }
}

// Pulse completeness is checked lazily so commands that never build a pulse
// (family) accept configs without one.
void validate_pulse_spec(const CurveConfig& c) {
  const auto& p = c.pulse;
  if (p.type == PulseConfig::Type::soliton) {
    const int ways = int(p.beta.has_value()) + int(p.amplitude.has_value()) +
                     int(p.tau.has_value());
    if (ways != 1) {
      throw config_error("soliton pulse needs exactly one of pulse.beta, pulse.amplitude, pulse.tau");
    }
    if (p.tau && p.branch.empty()) {
      throw config_error("pulse.tau needs pulse.branch (lower or upper)");
    }
  } else {
    if (!p.alpha) throw config_error("gaussian pulse needs pulse.alpha");
    if (!(p.amplitude.has_value() ^ p.energy.has_value())) {
      throw config_error("gaussian pulse needs exactly one of pulse.amplitude, pulse.energy");
    }
  }
}

}  // namespace

ExperimentConfig load_experiment(const cfg::Document& doc) {
  ExperimentConfig e;
  e.document = doc;
  e.config_hash = cfg::hash_hex(doc);
  for (const auto& entry : doc.globals) apply_global_key(e, entry.key, entry.value);
  validate_curve(e.base);
  e.base.name = e.run_name;

  for (const auto& section : doc.sections) {
    CurveConfig c = e.base;
    c.name = section.name;
    for (const auto& entry : section.entries) {
      if (!apply_curve_key(c, entry.key, entry.value)) {
        throw config_error("unknown curve key in [curve " + section.name + "]: " + entry.key);
      }
    }
    validate_curve(c);
    e.curves.push_back(std::move(c));
  }
  return e;
}

ResolvedPulse resolve_pulse(const CurveConfig& curve, const GridPtr& grid) {
  validate_pulse_spec(curve);
  const auto& p = curve.pulse;
  char summary[160];
  if (p.type == PulseConfig::Type::soliton) {
    double beta;
    if (p.beta) {
      beta = *p.beta;
    } else if (p.amplitude) {
      beta = beta_from_amplitude(curve.params, *p.amplitude);
    } else {
      const auto roots = solve_bistable_amplitudes(curve.params, *p.tau);
      if (roots.empty()) {
        throw std::domain_error("no soliton exists at the requested pulsewidth");
      }
      double amp;
      if (p.branch == "lower") {
        amp = roots.front();
      } else {
        if (roots.size() < 2) {
          throw std::domain_error("requested upper branch but the width relation has a single root");
        }
        amp = roots.back();
      }
      beta = beta_from_amplitude(curve.params, amp);
    }
    SolitonSpec spec{curve.params, beta};
    const double amp = std::sqrt(peak_power(spec));
    std::snprintf(summary, sizeof summary,
                  "soliton beta=%.6g amplitude=%.6g chi=%g gamma=%g", beta, amp,
                  curve.params.chi, curve.params.gamma);
    return {soliton_profile(spec, grid), beta, std::numbers::pi / (2.0 * beta), summary};
  }

  const double alpha = *p.alpha;
  const double amplitude = p.amplitude ? *p.amplitude : std::sqrt(*p.energy / alpha);
  GaussianSpec spec{amplitude, alpha, p.chirp};
  // Period normalization from the equal-rms-width NLSE soliton.
  const double beta_conv = std::numbers::pi * std::numbers::pi / (6.0 * alpha * alpha);
  std::snprintf(summary, sizeof summary,
                "gaussian amplitude=%.6g alpha=%.6g chirp=%g energy=%.6g", amplitude,
                alpha, p.chirp, spec.energy());
  return {gaussian_pulse(spec, grid), beta_conv,
          std::numbers::pi / (2.0 * beta_conv), summary};
}

double resolve_length(const CurveConfig& curve, const ResolvedPulse& pulse) {
  if (curve.analysis.distance) return *curve.analysis.distance;
  if (curve.analysis.periods) return *curve.analysis.periods * pulse.soliton_period;
  throw config_error("set analysis.distance or analysis.periods");
}

}  // namespace cqs
