#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <json.hpp>

#include "cqs/csv.hpp"
#include "cqs/linearized.hpp"
#include "cqs/parallel.hpp"
#include "cqs/pulse.hpp"
#include "cqs/squeezing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cqstool {

namespace {

json manifest_skeleton(const cqs::ExperimentConfig& cfg, const std::string& command) {
  json m;
  m["tool"] = "cqsqueeze";
  m["command"] = command;
  m["run"] = cfg.run_name;
  m["config_hash"] = cfg.config_hash;
  m["config"] = cqs::cfg::serialize(cfg.document);
  m["conventions"]["soliton_period"] = "z_sp = pi/(2*beta)";
  m["conventions"]["gaussian_period_beta"] =
      "beta = pi^2/(6*alpha^2), the equal-rms-width NLSE soliton";
  m["outputs"] = json::array();
  return m;
}

void add_output(json& manifest, const fs::path& file, const std::string& kind,
                const std::string& curve = "") {
  json row;
  row["file"] = file.string();
  row["kind"] = kind;
  row["config_hash"] = manifest["config_hash"];
  row["soliton_period_convention"] = manifest["conventions"]["soliton_period"];
  if (!curve.empty()) row["curve"] = curve;
  manifest["outputs"].push_back(row);
}

void write_manifest(const json& manifest, const fs::path& dir) {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << "\n";
}

std::string gamma_tag(double gamma) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", gamma);
  return buf;
}

}  // namespace

int cmd_family(const cqs::ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  json manifest = manifest_skeleton(cfg, "family");

  std::vector<double> gammas = cfg.family.gammas;
  if (gammas.empty()) gammas.push_back(cfg.base.params.gamma);

  const std::vector<std::string> family_cols{"amplitude", "tau"};
  const std::vector<std::string> turning_cols{"gamma", "tau_min", "amplitude"};
  const std::vector<std::string> marker_cols{"gamma", "tau", "amplitude", "branch"};

  cqs::csvio::Writer turning(dir / "turning_points.csv", turning_cols);
  cqs::csvio::Writer markers(dir / "markers.csv", marker_cols);
  add_output(manifest, dir / "turning_points.csv", "turning_points");
  add_output(manifest, dir / "markers.csv", "bistable_markers");

  for (double gamma : gammas) {
    cqs::CqParams params{cfg.base.params.chi, gamma};

    double amax = cfg.family.amplitude_max;
    if (amax <= 0.0) {
      amax = (gamma < 0.0 && params.chi > 0.0)
                 ? std::sqrt(-params.chi / (2.0 * gamma)) * (1.0 - 1e-6)
                 : 3.0;
    }
    std::vector<double> amplitudes(cfg.family.points);
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
      amplitudes[i] = cfg.family.amplitude_min +
                      (amax - cfg.family.amplitude_min) * static_cast<double>(i) /
                          static_cast<double>(amplitudes.size() - 1);
    }
    const auto rows = cqs::family_curve(params, amplitudes);

    const fs::path file = dir / ("family_gamma_" + gamma_tag(gamma) + ".csv");
    cqs::csvio::Writer w(file, family_cols);
    for (const auto& r : rows) {
      const double row[2] = {r.amplitude, r.tau};
      w.row(row);
    }
    add_output(manifest, file, "family_curve");

    if (gamma < 0.0 && params.chi > 0.0) {
      const auto tp = cqs::min_width(params);
      const double row[3] = {gamma, tp.tau_min, tp.amplitude};
      turning.row(row);
    }

    for (double tau : cfg.family.marker_taus) {
      const auto roots = cqs::solve_bistable_amplitudes(params, tau);
      for (std::size_t i = 0; i < roots.size(); ++i) {
        const double row[4] = {gamma, tau, roots[i], static_cast<double>(i)};
        markers.row(row);
      }
    }
  }

  write_manifest(manifest, dir);
  return kExitOk;
}

int cmd_propagate(const cqs::ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  json manifest = manifest_skeleton(cfg, "propagate");
  json curves = json::array();

  for (const auto& curve : cfg.effective_curves()) {
    const auto grid = cqs::make_grid(curve.grid.n, curve.grid.t_span);
    const auto pulse = cqs::resolve_pulse(curve, grid);
    const double L = cqs::resolve_length(curve, pulse);
    const auto traj =
        cqs::propagate(pulse.field, curve.params, L, curve.integrator.step_config());

    const fs::path cdir = dir / curve.name;
    std::size_t stride = cfg.export_stride;
    if (stride == 0) {
      stride = std::max<std::size_t>(1, traj.checkpoint_count() / 100);
    }

    const std::vector<std::string> log_cols{"z", "photon_number", "hamiltonian"};
    cqs::csvio::Writer log(cdir / "conserved_log.csv", log_cols);
    for (std::size_t i = 0; i < traj.checkpoint_count(); ++i) {
      const double row[3] = {traj.z_at(i), traj.photon_log()[i], traj.hamiltonian_log()[i]};
      log.row(row);
      if (i % stride == 0 || i + 1 == traj.checkpoint_count()) {
        char name[48];
        std::snprintf(name, sizeof name, "checkpoint_%08zu.csv", i);
        cqs::csvio::write_field_csv(cdir / name, traj.checkpoint(i));
      }
    }
    add_output(manifest, cdir / "conserved_log.csv", "conserved_log", curve.name);
    add_output(manifest, cdir, "checkpoint_fields", curve.name);

    json c;
    c["name"] = curve.name;
    c["pulse"] = pulse.summary;
    c["beta"] = pulse.beta;
    c["soliton_period"] = pulse.soliton_period;
    c["length"] = traj.length();
    c["dz"] = traj.dz();
    c["n_steps"] = traj.n_steps();
    c["checkpoint_stride"] = traj.stride();
    c["grid"] = {{"n", curve.grid.n}, {"t_span", curve.grid.t_span}};
    c["params"] = {{"chi", curve.params.chi}, {"gamma", curve.params.gamma}};
    c["photon_drift"] = traj.max_photon_drift();
    c["hamiltonian_drift"] = traj.max_hamiltonian_drift();
    curves.push_back(c);
  }

  manifest["curves"] = curves;
  write_manifest(manifest, dir);
  return kExitOk;
}

int cmd_squeeze(const cqs::ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  json manifest = manifest_skeleton(cfg, "squeeze");
  json curves = json::array();

  const std::vector<std::string> cols{"z", "z_in_soliton_periods", "R_opt", "R_opt_dB",
                                      "theta_opt"};

  for (const auto& curve : cfg.effective_curves()) {
    const auto grid = cqs::make_grid(curve.grid.n, curve.grid.t_span);
    const auto pulse = cqs::resolve_pulse(curve, grid);
    const double L = cqs::resolve_length(curve, pulse);
    const auto traj =
        cqs::propagate(pulse.field, curve.params, L, curve.integrator.step_config());
    const auto sc = cqs::squeezing_curve(traj, curve.analysis.samples,
                                         pulse.soliton_period, cfg.threads);

    const fs::path file = dir / (curve.name + ".csv");
    cqs::csvio::Writer w(file, cols);
    for (std::size_t i = 0; i < sc.z.size(); ++i) {
      const double row[5] = {sc.z[i], sc.z_periods[i], sc.r_opt[i], sc.r_opt_db[i],
                             sc.theta_opt[i]};
      w.row(row);
    }
    add_output(manifest, file, "squeezing_curve", curve.name);

    json c;
    c["name"] = curve.name;
    c["pulse"] = pulse.summary;
    c["beta"] = pulse.beta;
    c["soliton_period"] = pulse.soliton_period;
    c["length"] = traj.length();
    c["dz"] = traj.dz();
    c["samples"] = sc.z.size();
    c["params"] = {{"chi", curve.params.chi}, {"gamma", curve.params.gamma}};
    c["photon_drift"] = traj.max_photon_drift();
    c["hamiltonian_drift"] = traj.max_hamiltonian_drift();
    c["final_R_opt"] = sc.r_opt.back();
    curves.push_back(c);
  }

  manifest["curves"] = curves;
  write_manifest(manifest, dir);
  return kExitOk;
}

int cmd_theta_scan(const cqs::ExperimentConfig& cfg) {
  const fs::path dir = cfg.output_dir;
  json manifest = manifest_skeleton(cfg, "theta-scan");
  json curves = json::array();

  const std::vector<std::string> cols{"theta", "R"};

  for (const auto& curve : cfg.effective_curves()) {
    const auto grid = cqs::make_grid(curve.grid.n, curve.grid.t_span);
    const auto pulse = cqs::resolve_pulse(curve, grid);
    const double L = cqs::resolve_length(curve, pulse);

    std::vector<double> thetas(curve.analysis.theta_points);
    for (std::size_t i = 0; i < thetas.size(); ++i) {
      thetas[i] = 2.0 * std::numbers::pi * static_cast<double>(i) /
                  static_cast<double>(thetas.size());
    }

    const auto traj =
        cqs::propagate(pulse.field, curve.params, L, curve.integrator.step_config());
    const auto scan = cqs::theta_scan(traj, thetas);

    const fs::path file = dir / (curve.name + "_theta.csv");
    cqs::csvio::Writer w(file, cols);
    for (std::size_t i = 0; i < scan.theta.size(); ++i) {
      const double row[2] = {scan.theta[i], scan.r[i]};
      w.row(row);
    }
    add_output(manifest, file, "theta_scan", curve.name);

    const auto opt = cqs::minimize(scan.form);
    json c;
    c["name"] = curve.name;
    c["pulse"] = pulse.summary;
    c["soliton_period"] = pulse.soliton_period;
    c["length"] = L;
    c["quadrature_form"] = {{"a", scan.form.a}, {"b", scan.form.b}, {"c", scan.form.c}};
    c["R_opt"] = opt.r_opt;
    c["theta_opt"] = opt.theta_opt;
    curves.push_back(c);
  }

  manifest["curves"] = curves;
  write_manifest(manifest, dir);
  return kExitOk;
}

}  // namespace cqstool
