#include "cqs/squeezing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cqs/parallel.hpp"

namespace cqs {

ComplexField local_oscillator(const ComplexField& U_L, double theta) {
  const double norm = l2_norm_sq(U_L);
  if (!(norm > 0.0)) {
    throw std::invalid_argument("local_oscillator: zero field");
  }
  const Complex scale = std::polar(1.0 / std::sqrt(norm), theta);
  ComplexField out = U_L;
  for (auto& v : out.values()) v *= scale;
  return out;
}

double coherent_variance(const ComplexField& f) { return 0.25 * l2_norm_sq(f); }

double QuadratureForm::r_at(double theta) const {
  const double ct = std::cos(theta);
  const double st = std::sin(theta);
  return a * ct * ct + b * st * st + 2.0 * c * st * ct;
}

QuadratureForm quadrature_form(const ComplexField& f0_q1, const ComplexField& f0_q2) {
  return {l2_norm_sq(f0_q1), l2_norm_sq(f0_q2), inner_product_real(f0_q1, f0_q2)};
}

OptimalSqueezing minimize(const QuadratureForm& form) {
  const double mean = 0.5 * (form.a + form.b);
  const double p = 0.5 * (form.a - form.b);
  const double r = std::hypot(p, form.c);
  double theta = 0.0;
  if (r > 0.0) {
    theta = 0.5 * std::atan2(-form.c, -p);
    if (theta < 0.0) theta += std::numbers::pi;
    if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  }
  return {mean - r, theta};
}

OptimalSqueezing optimal_squeezing(const ComplexField& f0_q1, const ComplexField& f0_q2) {
  return minimize(quadrature_form(f0_q1, f0_q2));
}

namespace {

// Two quadrature back-propagations from the given stored step.
QuadratureForm form_at_step(const Trajectory& traj, std::size_t step) {
  const ComplexField& U_L = traj.field_at_step(step);
  const ComplexField f1 = local_oscillator(U_L, 0.0);
  const ComplexField f2 = local_oscillator(U_L, 0.5 * std::numbers::pi);
  const ComplexField f01 = back_propagate(f1, traj, 0, step);
  const ComplexField f02 = back_propagate(f2, traj, 0, step);
  return quadrature_form(f01, f02);
}

// Deterministic phase in [0, 2 pi) for the per-curve self-check.
double check_phase(std::size_t n_steps, std::size_t n_samples) {
  std::uint64_t x = 0x9e3779b97f4a7c15ull ^ (n_steps * 0x85ebca77c2b2ae63ull) ^
                    (n_samples * 0xc2b2ae3d27d4eb4full);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  return 2.0 * std::numbers::pi *
         (static_cast<double>(x >> 11) / 9007199254740992.0);
}

std::vector<std::size_t> sample_steps(const Trajectory& traj, std::size_t n_samples) {
  if (n_samples < 2) throw std::invalid_argument("squeezing_curve: n_samples must be >= 2");
  const std::size_t n_steps = traj.n_steps();
  std::vector<std::size_t> steps;
  steps.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double z = traj.length() * static_cast<double>(i) /
                     static_cast<double>(n_samples - 1);
    steps.push_back(traj.nearest_stored_step(z));
  }
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

}  // namespace

SqueezingCurve squeezing_curve(const Trajectory& traj, std::size_t n_samples,
                               double soliton_period, unsigned threads) {
  const auto steps = sample_steps(traj, n_samples);
  SqueezingCurve curve;
  curve.soliton_period = soliton_period;
  curve.z.resize(steps.size());
  curve.z_periods.resize(steps.size());
  curve.r_opt.resize(steps.size());
  curve.r_opt_db.resize(steps.size());
  curve.theta_opt.resize(steps.size());

  parallel_for(steps.size(), threads, [&](std::size_t i) {
    const std::size_t step = steps[i];
    const double z = traj.dz() * static_cast<double>(step);
    double r = 1.0;
    double theta = 0.0;
    if (step > 0) {
      const OptimalSqueezing opt = minimize(form_at_step(traj, step));
      r = opt.r_opt;
      theta = opt.theta_opt;
    }
    curve.z[i] = z;
    curve.z_periods[i] = soliton_period > 0.0 ? z / soliton_period : 0.0;
    curve.r_opt[i] = r;
    curve.r_opt_db[i] = 10.0 * std::log10(r);
    curve.theta_opt[i] = theta;
  });

  // Cross-check the two-quadrature decomposition against one direct
  // back-propagation at an arbitrary reproducible phase.
  const std::size_t check_step = steps.back();
  if (check_step > 0) {
    const double theta = check_phase(traj.n_steps(), n_samples);
    const QuadratureForm form = form_at_step(traj, check_step);
    const ComplexField f_theta = local_oscillator(traj.field_at_step(check_step), theta);
    const ComplexField f0 = back_propagate(f_theta, traj, 0, check_step);
    const double direct = l2_norm_sq(f0);
    const double from_form = form.r_at(theta);
    if (std::abs(direct - from_form) > 1e-8 * std::max(1.0, std::abs(direct))) {
      throw std::runtime_error(
          "squeezing_curve: quadrature decomposition disagrees with direct back-propagation");
    }
  }
  return curve;
}

SqueezingCurve squeezing_curve(const ComplexField& initial, const CqParams& params,
                               double L, std::size_t n_samples, const StepConfig& cfg,
                               double soliton_period, unsigned threads) {
  const Trajectory traj = propagate(initial, params, L, cfg);
  return squeezing_curve(traj, n_samples, soliton_period, threads);
}

ThetaScan theta_scan(const Trajectory& traj, std::span<const double> theta_grid) {
  ThetaScan scan;
  scan.form = traj.n_steps() > 0 ? form_at_step(traj, traj.n_steps())
                                 : QuadratureForm{};
  scan.theta.assign(theta_grid.begin(), theta_grid.end());
  scan.r.resize(scan.theta.size());
  for (std::size_t i = 0; i < scan.theta.size(); ++i) {
    scan.r[i] = scan.form.r_at(scan.theta[i]);
  }
  return scan;
}

ThetaScan theta_scan(const ComplexField& initial, const CqParams& params, double L,
                     std::span<const double> theta_grid, const StepConfig& cfg) {
  const Trajectory traj = propagate(initial, params, L, cfg);
  return theta_scan(traj, theta_grid);
}

}  // namespace cqs
