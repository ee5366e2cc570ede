#pragma once

#include <span>
#include <vector>

#include "cqs/linearized.hpp"
#include "cqs/propagate.hpp"

namespace cqs {

/// Homodyne local-oscillator projection: U_L e^{i theta} normalized to unit
/// l2_norm_sq. Throws std::invalid_argument for a zero field.
ComplexField local_oscillator(const ComplexField& U_L, double theta);

/// Vacuum-level variance of the pairing observable for coherent input:
/// var[<f|u>] = l2_norm_sq(f)/4.
double coherent_variance(const ComplexField& f);

/// R(theta) = a cos^2 + b sin^2 + 2 c sin cos, built from the two
/// back-propagated quadrature projections (real-linearity of the adjoint
/// flow makes the pair span every local-oscillator phase).
struct QuadratureForm {
  double a = 1.0;
  double b = 1.0;
  double c = 0.0;

  double r_at(double theta) const;
  /// R_max * R_min equals this determinant identically.
  double det() const { return a * b - c * c; }
};

struct OptimalSqueezing {
  double r_opt = 1.0;
  /// Optimizing phase in [0, pi); ties resolve to the smaller angle.
  double theta_opt = 0.0;
};

QuadratureForm quadrature_form(const ComplexField& f0_q1, const ComplexField& f0_q2);
OptimalSqueezing minimize(const QuadratureForm& form);
OptimalSqueezing optimal_squeezing(const ComplexField& f0_q1, const ComplexField& f0_q2);

/// Optimal squeezing ratio sampled along a propagation run.
struct SqueezingCurve {
  double soliton_period = 0.0;
  std::vector<double> z;
  std::vector<double> z_periods;
  std::vector<double> r_opt;
  std::vector<double> r_opt_db;
  std::vector<double> theta_opt;
};

/// Propagates once, then runs two quadrature back-propagations per sample.
/// n_samples >= 2 points span [0, L] (snapped to checkpointed steps; the z=0
/// sample is the exact identity, R = 1). Each curve cross-checks the
/// quadratic form against one direct back-propagation at a deterministic
/// pseudo-random phase and throws std::runtime_error on mismatch.
SqueezingCurve squeezing_curve(const ComplexField& initial, const CqParams& params,
                               double L, std::size_t n_samples, const StepConfig& cfg,
                               double soliton_period, unsigned threads = 0);

/// Same, over an existing trajectory.
SqueezingCurve squeezing_curve(const Trajectory& traj, std::size_t n_samples,
                               double soliton_period, unsigned threads = 0);

struct ThetaScan {
  std::vector<double> theta;
  std::vector<double> r;
  QuadratureForm form;
};

/// R(theta) over the grid at the end of the run, from the two-quadrature form.
ThetaScan theta_scan(const ComplexField& initial, const CqParams& params, double L,
                     std::span<const double> theta_grid, const StepConfig& cfg);
ThetaScan theta_scan(const Trajectory& traj, std::span<const double> theta_grid);

}  // namespace cqs
