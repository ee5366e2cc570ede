#pragma once

#include <span>
#include <vector>

#include "cqs/field.hpp"

namespace cqs {

/// Nonlinearity coefficients of the cubic-quintic equation
///   i u_z + u_tt + 2 chi |u|^2 u + 3 gamma |u|^4 u = 0.
/// The cubic coefficient is normalized: chi is +1 or -1.
struct CqParams {
  double chi = 1.0;
  double gamma = 0.0;
};

/// Throws std::invalid_argument unless chi is exactly +1 or -1 and gamma is
/// finite.
void validate(const CqParams& params);

/// Exact soliton of the cubic-quintic equation, parametrized by the
/// propagation constant beta > 0 (existence requires 1 + 4*gamma*beta > 0):
///   u(0,t) = sqrt(2 beta / (sqrt(1+4 gamma beta) cosh(2 sqrt(beta) t) + chi)).
struct SolitonSpec {
  CqParams params;
  double beta = 1.0;
};

/// Gaussian ansatz pulse A exp(-t^2/(2 alpha^2) + i a t^2) with width alpha,
/// chirp a, and energy E0 = alpha A^2.
struct GaussianSpec {
  double amplitude = 1.0;
  double width = 1.0;
  double chirp = 0.0;

  double energy() const { return width * amplitude * amplitude; }
};

/// Peak power A^2 = 2 beta / (sqrt(1+4 gamma beta) + chi).
/// Throws std::domain_error if the existence condition fails.
double peak_power(const SolitonSpec& spec);

/// Samples the exact soliton on the grid. Throws std::domain_error if the
/// existence condition fails or the denominator is nonpositive anywhere.
ComplexField soliton_profile(const SolitonSpec& spec, const GridPtr& grid);

/// Inverts the peak-power relation for beta by bracketed bisection,
/// |peak_power(beta) - A^2| < 1e-12. Throws std::domain_error when no
/// admissible root exists.
double beta_from_amplitude(const CqParams& params, double amplitude);

/// cosh(0.5 tau sqrt(chi A^2 + gamma A^4)) - (3 chi + 4 gamma A^2)/(chi + 2 gamma A^2).
/// Throws std::domain_error when the square-root argument is nonpositive or
/// the right-hand side denominator vanishes.
double width_amplitude_residual(const CqParams& params, double amplitude, double tau);

/// All amplitudes A > 0 solving the width relation at the given pulsewidth,
/// restricted to the admissible window chi + 2 gamma A^2 > 0, ascending.
/// Returns 0, 1 or 2 values; empty below the minimum width.
std::vector<double> solve_bistable_amplitudes(const CqParams& params, double tau);

struct TurningPoint {
  double tau_min;
  double amplitude;
};

/// Minimum admissible pulsewidth of the soliton family (fold of the
/// amplitude-width curve). Requires chi = +1, gamma < 0; throws
/// std::domain_error otherwise.
TurningPoint min_width(const CqParams& params);

struct FamilyPoint {
  double amplitude;
  double tau;
};

/// Width tau(A) for every admissible amplitude in the input; inadmissible
/// rows are omitted.
std::vector<FamilyPoint> family_curve(const CqParams& params,
                                      std::span<const double> amplitudes);

/// Samples the Gaussian ansatz on the grid; l2_norm_sq equals
/// amplitude^2 * width * sqrt(pi) up to grid truncation.
ComplexField gaussian_pulse(const GaussianSpec& spec, const GridPtr& grid);

/// Full width at half maximum of |f(t)|^2 by linear interpolation between
/// samples. Requires a single-peaked intensity profile with the peak in the
/// grid interior.
double fwhm_from_profile(const ComplexField& f);

}  // namespace cqs
