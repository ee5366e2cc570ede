#include "cqs/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cqs {

namespace {

constexpr double kResidualTol = 1e-12;

double sqr(double x) { return x * x; }

// tau(A) where the width relation is solvable, NaN otherwise.
double tau_of_amplitude(const CqParams& p, double a) {
  const double a2 = a * a;
  const double arg = p.chi * a2 + p.gamma * a2 * a2;
  const double den = p.chi + 2.0 * p.gamma * a2;
  if (!(arg > 0.0) || den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double rhs = (3.0 * p.chi + 4.0 * p.gamma * a2) / den;
  if (!(rhs >= 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return 2.0 * std::acosh(rhs) / std::sqrt(arg);
}

double amplitude_window_upper(const CqParams& p) {
  // chi + 2 gamma A^2 > 0 bounds the admissible amplitudes when gamma < 0.
  if (p.gamma < 0.0 && p.chi > 0.0) {
    return std::sqrt(-p.chi / (2.0 * p.gamma)) * (1.0 - 1e-9);
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

void validate(const CqParams& params) {
  if (params.chi != 1.0 && params.chi != -1.0) {
    throw std::invalid_argument("CqParams: chi must be +1 or -1");
  }
  if (!std::isfinite(params.gamma)) {
    throw std::invalid_argument("CqParams: gamma must be finite");
  }
}

double peak_power(const SolitonSpec& spec) {
  validate(spec.params);
  const double disc = 1.0 + 4.0 * spec.params.gamma * spec.beta;
  if (!(spec.beta > 0.0) || !(disc > 0.0)) {
    throw std::domain_error("soliton existence condition 1 + 4 gamma beta > 0 violated");
  }
  return 2.0 * spec.beta / (std::sqrt(disc) + spec.params.chi);
}

ComplexField soliton_profile(const SolitonSpec& spec, const GridPtr& grid) {
  validate(spec.params);
  const double disc = 1.0 + 4.0 * spec.params.gamma * spec.beta;
  if (!(spec.beta > 0.0) || !(disc > 0.0)) {
    throw std::domain_error("soliton existence condition 1 + 4 gamma beta > 0 violated");
  }
  const double s = std::sqrt(disc);
  const double two_sqrt_beta = 2.0 * std::sqrt(spec.beta);
  ComplexField out(grid);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double den = s * std::cosh(two_sqrt_beta * grid->t(j)) + spec.params.chi;
    if (!(den > 0.0)) {
      throw std::domain_error("soliton denominator nonpositive on the grid");
    }
    out[j] = std::sqrt(2.0 * spec.beta / den);
  }
  return out;
}

double beta_from_amplitude(const CqParams& params, double amplitude) {
  validate(params);
  if (!(amplitude > 0.0)) {
    throw std::domain_error("beta_from_amplitude: amplitude must be positive");
  }
  const double target = amplitude * amplitude;
  const auto residual = [&](double beta) {
    return peak_power({params, beta}) - target;
  };

  double lo = 1e-12;
  double hi;
  if (params.gamma < 0.0) {
    hi = (1.0 - 1e-12) / (-4.0 * params.gamma);
  } else {
    hi = 1.0;
    int guard = 0;
    while (residual(hi) < 0.0 && guard++ < 200) hi *= 2.0;
  }
  double flo = residual(lo);
  double fhi = residual(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw std::domain_error("beta_from_amplitude: no admissible root in bracket");
  }
  for (int i = 0; i < 200 && std::abs(fhi - flo) > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = residual(mid);
    if (std::abs(fmid) < kResidualTol && (hi - lo) < 1e-12 * std::max(1.0, mid)) {
      return mid;
    }
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  return 0.5 * (lo + hi);
}

double width_amplitude_residual(const CqParams& params, double amplitude, double tau) {
  validate(params);
  const double a2 = amplitude * amplitude;
  const double arg = params.chi * a2 + params.gamma * a2 * a2;
  if (!(arg > 0.0)) {
    throw std::domain_error("width relation: chi A^2 + gamma A^4 must be positive");
  }
  const double den = params.chi + 2.0 * params.gamma * a2;
  if (den == 0.0) {
    throw std::domain_error("width relation: chi + 2 gamma A^2 vanishes");
  }
  const double rhs = (3.0 * params.chi + 4.0 * params.gamma * a2) / den;
  return std::cosh(0.5 * tau * std::sqrt(arg)) - rhs;
}

std::vector<double> solve_bistable_amplitudes(const CqParams& params, double tau) {
  validate(params);
  if (!(tau > 0.0)) return {};

  double hi = amplitude_window_upper(params);
  if (!std::isfinite(hi)) {
    // Residual grows with A once the cosh dominates; expand until positive.
    hi = 1.0;
    int guard = 0;
    while (guard++ < 200) {
      double r;
      try {
        r = width_amplitude_residual(params, hi, tau);
      } catch (const std::domain_error&) {
        break;
      }
      if (r > 0.0) break;
      hi *= 2.0;
    }
  }

  const double lo = 1e-6;
  if (!(hi > lo)) return {};

  const auto safe_residual = [&](double a) {
    try {
      return width_amplitude_residual(params, a, tau);
    } catch (const std::domain_error&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };

  // Log-spaced scan, then bisection on each sign change.
  constexpr int kScan = 4096;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  std::vector<double> roots;
  double a_prev = lo;
  double r_prev = safe_residual(a_prev);
  for (int i = 1; i <= kScan; ++i) {
    const double a = std::exp(log_lo + (log_hi - log_lo) * i / kScan);
    const double r = safe_residual(a);
    if (std::isfinite(r_prev) && std::isfinite(r) && r_prev * r < 0.0) {
      double x0 = a_prev, x1 = a, f0 = r_prev;
      for (int it = 0; it < 200; ++it) {
        const double xm = 0.5 * (x0 + x1);
        const double fm = safe_residual(xm);
        if (!std::isfinite(fm)) break;
        if (f0 * fm <= 0.0) {
          x1 = xm;
        } else {
          x0 = xm;
          f0 = fm;
        }
        if (std::abs(fm) < 1e-10 && (x1 - x0) < 1e-13 * std::max(1.0, xm)) break;
      }
      const double root = 0.5 * (x0 + x1);
      if (roots.empty() || std::abs(root - roots.back()) > 1e-9) roots.push_back(root);
    }
    a_prev = a;
    r_prev = r;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

TurningPoint min_width(const CqParams& params) {
  validate(params);
  if (!(params.chi > 0.0) || !(params.gamma < 0.0)) {
    throw std::domain_error("min_width: turning point requires chi = +1, gamma < 0");
  }
  const double hi = amplitude_window_upper(params);
  double a = 1e-4, b = hi;
  // Golden-section minimization of tau(A); the curve is unimodal on the
  // admissible window, diverging at both endpoints.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = tau_of_amplitude(params, c);
  double fd = tau_of_amplitude(params, d);
  for (int i = 0; i < 400 && (b - a) > 1e-12; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = tau_of_amplitude(params, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = tau_of_amplitude(params, d);
    }
  }
  const double amin = 0.5 * (a + b);
  return {tau_of_amplitude(params, amin), amin};
}

std::vector<FamilyPoint> family_curve(const CqParams& params,
                                      std::span<const double> amplitudes) {
  validate(params);
  std::vector<FamilyPoint> out;
  out.reserve(amplitudes.size());
  for (double a : amplitudes) {
    if (!(a > 0.0)) continue;
    const double tau = tau_of_amplitude(params, a);
    if (std::isfinite(tau)) out.push_back({a, tau});
  }
  return out;
}

ComplexField gaussian_pulse(const GaussianSpec& spec, const GridPtr& grid) {
  if (!(spec.width > 0.0)) {
    throw std::invalid_argument("gaussian_pulse: width must be positive");
  }
  ComplexField out(grid);
  const double inv2a2 = 1.0 / (2.0 * spec.width * spec.width);
  for (std::size_t j = 0; j < grid->size(); ++j) {
    const double t = grid->t(j);
    const double mag = spec.amplitude * std::exp(-t * t * inv2a2);
    const double phase = spec.chirp * t * t;
    out[j] = Complex(mag * std::cos(phase), mag * std::sin(phase));
  }
  return out;
}

double fwhm_from_profile(const ComplexField& f) {
  const std::size_t n = f.size();
  std::vector<double> p(n);
  for (std::size_t j = 0; j < n; ++j) p[j] = std::norm(f[j]);
  const std::size_t jpeak = static_cast<std::size_t>(
      std::max_element(p.begin(), p.end()) - p.begin());
  if (jpeak == 0 || jpeak + 1 == n) {
    throw std::invalid_argument("fwhm_from_profile: peak must be interior to the grid");
  }
  const double half = 0.5 * p[jpeak];
  const auto& grid = *f.grid();

  const auto cross = [&](bool right) {
    std::size_t j = jpeak;
    while (true) {
      const std::size_t next = right ? j + 1 : j - 1;
      if (next == 0 || next >= n - 1) {
        if (p[next] > half) {
          throw std::invalid_argument("fwhm_from_profile: profile does not fall to half maximum");
        }
      }
      if (p[next] <= half) {
        const double t0 = grid.t(j), t1 = grid.t(next);
        const double frac = (p[j] - half) / (p[j] - p[next]);
        return t0 + frac * (t1 - t0);
      }
      j = next;
      if (j == 0 || j == n - 1) {
        throw std::invalid_argument("fwhm_from_profile: profile does not fall to half maximum");
      }
    }
  };

  return cross(true) - cross(false);
}

}  // namespace cqs
