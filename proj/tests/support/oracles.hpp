#pragma once

// Independent oracles used by the unit and acceptance suites. Everything in
// here recomputes expectations through a different route than the library
// implementation it checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "cqs/field.hpp"
#include "cqs/pulse.hpp"
#include "cqs/squeezing.hpp"

namespace oracle {

using cqs::Complex;

// Direct-summation realization of the pairing integral.
inline double naive_inner_product_real(const cqs::ComplexField& f,
                                       const cqs::ComplexField& g) {
  double acc = 0.0;
  for (std::size_t j = 0; j < f.size(); ++j) {
    acc += 0.5 * (std::conj(f[j]) * g[j] + f[j] * std::conj(g[j])).real();
  }
  return acc * f.grid()->dt();
}

// Quadratic-time DFT with the library's sign convention.
inline std::vector<Complex> naive_dft(std::span<const Complex> in) {
  const std::size_t n = in.size();
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(j) *
                           static_cast<double>(k) / static_cast<double>(n);
      acc += in[j] * Complex(std::cos(phase), std::sin(phase));
    }
    out[k] = acc;
  }
  return out;
}

// Coherent-state variance from the discrete-mode expansion: u(t_j) = a_j/sqrt(dt)
// with [a_j, a_k^dag] = delta_jk. The observable <f|u> expands into
// X = sum_j (c_j a_j + d_j a_j^dag); over vacuum fluctuations only the
// <a_j a_k^dag> contraction survives.
inline double brute_force_coherent_variance(const cqs::ComplexField& f) {
  const double dt = f.grid()->dt();
  const std::size_t n = f.size();
  std::vector<Complex> c(n), d(n);
  for (std::size_t j = 0; j < n; ++j) {
    c[j] = 0.5 * std::conj(f[j]) * std::sqrt(dt);
    d[j] = 0.5 * f[j] * std::sqrt(dt);
  }
  Complex var{0.0, 0.0};
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      const double contraction = (j == k) ? 1.0 : 0.0;  // <0| a_j a_k^dag |0>
      var += c[j] * d[k] * contraction;
    }
  }
  return var.real();
}

// Dense grid search over theta with one parabolic refinement step.
inline double grid_search_min_r(const cqs::QuadratureForm& form, int npts = 10000) {
  int best = 0;
  double best_r = form.r_at(0.0);
  const double h = std::numbers::pi / npts;
  for (int i = 1; i < npts; ++i) {
    const double r = form.r_at(h * i);
    if (r < best_r) {
      best_r = r;
      best = i;
    }
  }
  const double rm = form.r_at(h * (best - 1));
  const double rp = form.r_at(h * (best + 1));
  const double denom = rm - 2.0 * best_r + rp;
  const double delta = denom != 0.0 ? 0.5 * (rm - rp) / denom : 0.0;
  return form.r_at(h * best + delta * h);
}

// Box-Muller normal deviate from the raw engine (keeps the stream identical
// across standard libraries).
inline double gauss(std::mt19937_64& rng) {
  const double u1 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
  const double u2 = (static_cast<double>(rng() >> 11) + 0.5) / 9007199254740992.0;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Unit-norm random field, band-limited by a Gaussian spectral envelope.
inline cqs::ComplexField smooth_random_field(const cqs::GridPtr& grid,
                                             std::mt19937_64& rng,
                                             double spectral_width = 8.0) {
  cqs::ComplexField spec(grid);
  const auto omega = grid->omega();
  for (std::size_t k = 0; k < grid->size(); ++k) {
    const double env =
        std::exp(-omega[k] * omega[k] / (2.0 * spectral_width * spectral_width));
    spec[k] = Complex(gauss(rng), gauss(rng)) * env;
  }
  cqs::ComplexField f = cqs::from_spectrum(spec);
  const double norm = cqs::l2_norm_sq(f);
  for (auto& v : f.values()) v /= std::sqrt(norm);
  return f;
}

// Unit-norm white-noise field (all spectral content).
inline cqs::ComplexField white_random_field(const cqs::GridPtr& grid,
                                            std::mt19937_64& rng) {
  cqs::ComplexField f(grid);
  for (auto& v : f.values()) v = Complex(gauss(rng), gauss(rng));
  const double norm = cqs::l2_norm_sq(f);
  for (auto& v : f.values()) v /= std::sqrt(norm);
  return f;
}

// Closed-form inversion of the peak-power relation (solves
// sqrt(1+4 g b) = 2b/A^2 - chi for b): beta = chi A^2 + gamma A^4.
inline double beta_closed_form(const cqs::CqParams& p, double amplitude) {
  const double a2 = amplitude * amplitude;
  return p.chi * a2 + p.gamma * a2 * a2;
}

// Free-dispersion evolution of A exp(-t^2/(2 alpha^2)) under i u_z + u_tt = 0.
inline Complex free_gaussian(double amplitude, double alpha, double z, double t) {
  const Complex sigma(alpha * alpha, 2.0 * z);
  return amplitude * std::sqrt(Complex(alpha * alpha, 0.0) / sigma) *
         std::exp(-t * t / (2.0 * sigma));
}

}  // namespace oracle
