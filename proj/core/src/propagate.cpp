#include "cqs/propagate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"
#include "split_kernels.hpp"

namespace cqs {

namespace detail {

DispersionPhases::DispersionPhases(const TimeGrid& grid, double dz) {
  const auto omega = grid.omega();
  half.resize(omega.size());
  full.resize(omega.size());
  for (std::size_t k = 0; k < omega.size(); ++k) {
    const double w2 = omega[k] * omega[k];
    half[k] = std::polar(1.0, -0.5 * w2 * dz);
    full[k] = std::polar(1.0, -w2 * dz);
  }
}

void apply_spectral(std::vector<Complex>& u, const std::vector<Complex>& phase) {
  detail::fft_forward(u);
  for (std::size_t k = 0; k < u.size(); ++k) u[k] *= phase[k];
  detail::fft_inverse(u);
  const double scale = 1.0 / static_cast<double>(u.size());
  for (auto& v : u) v *= scale;
}

// Exact pointwise phase rotation u -> u exp(i (2 chi |u|^2 + 3 gamma |u|^4) dz).
// Returns the максимум |u|^2 encountered (used by the divergence guard).
double apply_nonlinear_phase(std::vector<Complex>& u, const CqParams& p, double dz) {
  double max_p = 0.0;
  for (auto& v : u) {
    const double power = std::norm(v);
    max_p = std::max(max_p, power);
    const double phase = (2.0 * p.chi * power + 3.0 * p.gamma * power * power) * dz;
    v *= Complex(std::cos(phase), std::sin(phase));
  }
  return max_p;
}

double classical_step_inplace(std::vector<Complex>& u, const CqParams& params,
                              const DispersionPhases& phases, double dz,
                              SplitScheme scheme) {
  double max_p;
  if (scheme == SplitScheme::strang) {
    apply_spectral(u, phases.half);
    max_p = apply_nonlinear_phase(u, params, dz);
    apply_spectral(u, phases.half);
  } else {
    apply_spectral(u, phases.full);
    max_p = apply_nonlinear_phase(u, params, dz);
  }
  return max_p;
}

}  // namespace detail

Trajectory::Trajectory(CqParams params, GridPtr grid, double dz_effective,
                       std::size_t n_steps, std::size_t stride)
    : params_(params),
      grid_(std::move(grid)),
      dz_(dz_effective),
      n_steps_(n_steps),
      stride_(stride) {}

void Trajectory::append(std::size_t step, ComplexField field, double photon,
                        double h) {
  steps_.push_back(step);
  z_.push_back(dz_ * static_cast<double>(step));
  fields_.push_back(std::move(field));
  photon_.push_back(photon);
  hamiltonian_.push_back(h);
}

std::size_t Trajectory::checkpoint_index(std::size_t step) const {
  if (step % stride_ == 0) {
    const std::size_t i = step / stride_;
    if (i < steps_.size() && steps_[i] == step) return i;
  }
  const auto it = std::lower_bound(steps_.begin(), steps_.end(), step);
  if (it == steps_.end() || *it != step) {
    throw std::invalid_argument("Trajectory: step is not checkpointed");
  }
  return static_cast<std::size_t>(it - steps_.begin());
}

std::size_t Trajectory::nearest_stored_step(double z) const {
  if (steps_.empty()) throw std::logic_error("Trajectory: empty");
  const double target = z / dz_;
  std::size_t best = steps_.front();
  double best_err = std::abs(static_cast<double>(best) - target);
  for (std::size_t s : steps_) {
    const double err = std::abs(static_cast<double>(s) - target);
    if (err < best_err) {
      best = s;
      best_err = err;
    }
  }
  return best;
}

double Trajectory::max_photon_drift() const {
  if (photon_.empty()) return 0.0;
  const double ref = photon_.front();
  double worst = 0.0;
  for (double p : photon_) worst = std::max(worst, std::abs(p - ref));
  return ref != 0.0 ? worst / std::abs(ref) : worst;
}

double Trajectory::max_hamiltonian_drift() const {
  if (hamiltonian_.empty()) return 0.0;
  const double ref = hamiltonian_.front();
  double worst = 0.0;
  for (double h : hamiltonian_) worst = std::max(worst, std::abs(h - ref));
  return ref != 0.0 ? worst / std::abs(ref) : worst;
}

ComplexField step(const ComplexField& field, const CqParams& params,
                  const StepConfig& cfg) {
  validate(params);
  if (!(cfg.dz > 0.0)) throw std::invalid_argument("step: dz must be positive");
  detail::DispersionPhases phases(*field.grid(), cfg.dz);
  ComplexField out = field;
  detail::classical_step_inplace(out.raw(), params, phases, cfg.dz, cfg.scheme);
  return out;
}

namespace {

Trajectory run(const ComplexField& start, const CqParams& params, double L,
               const StepConfig& cfg, bool backward) {
  validate(params);
  if (!(cfg.dz > 0.0)) throw std::invalid_argument("propagate: dz must be positive");
  if (L < 0.0) throw std::invalid_argument("propagate: L must be nonnegative");
  if (cfg.checkpoint_stride < 1) {
    throw std::invalid_argument("propagate: checkpoint_stride must be >= 1");
  }

  const std::size_t n = start.size();
  const std::size_t n_steps =
      L == 0.0 ? 0 : std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(L / cfg.dz)));
  const double dz_eff = n_steps == 0 ? cfg.dz : L / static_cast<double>(n_steps);

  std::size_t stride = cfg.checkpoint_stride;
  const std::uint64_t bytes_per_field = static_cast<std::uint64_t>(n) * sizeof(Complex);
  while (stride < n_steps &&
         (static_cast<std::uint64_t>(n_steps) / stride + 2) * bytes_per_field >
             cfg.memory_cap_bytes) {
    stride *= 2;
  }

  Trajectory traj(params, start.grid(), dz_eff, n_steps, stride);

  const double signed_dz = backward ? -dz_eff : dz_eff;
  detail::DispersionPhases phases(*start.grid(), signed_dz);

  const auto record = [&](std::size_t step, const ComplexField& f) {
    traj.append(step, f, photon_number(f), hamiltonian(f, params));
  };

  double peak0 = 0.0;
  for (const auto& v : start.values()) peak0 = std::max(peak0, std::norm(v));
  const double limit = peak0 * cfg.divergence_factor * cfg.divergence_factor;

  // Backward runs produce fields at descending forward-step indices; buffer
  // them so checkpoints are appended in ascending z either way.
  std::vector<std::pair<std::size_t, ComplexField>> buffer;
  const auto store = [&](std::size_t forward_step, const ComplexField& f) {
    if (!backward) {
      record(forward_step, f);
    } else {
      buffer.emplace_back(forward_step, f);
    }
  };

  store(backward ? n_steps : 0, start);

  ComplexField u = start;
  for (std::size_t k = 1; k <= n_steps; ++k) {
    const double max_p =
        detail::classical_step_inplace(u.raw(), params, phases, signed_dz, cfg.scheme);
    const double z_here = backward ? L - dz_eff * static_cast<double>(k)
                                   : dz_eff * static_cast<double>(k);
    if (!(max_p <= limit) || !std::isfinite(max_p)) {
      throw integration_diverged("field exceeded the divergence guard", z_here);
    }
    const std::size_t forward_step = backward ? n_steps - k : k;
    if (forward_step % stride == 0 || forward_step == n_steps || forward_step == 0) {
      store(forward_step, u);
    }
  }

  for (auto it = buffer.rbegin(); it != buffer.rend(); ++it) {
    record(it->first, std::move(it->second));
  }

  return traj;
}

}  // namespace

Trajectory propagate(const ComplexField& initial, const CqParams& params,
                     double L, const StepConfig& cfg) {
  return run(initial, params, L, cfg, false);
}

Trajectory propagate_backward(const ComplexField& final_field, const CqParams& params,
                              double L, const StepConfig& cfg) {
  return run(final_field, params, L, cfg, true);
}

double photon_number(const ComplexField& field) { return l2_norm_sq(field); }

double hamiltonian(const ComplexField& field, const CqParams& params) {
  validate(params);
  // Kinetic term via Parseval on the spectral derivative; the local terms in
  // the time domain.
  ComplexField spec = to_spectrum(field);
  const auto omega = field.grid()->omega();
  double kinetic = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    kinetic += omega[k] * omega[k] * std::norm(spec[k]);
  }
  kinetic *= field.grid()->dt() / static_cast<double>(field.size());

  double local = 0.0;
  for (const auto& v : field.values()) {
    const double p = std::norm(v);
    local += params.chi * p * p + params.gamma * p * p * p;
  }
  local *= field.grid()->dt();
  return kinetic - local;
}

}  // namespace cqs
