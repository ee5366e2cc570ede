#include "cqs/linearized.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"
#include "split_kernels.hpp"

namespace cqs {

namespace {

constexpr double kCoIntegrationTol = 1e-7;

// C(y) = cosh(sqrt(y)) and S(y) = sinh(sqrt(y))/sqrt(y), entire functions of
// real y of either sign (trigonometric branch for y < 0).
inline void cs_funcs(double y, double& c, double& s) {
  const double ay = std::abs(y);
  if (ay < 1e-8) {
    c = 1.0 + y * (0.5 + y * (1.0 / 24.0 + y / 720.0));
    s = 1.0 + y * (1.0 / 6.0 + y * (1.0 / 120.0 + y / 5040.0));
  } else if (y > 0.0) {
    const double r = std::sqrt(y);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-y);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
}

// Exact frozen-coefficient rotation of (u, u*) over a signed step s:
// u' = (C + i s S alpha) u + i sigma s S kappa u*, sigma = +1 for the
// linearized flow, -1 for the adjoint flow.
void local_pair_rotation(std::vector<Complex>& u, std::span<const Complex> bg,
                         const CqParams& p, double s, double sigma,
                         bool zero_kappa) {
  const double chi4 = 4.0 * p.chi;
  const double gam9 = 9.0 * p.gamma;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const Complex U = bg[j];
    const double P = std::norm(U);
    const double alpha = P * (chi4 + gam9 * P);
    Complex kappa(0.0, 0.0);
    double k2 = 0.0;
    if (!zero_kappa) {
      const double w = 2.0 * p.chi + 6.0 * p.gamma * P;
      kappa = w * U * U;
      k2 = w * w * P * P;
    }
    double c, sf;
    cs_funcs(s * s * (k2 - alpha * alpha), c, sf);
    const double ss = s * sf;
    const Complex diag(c, ss * alpha);
    const Complex off = Complex(0.0, sigma * ss) * kappa;
    const Complex uj = u[j];
    u[j] = diag * uj + off * std::conj(uj);
  }
}

void linearized_substeps(std::vector<Complex>& u, std::span<const Complex> bg,
                         const CqParams& p, const detail::DispersionPhases& phases,
                         double s, double sigma, bool zero_kappa) {
  detail::apply_spectral(u, phases.half);
  local_pair_rotation(u, bg, p, s, sigma, zero_kappa);
  detail::apply_spectral(u, phases.half);
}

// Supplies midpoint backgrounds for a monotone walk over trajectory steps.
// With stride 1 the stored checkpoints bracket every step; otherwise the
// classical equation is co-integrated alongside and cross-validated against
// each stored checkpoint.
class BackgroundCursor {
 public:
  BackgroundCursor(const Trajectory& traj, std::size_t start_step, bool forward)
      : traj_(traj),
        forward_(forward),
        phases_(*traj.grid(), forward ? traj.dz() : -traj.dz()),
        cur_step_(start_step),
        cur_(traj.field_at_step(start_step).raw()),
        next_(cur_),
        mid_(cur_.size()) {}

  // Midpoint background for the step [k, k+1]; callers must visit steps in
  // the cursor's direction without gaps.
  std::span<const Complex> midpoint(std::size_t k) {
    const std::size_t from = forward_ ? k : k + 1;
    const std::size_t to = forward_ ? k + 1 : k;
    if (from != cur_step_) throw std::logic_error("BackgroundCursor: nonmonotone walk");
    if (traj_.stride() == 1) {
      const auto& a = traj_.field_at_step(k).raw();
      const auto& b = traj_.field_at_step(k + 1).raw();
      for (std::size_t j = 0; j < mid_.size(); ++j) mid_[j] = 0.5 * (a[j] + b[j]);
      cur_step_ = to;
      return mid_;
    }
    next_ = cur_;
    detail::classical_step_inplace(next_, traj_.params(), phases_,
                                   forward_ ? traj_.dz() : -traj_.dz(),
                                   SplitScheme::strang);
    if (traj_.has_step(to)) {
      const auto& stored = traj_.field_at_step(to).raw();
      double dev = 0.0;
      for (std::size_t j = 0; j < next_.size(); ++j) {
        dev = std::max(dev, std::abs(next_[j] - stored[j]));
      }
      if (dev > kCoIntegrationTol) {
        throw std::runtime_error(
            "back-propagation background co-integration deviates from stored checkpoints");
      }
      next_ = stored;
    }
    for (std::size_t j = 0; j < mid_.size(); ++j) mid_[j] = 0.5 * (cur_[j] + next_[j]);
    cur_ = next_;
    cur_step_ = to;
    return mid_;
  }

 private:
  const Trajectory& traj_;
  bool forward_;
  detail::DispersionPhases phases_;
  std::size_t cur_step_;
  std::vector<Complex> cur_;
  std::vector<Complex> next_;
  std::vector<Complex> mid_;
};

void check_grid(const ComplexField& f, const Trajectory& traj) {
  if (!f.grid()->compatible(*traj.grid())) {
    throw std::invalid_argument("field grid does not match the trajectory grid");
  }
}

std::size_t clamp_hi(const Trajectory& traj, std::size_t hi) {
  return hi == kWholeTrajectory ? traj.n_steps() : hi;
}

}  // namespace

void linearized_step(ComplexField& u, const ComplexField& background_mid,
                     const CqParams& params, double dz, const LinearizedOptions& opts) {
  validate(params);
  detail::DispersionPhases phases(*u.grid(), dz);
  linearized_substeps(u.raw(), background_mid.raw(), params, phases, dz, +1.0,
                      opts.zero_conjugate_coupling);
}

void adjoint_backstep(ComplexField& uA, const ComplexField& background_mid,
                      const CqParams& params, double dz, const LinearizedOptions& opts) {
  validate(params);
  detail::DispersionPhases phases(*uA.grid(), -dz);
  linearized_substeps(uA.raw(), background_mid.raw(), params, phases, -dz, -1.0,
                      opts.zero_conjugate_coupling);
}

ComplexField forward_propagate_perturbation(const ComplexField& u0, const Trajectory& traj,
                                            std::size_t lo_step, std::size_t hi_step,
                                            const LinearizedOptions& opts) {
  check_grid(u0, traj);
  hi_step = clamp_hi(traj, hi_step);
  if (lo_step > hi_step || hi_step > traj.n_steps()) {
    throw std::invalid_argument("forward_propagate_perturbation: bad step range");
  }
  ComplexField u = u0;
  if (lo_step == hi_step) return u;
  detail::DispersionPhases phases(*traj.grid(), traj.dz());
  BackgroundCursor cursor(traj, lo_step, true);
  for (std::size_t k = lo_step; k < hi_step; ++k) {
    linearized_substeps(u.raw(), cursor.midpoint(k), traj.params(), phases,
                        traj.dz(), +1.0, opts.zero_conjugate_coupling);
  }
  return u;
}

ComplexField back_propagate(const ComplexField& f_hi, const Trajectory& traj,
                            std::size_t lo_step, std::size_t hi_step,
                            const LinearizedOptions& opts) {
  check_grid(f_hi, traj);
  hi_step = clamp_hi(traj, hi_step);
  if (lo_step > hi_step || hi_step > traj.n_steps()) {
    throw std::invalid_argument("back_propagate: bad step range");
  }
  ComplexField f = f_hi;
  if (lo_step == hi_step) return f;
  detail::DispersionPhases phases(*traj.grid(), -traj.dz());
  BackgroundCursor cursor(traj, hi_step, false);
  for (std::size_t k = hi_step; k-- > lo_step;) {
    linearized_substeps(f.raw(), cursor.midpoint(k), traj.params(), phases,
                        -traj.dz(), -1.0, opts.zero_conjugate_coupling);
  }
  return f;
}

std::vector<PairingLogRow> pairing_defect_log(const ComplexField& u0,
                                              const ComplexField& f_L,
                                              const Trajectory& traj,
                                              std::size_t log_stride) {
  check_grid(u0, traj);
  check_grid(f_L, traj);
  const std::size_t n_steps = traj.n_steps();
  if (log_stride == 0) log_stride = std::max<std::size_t>(1, n_steps / 512);

  // Backward sweep first, storing the adjoint field at the log points.
  std::vector<std::pair<std::size_t, ComplexField>> snapshots;
  {
    ComplexField f = f_L;
    detail::DispersionPhases phases(*traj.grid(), -traj.dz());
    BackgroundCursor cursor(traj, n_steps, false);
    snapshots.emplace_back(n_steps, f);
    for (std::size_t k = n_steps; k-- > 0;) {
      linearized_substeps(f.raw(), cursor.midpoint(k), traj.params(), phases,
                          -traj.dz(), -1.0, false);
      if (k % log_stride == 0 || k == 0) snapshots.emplace_back(k, f);
    }
  }

  const ComplexField& f0 = snapshots.back().second;
  const double ref = inner_product_real(f0, u0);

  std::vector<PairingLogRow> rows;
  rows.reserve(snapshots.size());
  ComplexField u = u0;
  detail::DispersionPhases phases(*traj.grid(), traj.dz());
  BackgroundCursor cursor(traj, 0, true);
  std::size_t next = snapshots.size();
  // snapshots run from step n_steps down to 0; walk them back upward.
  for (std::size_t k = 0; k <= n_steps; ++k) {
    if (k > 0) {
      linearized_substeps(u.raw(), cursor.midpoint(k - 1), traj.params(), phases,
                          traj.dz(), +1.0, false);
    }
    while (next > 0 && snapshots[next - 1].first == k) {
      --next;
      const double pairing = inner_product_real(snapshots[next].second, u);
      rows.push_back({traj.dz() * static_cast<double>(k), std::abs(pairing - ref)});
    }
  }
  return rows;
}

}  // namespace cqs
