#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "cqs/propagate.hpp"

namespace cqs {

struct LinearizedOptions {
  /// Diagnostic switch: drop the conjugate (u*) coupling, leaving the
  /// phase-insensitive part of the linearized flow.
  bool zero_conjugate_coupling = false;
};

inline constexpr std::size_t kWholeTrajectory = std::numeric_limits<std::size_t>::max();

/// Direction tag for callers that track a perturbation/adjoint state by hand.
struct LinearizedState {
  enum class Direction { forward, backward };
  ComplexField u;
  double z = 0.0;
  Direction direction = Direction::forward;
};

/// One split step of the linearized fluctuation equation
///   u_z = i u_tt + i alpha(t) u + i kappa(t) u*,
///   alpha = 4 chi |U0|^2 + 9 gamma |U0|^4,  kappa = (2 chi + 6 gamma |U0|^2) U0^2,
/// with U0 the classical background at the step midpoint. The local pair
/// rotation is the closed-form exponential of [[i a, i k], [-i k*, -i a]].
void linearized_step(ComplexField& u, const ComplexField& background_mid,
                     const CqParams& params, double dz,
                     const LinearizedOptions& opts = {});

/// One step of the adjoint equation
///   uA_z = i uA_tt + i alpha uA - i kappa uA*
/// taken with decreasing z (dz > 0 is the step magnitude). Together with
/// linearized_step this preserves the real pairing Re<uA|u> dt exactly per
/// step for a shared background.
void adjoint_backstep(ComplexField& uA, const ComplexField& background_mid,
                      const CqParams& params, double dz,
                      const LinearizedOptions& opts = {});

/// Propagate a perturbation forward along the stored background over steps
/// [lo_step, hi_step] (defaults: the whole trajectory). Backgrounds between
/// checkpoints are co-integrated and cross-validated when the trajectory
/// stride exceeds 1.
ComplexField forward_propagate_perturbation(const ComplexField& u0, const Trajectory& traj,
                                            std::size_t lo_step = 0,
                                            std::size_t hi_step = kWholeTrajectory,
                                            const LinearizedOptions& opts = {});

/// Back-propagate a projection function from hi_step down to lo_step:
/// the returned f0 satisfies <f0|u(lo)> = <f_hi|u(hi)> for every solution of
/// the linearized equation, up to roundoff.
ComplexField back_propagate(const ComplexField& f_hi, const Trajectory& traj,
                            std::size_t lo_step = 0,
                            std::size_t hi_step = kWholeTrajectory,
                            const LinearizedOptions& opts = {});

struct PairingLogRow {
  double z;
  double defect;
};

/// Per-z pairing drift |<f(z)|u(z)> - <f(0)|u(0)>| along a joint
/// forward/backward propagation of (u0, f_L); rows every log_stride steps.
std::vector<PairingLogRow> pairing_defect_log(const ComplexField& u0,
                                              const ComplexField& f_L,
                                              const Trajectory& traj,
                                              std::size_t log_stride = 0);

}  // namespace cqs
