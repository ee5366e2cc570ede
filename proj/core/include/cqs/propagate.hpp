#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cqs/field.hpp"
#include "cqs/pulse.hpp"

namespace cqs {

enum class SplitScheme { strang, lie };

struct StepConfig {
  double dz = 1e-3;
  SplitScheme scheme = SplitScheme::strang;
  /// Store every k-th step field (1 = every step). Raised automatically when
  /// the stored trajectory would exceed memory_cap_bytes.
  std::size_t checkpoint_stride = 1;
  /// Abort when max|u| exceeds divergence_factor times the initial peak.
  double divergence_factor = 1e3;
  std::uint64_t memory_cap_bytes = std::uint64_t{2} << 30;
};

/// Thrown when the field blows up or turns non-finite; carries the z at
/// which integration failed.
class integration_diverged : public std::runtime_error {
 public:
  integration_diverged(const std::string& what, double z)
      : std::runtime_error(what), z_(z) {}
  double z() const { return z_; }

 private:
  double z_;
};

/// Checkpointed classical background along a propagation run, including a
/// conserved-quantity log (photon number and Hamiltonian per checkpoint).
class Trajectory {
 public:
  Trajectory(CqParams params, GridPtr grid, double dz_effective,
             std::size_t n_steps, std::size_t stride);

  const CqParams& params() const { return params_; }
  const GridPtr& grid() const { return grid_; }
  double dz() const { return dz_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t stride() const { return stride_; }
  double length() const { return dz_ * static_cast<double>(n_steps_); }

  std::size_t checkpoint_count() const { return fields_.size(); }
  const ComplexField& checkpoint(std::size_t i) const { return fields_[i]; }
  double z_at(std::size_t i) const { return z_[i]; }
  const std::vector<double>& z_samples() const { return z_; }
  const std::vector<double>& photon_log() const { return photon_; }
  const std::vector<double>& hamiltonian_log() const { return hamiltonian_; }

  /// True when the field at this step index is stored.
  bool has_step(std::size_t step) const {
    return step % stride_ == 0 || step == n_steps_;
  }
  /// Checkpoint index for a stored step.
  std::size_t checkpoint_index(std::size_t step) const;
  const ComplexField& field_at_step(std::size_t step) const {
    return fields_[checkpoint_index(step)];
  }
  /// Nearest stored step index for the coordinate z in [0, L].
  std::size_t nearest_stored_step(double z) const;

  double max_photon_drift() const;
  double max_hamiltonian_drift() const;

  void append(std::size_t step, ComplexField field, double photon, double hamiltonian);

 private:
  CqParams params_;
  GridPtr grid_;
  double dz_;
  std::size_t n_steps_;
  std::size_t stride_;
  std::vector<double> z_;
  std::vector<std::size_t> steps_;
  std::vector<ComplexField> fields_;
  std::vector<double> photon_;
  std::vector<double> hamiltonian_;
};

/// One split step of the cubic-quintic equation. The nonlinear substep is an
/// exact phase rotation; the dispersion substep is exact in the spectrum.
ComplexField step(const ComplexField& field, const CqParams& params,
                  const StepConfig& cfg);

/// Integrate over [0, L] with checkpointing. The step count is
/// max(1, round(L/dz)) and the effective dz is L divided by it; L = 0 yields
/// a single-checkpoint trajectory.
Trajectory propagate(const ComplexField& initial, const CqParams& params,
                     double L, const StepConfig& cfg);

/// Integrate with dz < 0 from the final field; checkpoints are stored in
/// ascending z so that checkpoint(0) is the reconstructed initial field.
Trajectory propagate_backward(const ComplexField& final_field, const CqParams& params,
                              double L, const StepConfig& cfg);

/// sum |u_j|^2 dt.
double photon_number(const ComplexField& field);

/// sum (|du/dt|^2 - chi |u|^4 - gamma |u|^6) dt, the derivative evaluated
/// spectrally.
double hamiltonian(const ComplexField& field, const CqParams& params);

}  // namespace cqs
