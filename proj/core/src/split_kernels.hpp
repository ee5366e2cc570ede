#pragma once

#include <vector>

#include "cqs/field.hpp"
#include "cqs/pulse.hpp"
#include "cqs/propagate.hpp"

namespace cqs::detail {

// Precomputed dispersion phase factors exp(-i omega^2 dz / 2) and
// exp(-i omega^2 dz) for one signed step size.
struct DispersionPhases {
  DispersionPhases(const TimeGrid& grid, double dz);
  std::vector<Complex> half;
  std::vector<Complex> full;
};

void apply_spectral(std::vector<Complex>& u, const std::vector<Complex>& phase);

double apply_nonlinear_phase(std::vector<Complex>& u, const CqParams& p, double dz);

double classical_step_inplace(std::vector<Complex>& u, const CqParams& params,
                              const DispersionPhases& phases, double dz,
                              SplitScheme scheme);

}  // namespace cqs::detail
