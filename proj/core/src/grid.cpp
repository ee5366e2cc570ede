#include "cqs/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cqs {

namespace {
bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
}  // namespace

TimeGrid::TimeGrid(std::size_t n, double t_span) : n_(n), t_span_(t_span) {
  if (n < 8 || !is_power_of_two(n)) {
    throw std::invalid_argument("TimeGrid: n must be a power of two, n >= 8");
  }
  if (!(t_span > 0.0) || !std::isfinite(t_span)) {
    throw std::invalid_argument("TimeGrid: t_span must be positive and finite");
  }
  dt_ = t_span_ / static_cast<double>(n_);
  omega_.resize(n_);
  const double dw = 2.0 * std::numbers::pi / t_span_;
  const std::size_t half = n_ / 2;
  for (std::size_t k = 0; k < half; ++k) omega_[k] = dw * static_cast<double>(k);
  for (std::size_t k = half; k < n_; ++k) {
    omega_[k] = dw * (static_cast<double>(k) - static_cast<double>(n_));
  }
}

GridPtr make_grid(std::size_t n, double t_span) {
  return std::make_shared<const TimeGrid>(n, t_span);
}

}  // namespace cqs
