#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace cqs {

/// Uniform periodic temporal grid with the matched angular spectral
/// frequencies in wraparound order, omega_k = 2*pi*k/t_span for
/// k in [-n/2, n/2).
///
/// Points are t_j = -t_span/2 + j*dt, j = 0..n-1, with dt = t_span/n.
class TimeGrid {
 public:
  /// n must be a power of two, n >= 8; t_span > 0.
  TimeGrid(std::size_t n, double t_span);

  std::size_t size() const { return n_; }
  double t_span() const { return t_span_; }
  double dt() const { return dt_; }
  double t(std::size_t j) const { return -0.5 * t_span_ + dt_ * static_cast<double>(j); }
  std::span<const double> omega() const { return omega_; }

  /// Index of t = 0 (always n/2 on this grid layout).
  std::size_t center_index() const { return n_ / 2; }

  bool compatible(const TimeGrid& other) const {
    return n_ == other.n_ && t_span_ == other.t_span_;
  }

 private:
  std::size_t n_;
  double t_span_;
  double dt_;
  std::vector<double> omega_;
};

using GridPtr = std::shared_ptr<const TimeGrid>;

GridPtr make_grid(std::size_t n, double t_span);

}  // namespace cqs
