#pragma once

#include <complex>
#include <span>
#include <vector>

#include "cqs/grid.hpp"

namespace cqs {

using Complex = std::complex<double>;

/// Complex-valued envelope sampled on a TimeGrid. Value semantics: copies
/// are deep, the grid is shared and immutable.
class ComplexField {
 public:
  explicit ComplexField(GridPtr grid);
  ComplexField(GridPtr grid, std::vector<Complex> values);

  const GridPtr& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }

  Complex& operator[](std::size_t j) { return values_[j]; }
  const Complex& operator[](std::size_t j) const { return values_[j]; }

  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }

  std::vector<Complex>& raw() { return values_; }
  const std::vector<Complex>& raw() const { return values_; }

 private:
  GridPtr grid_;
  std::vector<Complex> values_;
};

/// Re sum_j conj(f_j) g_j dt. Throws std::invalid_argument if the fields do
/// not share one grid.
double inner_product_real(const ComplexField& f, const ComplexField& g);

/// Im sum_j conj(f_j) g_j dt (symplectic pairing of the linearized flow).
double inner_product_imag(const ComplexField& f, const ComplexField& g);

/// sum_j |f_j|^2 dt.
double l2_norm_sq(const ComplexField& f);

/// Unnormalized forward DFT, bins ordered to match grid->omega().
ComplexField to_spectrum(const ComplexField& f);

/// Inverse of to_spectrum (applies the 1/n normalization).
ComplexField from_spectrum(const ComplexField& spectrum);

bool all_finite(const ComplexField& f);

/// f + s*g on a shared grid.
ComplexField add_scaled(const ComplexField& f, Complex s, const ComplexField& g);

}  // namespace cqs
