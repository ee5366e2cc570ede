#include "cqs/field.hpp"

#include <cmath>
#include <stdexcept>

#include "fft_backend.hpp"

namespace cqs {

ComplexField::ComplexField(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_ ? grid_->size() : 0) {
  if (!grid_) throw std::invalid_argument("ComplexField: null grid");
}

ComplexField::ComplexField(GridPtr grid, std::vector<Complex> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("ComplexField: null grid");
  if (values_.size() != grid_->size()) {
    throw std::invalid_argument("ComplexField: values length must equal grid size");
  }
}

namespace {
void require_shared_grid(const ComplexField& f, const ComplexField& g) {
  if (!f.grid()->compatible(*g.grid())) {
    throw std::invalid_argument("fields must share one grid");
  }
}
}  // namespace

double inner_product_real(const ComplexField& f, const ComplexField& g) {
  require_shared_grid(f, g);
  double acc = 0.0;
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t j = 0; j < fv.size(); ++j) {
    acc += fv[j].real() * gv[j].real() + fv[j].imag() * gv[j].imag();
  }
  return acc * f.grid()->dt();
}

double inner_product_imag(const ComplexField& f, const ComplexField& g) {
  require_shared_grid(f, g);
  double acc = 0.0;
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t j = 0; j < fv.size(); ++j) {
    acc += fv[j].real() * gv[j].imag() - fv[j].imag() * gv[j].real();
  }
  return acc * f.grid()->dt();
}

double l2_norm_sq(const ComplexField& f) {
  double acc = 0.0;
  for (const auto& v : f.values()) acc += std::norm(v);
  return acc * f.grid()->dt();
}

ComplexField to_spectrum(const ComplexField& f) {
  ComplexField out = f;
  detail::fft_forward(out.values());
  return out;
}

ComplexField from_spectrum(const ComplexField& spectrum) {
  ComplexField out = spectrum;
  detail::fft_inverse(out.values());
  const double scale = 1.0 / static_cast<double>(out.size());
  for (auto& v : out.values()) v *= scale;
  return out;
}

bool all_finite(const ComplexField& f) {
  for (const auto& v : f.values()) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  }
  return true;
}

ComplexField add_scaled(const ComplexField& f, Complex s, const ComplexField& g) {
  require_shared_grid(f, g);
  ComplexField out = f;
  for (std::size_t j = 0; j < out.size(); ++j) out[j] += s * g[j];
  return out;
}

}  // namespace cqs
