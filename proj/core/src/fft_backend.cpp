#include "fft_backend.hpp"

#include <fftw3.h>

#include <mutex>
#include <unordered_map>
#include <vector>

namespace cqs::detail {
namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

std::mutex plan_mutex;
std::unordered_map<std::size_t, PlanPair>& plan_cache() {
  static std::unordered_map<std::size_t, PlanPair> cache;
  return cache;
}

// FFTW_UNALIGNED keeps the plans valid for whatever buffers callers own.
PlanPair& plans_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<std::complex<double>> scratch(n);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  PlanPair pair;
  pair.forward = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_FORWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  pair.inverse = fftw_plan_dft_1d(static_cast<int>(n), p, p, FFTW_BACKWARD,
                                  FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, pair).first->second;
}

}  // namespace

void fft_forward(std::span<std::complex<double>> data) {
  auto& plans = plans_for(data.size());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans.forward, p, p);
}

void fft_inverse(std::span<std::complex<double>> data) {
  auto& plans = plans_for(data.size());
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plans.inverse, p, p);
}

}  // namespace cqs::detail
