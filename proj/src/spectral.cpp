#include "ambec/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace ambec::spectral {
namespace {

// FFTW planning is not thread-safe; executing an existing plan on new arrays
// is. Plans are created once per size under a lock and reused. FFTW_ESTIMATE
// keeps the chosen algorithm, and therefore the bits, identical across runs.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.fwd);
      fftw_destroy_plan(p.bwd);
    }
  }

  PlanPair get(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    const int ni = static_cast<int>(n);
    PlanPair p;
    p.fwd = fftw_plan_dft_1d(ni, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_1d(ni, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(n, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::size_t, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

fftw_complex* as_fftw(std::span<cplx> d) {
  return reinterpret_cast<fftw_complex*>(d.data());
}

}  // namespace

void forward(std::span<cplx> data) {
  const auto p = cache().get(data.size());
  fftw_execute_dft(p.fwd, as_fftw(data), as_fftw(data));
}

void backward(std::span<cplx> data) {
  const auto p = cache().get(data.size());
  fftw_execute_dft(p.bwd, as_fftw(data), as_fftw(data));
  const double inv = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= inv;
}

ComplexField derivative(std::span<const cplx> f, const Grid& g, int order) {
  require_same_size(f.size(), g.size(), "spectral::derivative");
  if (order != 1 && order != 2) throw DomainError("spectral::derivative: order must be 1 or 2");
  ComplexField work(f.begin(), f.end());
  forward(work);
  const auto& k = g.wavenumbers();
  const std::size_t nyquist = g.size() / 2;
  if (order == 1) {
    for (std::size_t j = 0; j < work.size(); ++j) work[j] *= cplx(0.0, k[j]);
    work[nyquist] = 0.0;
  } else {
    for (std::size_t j = 0; j < work.size(); ++j) work[j] *= -k[j] * k[j];
  }
  backward(work);
  return work;
}

RealField derivative(std::span<const double> f, const Grid& g, int order) {
  ComplexField c(f.begin(), f.end());
  const auto d = derivative(std::span<const cplx>(c), g, order);
  RealField out(d.size());
  for (std::size_t j = 0; j < d.size(); ++j) out[j] = d[j].real();
  return out;
}

}  // namespace ambec::spectral
