#include "fftw_plans.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace mea::fft {

namespace {

enum class Kind { r2c1, c2r1, r2c3, c2r3 };

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(Kind kind, int n) {
    std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    const std::size_t real_len = (kind == Kind::r2c3 || kind == Kind::c2r3)
                                     ? static_cast<std::size_t>(n) * n * n
                                     : static_cast<std::size_t>(n);
    const std::size_t cplx_len = (kind == Kind::r2c3 || kind == Kind::c2r3)
                                     ? static_cast<std::size_t>(n) * n * (n / 2 + 1)
                                     : static_cast<std::size_t>(n / 2 + 1);
    double* r = fftw_alloc_real(real_len);
    fftw_complex* c = fftw_alloc_complex(cplx_len);
    // Execution always goes through fftw_alloc'd scratch (see Scratch), so
    // plans may assume SIMD alignment. ESTIMATE keeps plan choice, and hence
    // rounding, identical from run to run.
    const unsigned flags = FFTW_ESTIMATE;
    fftw_plan plan = nullptr;
    switch (kind) {
      case Kind::r2c1: plan = fftw_plan_dft_r2c_1d(n, r, c, flags); break;
      case Kind::c2r1: plan = fftw_plan_dft_c2r_1d(n, c, r, flags); break;
      case Kind::r2c3: plan = fftw_plan_dft_r2c_3d(n, n, n, r, c, flags); break;
      case Kind::c2r3: plan = fftw_plan_dft_c2r_3d(n, n, n, c, r, flags); break;
    }
    fftw_free(r);
    fftw_free(c);
    if (!plan) throw std::runtime_error("FFTW planning failed for n=" + std::to_string(n));
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<std::tuple<Kind, int>, fftw_plan> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

// Per-thread aligned buffers that every transform is staged through. The
// copies also keep caller inputs intact (c2r overwrites its input).
class Scratch {
 public:
  ~Scratch() {
    fftw_free(real_);
    fftw_free(cplx_);
  }
  double* real(std::size_t n) {
    if (n > real_len_) {
      fftw_free(real_);
      real_ = fftw_alloc_real(n);
      real_len_ = n;
    }
    return real_;
  }
  std::complex<double>* cplx(std::size_t n) {
    if (n > cplx_len_) {
      fftw_free(cplx_);
      cplx_ = fftw_alloc_complex(n);
      cplx_len_ = n;
    }
    return reinterpret_cast<std::complex<double>*>(cplx_);
  }

 private:
  double* real_ = nullptr;
  fftw_complex* cplx_ = nullptr;
  std::size_t real_len_ = 0, cplx_len_ = 0;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

void forward(Kind kind, int n, std::span<const double> in, std::span<std::complex<double>> out) {
  Scratch& s = scratch();
  double* r = s.real(in.size());
  std::complex<double>* c = s.cplx(out.size());
  std::copy(in.begin(), in.end(), r);
  fftw_execute_dft_r2c(cache().get(kind, n), r, as_fftw(c));
  std::copy(c, c + out.size(), out.begin());
}

void backward(Kind kind, int n, std::span<const std::complex<double>> in, std::span<double> out) {
  Scratch& s = scratch();
  std::complex<double>* c = s.cplx(in.size());
  double* r = s.real(out.size());
  std::copy(in.begin(), in.end(), c);
  fftw_execute_dft_c2r(cache().get(kind, n), as_fftw(c), r);
  std::copy(r, r + out.size(), out.begin());
}

}  // namespace

void r2c_1d(int n, std::span<const double> in, std::span<std::complex<double>> out) {
  forward(Kind::r2c1, n, in, out);
}

void c2r_1d(int n, std::span<const std::complex<double>> in, std::span<double> out) {
  backward(Kind::c2r1, n, in, out);
}

void r2c_3d(int n, std::span<const double> in, std::span<std::complex<double>> out) {
  forward(Kind::r2c3, n, in, out);
}

void c2r_3d(int n, std::span<const std::complex<double>> in, std::span<double> out) {
  backward(Kind::c2r3, n, in, out);
}

int good_size(int min_n) {
  for (int n = std::max(2, min_n);; ++n) {
    if (n % 2 != 0) continue;
    int m = n;
    for (int p : {2, 3, 5})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

}  // namespace mea::fft
