#include "mildns/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>
#include <vector>

namespace mildns {

namespace {

struct Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

// Planning is not thread-safe in FFTW; execution with new arrays is.
class PlanCache {
public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  Plans get(int n, std::size_t N) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(n, N);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    int dims[4];
    std::size_t real_size = 1, cplx_size = 1;
    for (int d = 0; d < n; ++d) {
      dims[d] = static_cast<int>(N);
      real_size *= N;
      cplx_size *= (d == n - 1) ? N / 2 + 1 : N;
    }
    double* r = fftw_alloc_real(real_size);
    fftw_complex* c = fftw_alloc_complex(cplx_size);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    Plans p;
    p.r2c = fftw_plan_dft_r2c(n, dims, r, c, flags);
    p.c2r = fftw_plan_dft_c2r(n, dims, c, r, flags);
    fftw_free(r);
    fftw_free(c);
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto& [k, p] : plans_) {
      fftw_destroy_plan(p.r2c);
      fftw_destroy_plan(p.c2r);
    }
  }

private:
  std::mutex mu_;
  std::map<std::pair<int, std::size_t>, Plans> plans_;
};

}  // namespace

void forward_component(const Grid& g, const double* in, std::complex<double>* out) {
  const Plans p = PlanCache::instance().get(g.dim(), g.points_per_axis());
  // r2c does not modify its input with FFTW_ESTIMATE plans of this kind, but
  // the API takes a non-const pointer.
  fftw_execute_dft_r2c(p.r2c, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void inverse_component(const Grid& g, const std::complex<double>* in, double* out) {
  const Plans p = PlanCache::instance().get(g.dim(), g.points_per_axis());
  std::vector<std::complex<double>> scratch(in, in + g.spectral_size());
  fftw_execute_dft_c2r(p.c2r, reinterpret_cast<fftw_complex*>(scratch.data()), out);
}

SpectralField forward(const Field& f) {
  const Grid& g = f.grid();
  SpectralField s(g, f.rank());
  for (std::size_t c = 0; c < f.components(); ++c)
    forward_component(g, f.component(c).data(), s.component(c).data());
  return s;
}

Field inverse(const SpectralField& s) {
  const Grid& g = s.grid();
  Field f(g, s.rank());
  const double norm = 1.0 / static_cast<double>(g.size());
  for (std::size_t c = 0; c < s.components(); ++c) {
    auto out = f.component(c);
    inverse_component(g, s.component(c).data(), out.data());
    for (auto& x : out) x *= norm;
  }
  return f;
}

}  // namespace mildns
