#pragma once

#include <fftw3.h>

#include <complex>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

namespace amalgam::fft {

/// Smallest integer >= n whose only prime factors are 2, 3, 5 and 7.
inline int fast_size(int n) {
  if (n <= 1) return 1;
  for (int m = n;; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

namespace detail {

// The FFTW planner is not thread-safe; plan execution is.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int dim, int n, int sign) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    const auto key = std::make_tuple(dim, n, sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::size_t total = 1;
    std::vector<int> shape(dim, n);
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> scratch(total);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft(dim, shape.data(), buf, buf, sign,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

inline PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace detail

/// In-place unnormalized DFT on an n^dim cube. sign = -1 analysis, +1 synthesis.
inline void transform(std::vector<std::complex<double>>& data, int dim, int n, int sign) {
  fftw_plan plan = detail::cache().get(dim, n, sign);
  auto* buf = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, buf, buf);
}

}  // namespace amalgam::fft
