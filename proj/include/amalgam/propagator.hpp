#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "amalgam/time_mesh.hpp"
#include "amalgam/transforms.hpp"

namespace amalgam {

/// d_t^2 u - Laplace u = sign * u^rho conj(u)^(sigma - rho) on `grid`.
struct NlwProblem {
  int sigma = 3;
  int rho = 3;
  int sign = +1;
  GridSpec grid;

  static NlwProblem make(int sigma, int rho, int sign, const GridSpec& grid) {
    require(rho >= 0, "problem: rho must be >= 0");
    require(sigma >= std::max(rho, 2), "problem: sigma >= max(rho, 2) violated");
    require(sign == 1 || sign == -1, "problem: sign must be +1 or -1");
    return NlwProblem{sigma, rho, sign, grid};
  }
};

/// sin(t w) / w, continuous at w = 0.
inline double sin_over(double t, double w) { return w == 0.0 ? t : std::sin(t * w) / w; }

/// |xi| at every lattice point, in flat order.
inline std::vector<double> frequency_magnitudes(const GridSpec& g) {
  std::vector<double> w(g.size());
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) { w[i] = g.magnitude(k); });
  return w;
}

/// F S(t)(u0, u1) = cos(t|xi|) F u0 + sin(t|xi|)/|xi| F u1.
inline SpectralField propagate_linear(const DataPair& pair, double t) {
  require(t >= 0.0, "propagate_linear: t must be >= 0");
  const GridSpec& g = pair.grid();
  const auto w = frequency_magnitudes(g);
  SpectralField out(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = std::cos(t * w[i]) * pair.u0[i] + sin_over(t, w[i]) * pair.u1[i];
  return out;
}

/// F of prod_{l <= rho} f_l prod_{m > rho} conj(f_m), anti-aliased.
inline SpectralField nonlinearity(const std::vector<SpectralField>& fields, int rho) {
  require(fields.size() >= 2, "nonlinearity: at least two factors are required");
  require(rho >= 0 && rho <= static_cast<int>(fields.size()), "nonlinearity: rho out of range");
  std::vector<const SpectralField*> ptrs;
  for (const auto& f : fields) ptrs.push_back(&f);
  return multiply(ptrs, rho, true);
}

namespace detail {

/// Interpolation nodes of one panel with cos(t w) and sin(t w)/w tabulated at
/// every node and frequency. Node rotations e^{i h x_j w} are computed once.
class PanelKernel {
 public:
  PanelKernel(const std::vector<double>& magnitudes, const PanelRule& rule, double h)
      : w_(magnitudes), nodes_(rule.nodes), h_(h) {
    const std::size_t m = nodes_.size();
    rot_.assign(m, std::vector<cplx>(w_.size()));
    cos_.assign(m, std::vector<double>(w_.size()));
    sin_.assign(m, std::vector<double>(w_.size()));
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t x = 0; x < w_.size(); ++x) rot_[j][x] = std::polar(1.0, h * nodes_[j] * w_[x]);
  }

  void move_to(double t0) {
    t0_ = t0;
    for (std::size_t x = 0; x < w_.size(); ++x) {
      const cplx base = std::polar(1.0, t0 * w_[x]);
      const double w = w_[x];
      for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const cplx z = base * rot_[j][x];
        cos_[j][x] = z.real();
        sin_[j][x] = w == 0.0 ? t0 + h_ * nodes_[j] : z.imag() / w;
      }
    }
  }

  double time(std::size_t j) const { return t0_ + h_ * nodes_[j]; }
  double step() const { return h_; }
  std::size_t nodes() const { return nodes_.size(); }
  const std::vector<double>& cos_at(std::size_t j) const { return cos_[j]; }
  const std::vector<double>& sin_at(std::size_t j) const { return sin_[j]; }

 private:
  std::vector<double> w_;
  std::vector<double> nodes_;
  double h_;
  double t0_ = 0.0;
  std::vector<std::vector<cplx>> rot_;
  std::vector<std::vector<double>> cos_;
  std::vector<std::vector<double>> sin_;
};

/// F S(t)(u0, u1) at every node of the current panel.
inline void linear_at_nodes(const PanelKernel& kernel, const DataPair& pair,
                            std::vector<std::vector<cplx>>& out) {
  out.resize(kernel.nodes());
  const std::size_t n = pair.u0.size();
  for (std::size_t j = 0; j < kernel.nodes(); ++j) {
    out[j].resize(n);
    const auto& c = kernel.cos_at(j);
    const auto& s = kernel.sin_at(j);
    for (std::size_t x = 0; x < n; ++x) out[j][x] = c[x] * pair.u0[x] + s[x] * pair.u1[x];
  }
}

/**
 * Running Duhamel integral on one frequency lattice, advanced panel by panel.
 *
 * With sin((t - tau) w) = sin(t w) cos(tau w) - cos(t w) sin(tau w) the integral
 * int_0^t sin((t - tau) w)/w g(tau) dtau equals
 *   sin(t w)/w * A(t) - cos(t w) * B(t),
 *   A(t) = int_0^t cos(tau w) g,  B(t) = int_0^t sin(tau w)/w g,
 * and A, B are cumulative integrals evaluated at every panel node.
 */
class DuhamelAccumulator {
 public:
  explicit DuhamelAccumulator(std::size_t n) : a_(n), b_(n) {}

  /// g[j]: integrand at the panel nodes. out[j]: Duhamel integral at the same
  /// nodes. The running state moves to the end of the panel.
  void advance(const PanelKernel& kernel, const PanelRule& rule,
               const std::vector<std::vector<cplx>>& g, std::vector<std::vector<cplx>>& out) {
    const std::size_t m = kernel.nodes();
    const std::size_t n = a_.size();
    ga_.resize(m);
    gb_.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      ga_[j].resize(n);
      gb_[j].resize(n);
      const auto& c = kernel.cos_at(j);
      const auto& s = kernel.sin_at(j);
      for (std::size_t x = 0; x < n; ++x) {
        ga_[j][x] = c[x] * g[j][x];
        gb_[j][x] = s[x] * g[j][x];
      }
    }
    out.resize(m);
    std::vector<cplx> acc_a(n), acc_b(n);
    const double h = kernel.step();
    for (std::size_t i = 0; i < m; ++i) {
      acc_a = a_;
      acc_b = b_;
      for (std::size_t j = 0; j < m; ++j) {
        const double wij = h * rule.weights[i][j];
        if (wij == 0.0) continue;
        const cplx* pa = ga_[j].data();
        const cplx* pb = gb_[j].data();
        for (std::size_t x = 0; x < n; ++x) {
          acc_a[x] += wij * pa[x];
          acc_b[x] += wij * pb[x];
        }
      }
      out[i].resize(n);
      const auto& c = kernel.cos_at(i);
      const auto& s = kernel.sin_at(i);
      for (std::size_t x = 0; x < n; ++x) out[i][x] = s[x] * acc_a[x] - c[x] * acc_b[x];
      if (i + 1 == m) {
        a_.swap(acc_a);
        b_.swap(acc_b);
      }
    }
  }

 private:
  std::vector<cplx> a_;
  std::vector<cplx> b_;
  std::vector<std::vector<cplx>> ga_;
  std::vector<std::vector<cplx>> gb_;
};

}  // namespace detail

struct DuhamelResult {
  SpectralField value;
  double error_estimate = 0.0;
  bool within_tolerance = true;
};

using IntegrandProvider = std::function<SpectralField(double)>;

namespace detail {

inline SpectralField duhamel_on_mesh(const IntegrandProvider& integrand, const GridSpec& g, double t,
                                     const TimeMesh& mesh) {
  SpectralField result(g);
  if (t == 0.0) return result;
  const PanelRule rule = panel_rule(mesh);
  const int panels = panel_count(mesh, t);
  PanelKernel kernel(frequency_magnitudes(g), rule, t / panels);
  DuhamelAccumulator acc(g.size());
  std::vector<std::vector<cplx>> samples(rule.nodes.size()), out;
  for (int p = 0; p < panels; ++p) {
    kernel.move_to(p * kernel.step());
    for (std::size_t j = 0; j < kernel.nodes(); ++j) {
      const SpectralField v = integrand(kernel.time(j));
      require(v.grid() == g, "duhamel: integrand grid changed between nodes");
      samples[j].assign(v.coeffs().begin(), v.coeffs().end());
    }
    acc.advance(kernel, rule, samples, out);
  }
  std::copy(out.back().begin(), out.back().end(), result.coeffs().begin());
  return result;
}

}  // namespace detail

/**
 * int_0^t sin((t - tau)|xi|)/|xi| F(tau, xi) dtau for a time-dependent integrand.
 * The error estimate is the sup-difference against a run on a twice finer mesh
 * (Richardson); the finer value is returned.
 */
inline DuhamelResult duhamel(const IntegrandProvider& integrand, double t, const TimeMesh& mesh,
                             double tolerance = 1e-8) {
  require(t >= 0.0, "duhamel: t must be >= 0");
  const SpectralField probe = integrand(0.0);
  const GridSpec g = probe.grid();
  const SpectralField coarse = detail::duhamel_on_mesh(integrand, g, t, mesh);
  SpectralField fine = detail::duhamel_on_mesh(integrand, g, t, mesh.refined());
  DuhamelResult out{fine, (fine - coarse).max_abs(), true};
  out.within_tolerance = out.error_estimate <= tolerance;
  return out;
}

}  // namespace amalgam
