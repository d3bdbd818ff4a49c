#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "amalgam/propagator.hpp"

namespace amalgam::oracle {

/// Largest lattice accepted by the brute-force oracles (257 points in d = 1).
inline constexpr std::size_t kBruteCap = 4913;

/**
 * Direct discrete convolution F(fg) = alpha * sum_eta F f(eta) F g(xi - eta),
 * accumulated in long double, on a lattice wide enough for the full support
 * (half-width K_a + K_b). alpha is 1 on the torus, (2 pi M)^{-d} otherwise.
 */
inline SpectralField brute_convolution(const SpectralField& a, const SpectralField& b) {
  const GridSpec& ga = a.grid();
  const GridSpec& gb = b.grid();
  require(ga.dim == gb.dim && ga.domain == gb.domain && ga.mesh == gb.mesh,
          "brute_convolution: grids differ in dimension, domain or mesh");
  if (a.size() > kBruteCap || b.size() > kBruteCap)
    throw ValidationError("brute_convolution: lattice exceeds the oracle cap of " + std::to_string(kBruteCap) +
                          " points");
  const GridSpec out_grid = make_grid(ga.dim, ga.extent + gb.extent, ga.domain, ga.mesh);
  const long double alpha =
      ga.domain == Domain::Torus ? 1.0L : std::pow(2.0L * static_cast<long double>(M_PI) * ga.mesh, -ga.dim);
  std::vector<long double> re(out_grid.size(), 0.0L), im(out_grid.size(), 0.0L);
  for_each_point(ga, [&](std::size_t i, const LatticePoint& ka) {
    const cplx va = a[i];
    if (va == cplx{}) return;
    for_each_point(gb, [&](std::size_t j, const LatticePoint& kb) {
      const cplx vb = b[j];
      if (vb == cplx{}) return;
      LatticePoint k{ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2]};
      const std::size_t o = out_grid.flat(k);
      const long double ar = va.real(), ai = va.imag(), br = vb.real(), bi = vb.imag();
      re[o] += ar * br - ai * bi;
      im[o] += ar * bi + ai * br;
    });
  });
  SpectralField out(out_grid);
  for (std::size_t o = 0; o < out.size(); ++o)
    out[o] = cplx(static_cast<double>(alpha * re[o]), static_cast<double>(alpha * im[o]));
  return out;
}

inline SpectralField crop(const SpectralField& f, const GridSpec& target) { return embed(f, target); }

/// F of u^rho conj(u)^(sigma - rho) by a chain of exact convolutions, cropped to u's lattice.
inline SpectralField brute_power(const SpectralField& u, int sigma, int rho) {
  const SpectralField ubar = u.conj_reflect();
  SpectralField acc = rho > 0 ? u : ubar;
  for (int l = 2; l <= sigma; ++l) acc = brute_convolution(acc, l <= rho ? u : ubar);
  return crop(acc, u.grid());
}

struct DsResult {
  bool ok = true;
  double worst_ratio = 0.0;
  int worst_k = 1;
  bool hypothesis_ok = true;
  std::vector<long double> terms;
};

/// C_0 = (pi^2/6) (C sigma^2)^{1/(sigma-1)} b_1.
inline long double ds_constant(int sigma, double C, double b1) {
  const long double pi = static_cast<long double>(M_PI);
  return pi * pi / 6.0L * std::pow(static_cast<long double>(C) * sigma * sigma, 1.0L / (sigma - 1)) * b1;
}

namespace detail {

/// sum over compositions k_1 + ... + k_sigma = k (k_i >= 1) of b_{k_1} ... b_{k_sigma}.
inline std::vector<long double> composition_sums(const std::vector<long double>& b, int sigma) {
  const int kmax = static_cast<int>(b.size()) - 1;
  std::vector<long double> power = b;
  for (int j = 2; j <= sigma; ++j) {
    std::vector<long double> next(kmax + 1, 0.0L);
    for (int k = 1; k <= kmax; ++k)
      for (int i = 1; i < k; ++i) next[k] += b[i] * power[k - i];
    power.swap(next);
  }
  return power;
}

inline DsResult ds_check(int sigma, double C, double b1, std::vector<long double> b) {
  DsResult r;
  const int kmax = static_cast<int>(b.size()) - 1;
  const auto sums = composition_sums(b, sigma);
  const long double c0 = ds_constant(sigma, C, b1);
  for (int k = 1; k <= kmax; ++k) {
    if (!std::isfinite(static_cast<double>(b[k]))) throw NumericError("ds_verify: sequence overflow");
    if (k >= 2 && b[k] > C * sums[k] * (1.0L + 1e-15L)) r.hypothesis_ok = false;
    if (b1 == 0.0) continue;
    const long double ratio = b[k] / (b1 * std::pow(c0, static_cast<long double>(k - 1)));
    if (ratio > r.worst_ratio) {
      r.worst_ratio = static_cast<double>(ratio);
      r.worst_k = k;
    }
  }
  r.ok = r.worst_ratio <= 1.0 + 1e-12;
  r.terms = std::move(b);
  return r;
}

}  // namespace detail

/**
 * Saturated recursion b_1 given, b_k = C sum_{k_1+..+k_sigma=k} b_{k_1}..b_{k_sigma},
 * checked against b_k <= b_1 C_0^{k-1}. worst_ratio is max_k b_k / (b_1 C_0^{k-1}).
 */
inline DsResult ds_verify(int sigma, double C, double b1, int kmax) {
  require(sigma >= 2, "ds_verify: sigma must be >= 2");
  require(C > 0.0 && b1 >= 0.0, "ds_verify: need C > 0 and b1 >= 0");
  require(kmax >= 1 && kmax <= 60, "ds_verify: kmax must lie in [1, 60]");
  std::vector<long double> b(kmax + 1, 0.0L);
  b[1] = b1;
  for (int k = 2; k <= kmax; ++k) {
    std::vector<long double> prefix(b.begin(), b.begin() + k);
    prefix.resize(k + 1, 0.0L);
    b[k] = C * detail::composition_sums(prefix, sigma)[k];
    if (!std::isfinite(static_cast<double>(b[k]))) throw NumericError("ds_verify: sequence overflow");
  }
  return detail::ds_check(sigma, C, b1, std::move(b));
}

/// Same check for a given sequence terms[0] = b_1, terms[1] = b_2, ...; also
/// reports whether the recursive hypothesis itself holds.
inline DsResult ds_verify_terms(int sigma, double C, const std::vector<double>& terms) {
  require(sigma >= 2 && C > 0.0, "ds_verify: need sigma >= 2 and C > 0");
  require(!terms.empty() && terms.size() <= 60, "ds_verify: between 1 and 60 terms");
  std::vector<long double> b(terms.size() + 1, 0.0L);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require(terms[i] >= 0.0, "ds_verify: terms must be >= 0");
    b[i + 1] = terms[i];
  }
  return detail::ds_check(sigma, C, terms.front(), std::move(b));
}

/// Saturated sequence for C = b_1 = 1 in exact integer arithmetic (Catalan
/// numbers for sigma = 2). Throws on 64-bit overflow.
inline std::vector<std::uint64_t> ds_exact(int sigma, int kmax) {
  require(sigma >= 2 && kmax >= 1, "ds_exact: need sigma >= 2 and kmax >= 1");
  std::vector<std::uint64_t> b(kmax + 1, 0);
  b[1] = 1;
  for (int k = 2; k <= kmax; ++k) {
    std::vector<std::uint64_t> power(b.begin(), b.begin() + k);
    power.resize(k + 1, 0);
    for (int j = 2; j <= sigma; ++j) {
      std::vector<std::uint64_t> next(k + 1, 0);
      for (int kk = 1; kk <= k; ++kk)
        for (int i = 1; i < kk; ++i) {
          std::uint64_t prod = 0;
          if (__builtin_mul_overflow(b[i], power[kk - i], &prod) ||
              __builtin_add_overflow(next[kk], prod, &next[kk]))
            throw NumericError("ds_exact: 64-bit overflow");
        }
      power.swap(next);
    }
    b[k] = power[k];
  }
  return b;
}

/// Largest |xi| on the lattice.
inline double max_frequency(const GridSpec& g) {
  LatticePoint corner{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) corner[a] = g.half_width();
  return g.magnitude(corner);
}

/// Step used when the caller does not pick one: T / ceil(50 T max|xi|).
inline double default_rk4_step(const GridSpec& g, double T) {
  const double w = std::max(1.0, max_frequency(g));
  return T / std::ceil(50.0 * T * w);
}

/**
 * Classical RK4 on the frequency-space system u'' = -|xi|^2 u + sign F(u^rho conj(u)^(sigma-rho)),
 * with the nonlinearity from exact convolution chains. dt is shrunk so that
 * T is an integer number of steps.
 */
inline SpectralField rk4_frequency_oracle(const DataPair& pair, const NlwProblem& problem, double T, double dt) {
  require(T >= 0.0 && dt > 0.0, "rk4: need T >= 0 and dt > 0");
  const GridSpec& g = pair.grid();
  const double wmax = max_frequency(g);
  if (wmax > 0.0 && dt > 0.1 / wmax * (1.0 + 1e-12))
    throw ValidationError("rk4: step " + std::to_string(dt) + " exceeds the stability margin 0.1/max|xi| = " +
                          std::to_string(0.1 / wmax));
  const int steps = T == 0.0 ? 0 : static_cast<int>(std::ceil(T / dt - 1e-9));
  const double h = steps == 0 ? 0.0 : T / steps;
  const auto w = frequency_magnitudes(g);
  const std::size_t n = g.size();

  SpectralField u = pair.u0, v = pair.u1;
  auto accel = [&](const SpectralField& x) {
    SpectralField a = brute_power(x, problem.sigma, problem.rho);
    for (std::size_t i = 0; i < n; ++i) a[i] = static_cast<double>(problem.sign) * a[i] - w[i] * w[i] * x[i];
    return a;
  };
  auto axpy = [](const SpectralField& x, double c, const SpectralField& y) {
    SpectralField out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c * y[i];
    return out;
  };
  for (int s = 0; s < steps; ++s) {
    const SpectralField k1u = v, k1v = accel(u);
    const SpectralField u2 = axpy(u, h / 2, k1u), v2 = axpy(v, h / 2, k1v);
    const SpectralField k2u = v2, k2v = accel(u2);
    const SpectralField u3 = axpy(u, h / 2, k2u), v3 = axpy(v, h / 2, k2v);
    const SpectralField k3u = v3, k3v = accel(u3);
    const SpectralField u4 = axpy(u, h, k3u), v4 = axpy(v, h, k3v);
    const SpectralField k4u = v4, k4v = accel(u4);
    for (std::size_t i = 0; i < n; ++i) {
      u[i] += h / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
      v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
  }
  return u;
}

/// Linear-wave energy sum_xi (|xi|^2 |u|^2 + |u'|^2) for a frequency-space state.
inline double linear_energy(const SpectralField& u, const SpectralField& ut) {
  const auto w = frequency_magnitudes(u.grid());
  double e = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) e += w[i] * w[i] * std::norm(u[i]) + std::norm(ut[i]);
  return e;
}

/**
 * F S_2(t)(2 n0) for sigma = rho = 2, F u0 = delta_{n0}, u1 = 0, sign +1 on T^1:
 * int_0^t sin(2n(t - tau))/(2n) cos^2(n tau) dtau = (1 - cos 2nt + nt sin 2nt) / (8 n^2), n = |n0|.
 */
inline cplx s2_closed_form(int n0, double t) {
  require(n0 != 0, "s2_closed_form: n0 must be nonzero");
  const double n = std::abs(n0);
  return (1.0 - std::cos(2.0 * n * t) + n * t * std::sin(2.0 * n * t)) / (8.0 * n * n);
}

}  // namespace amalgam::oracle
