#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "amalgam/transforms.hpp"
#include "amalgam/window.hpp"

namespace amalgam {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Family { FourierAmalgam, FourierLebesgue, Modulation, WienerAmalgam, Sobolev };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::FourierAmalgam: return "amalgam";
    case Family::FourierLebesgue: return "fourier-lebesgue";
    case Family::Modulation: return "modulation";
    case Family::WienerAmalgam: return "wiener";
    case Family::Sobolev: return "sobolev";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  if (s == "amalgam" || s == "fourier-amalgam") return Family::FourierAmalgam;
  if (s == "fourier-lebesgue" || s == "fl") return Family::FourierLebesgue;
  if (s == "modulation") return Family::Modulation;
  if (s == "wiener" || s == "wiener-amalgam") return Family::WienerAmalgam;
  if (s == "sobolev") return Family::Sobolev;
  throw ValidationError("family: unknown space family '" + s + "'");
}

/// One of the weighted spaces: amalgam (p,q,s), FL^q_s, M^{2,q}_s, W^{2,q}_s, H^s.
struct SpaceSpec {
  Family family = Family::FourierAmalgam;
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;

  static SpaceSpec make(Family family, double p, double q, double s) {
    require(p >= 1.0 && q >= 1.0, "space: exponents p, q must lie in [1, inf]");
    require(std::isfinite(s), "space: regularity s must be finite");
    if (family == Family::Modulation || family == Family::WienerAmalgam)
      require(p == 2.0, "space: modulation and Wiener amalgam norms are implemented for p = 2 only");
    if (family == Family::Sobolev) p = q = 2.0;
    if (family == Family::FourierLebesgue) p = q;
    return SpaceSpec{family, p, q, s};
  }

  SpaceSpec with_regularity(double s2) const { return SpaceSpec{family, p, q, s2}; }
};

inline double japanese(const LatticePoint& n, int dim) {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += static_cast<double>(n[a]) * n[a];
  return std::sqrt(1.0 + r2);
}

namespace detail {

/// Weighted l^p / L^p sum: (sum w_i |x_i|^p)^{1/p}, or max |x_i| for p = inf.
class LpAccumulator {
 public:
  explicit LpAccumulator(double p) : p_(p) {}
  void add(double x, double w = 1.0) {
    x = std::abs(x);
    if (x == 0.0) return;
    if (std::isinf(p_)) {
      max_ = std::max(max_, x);
      return;
    }
    // Rescaled running sum: total = max_^p * sum_.
    if (x > max_) {
      if (max_ > 0.0) sum_ *= std::pow(max_ / x, p_);
      max_ = x;
    }
    sum_ += w * std::pow(x / max_, p_);
  }
  double value() const {
    if (max_ == 0.0) return 0.0;
    if (std::isinf(p_)) return max_;
    return max_ * std::pow(sum_, 1.0 / p_);
  }

 private:
  double p_;
  double max_ = 0.0;
  double sum_ = 0.0;
};

inline std::size_t cube_slot(const GridSpec& g, const LatticePoint& n) {
  std::size_t idx = 0;
  const auto width = static_cast<std::size_t>(2 * g.extent + 1);
  for (int a = 0; a < g.dim; ++a) idx = idx * width + static_cast<std::size_t>(n[a] + g.extent);
  return idx;
}

}  // namespace detail

/// || ||chi_{n+Q_1} F f||_{L^p_xi} <n>^s ||_{l^q_n}.
inline double fourier_amalgam_norm(const SpectralField& f, double p, double q, double s) {
  const GridSpec& g = f.grid();
  const double w = g.cell_measure();
  std::map<std::size_t, std::pair<LatticePoint, detail::LpAccumulator>> cubes;
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] == cplx{}) return;
    const LatticePoint n = cube_of(g, k);
    auto it = cubes.try_emplace(detail::cube_slot(g, n), n, detail::LpAccumulator(p)).first;
    it->second.second.add(std::abs(f[i]), w);
  });
  detail::LpAccumulator outer(q);
  for (const auto& [slot, entry] : cubes)
    outer.add(entry.second.value() * std::pow(japanese(entry.first, g.dim), s));
  return outer.value();
}

/// || F f <xi>^s ||_{L^q}, Riemann weighted on the Euclidean lattice.
inline double fl_norm(const SpectralField& f, double q, double s) {
  const GridSpec& g = f.grid();
  const double w = g.cell_measure();
  detail::LpAccumulator acc(q);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] == cplx{}) return;
    const double m = g.magnitude(k);
    acc.add(std::abs(f[i]) * std::pow(1.0 + m * m, s / 2.0), w);
  });
  return acc.value();
}

inline double sobolev_norm(const SpectralField& f, double s) { return fl_norm(f, 2.0, s); }

/// || <n>^s ||sigma_n F f||_{L^2} ||_{l^q}: L^2_x via Plancherel.
inline double modulation_norm(const SpectralField& f, double q, double s) {
  const GridSpec& g = f.grid();
  const WindowBump bump(g.mesh);
  const double w = g.cell_measure();
  std::map<LatticePoint, detail::LpAccumulator> pieces;
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] == cplx{}) return;
    for (const auto& n : window_candidates(bump, g, k)) {
      const double win = bump.window(g, k, n);
      if (win != 0.0)
        pieces.try_emplace(n, detail::LpAccumulator(2.0)).first->second.add(win * std::abs(f[i]), w);
    }
  });
  detail::LpAccumulator outer(q);
  for (const auto& [n, inner] : pieces) outer.add(inner.value() * std::pow(japanese(n, g.dim), s));
  return outer.value();
}

/**
 * || || <n>^s box_n f(x) ||_{l^q_n} ||_{L^2_x}. With non-overlapping windows
 * (torus) |box_n f(x)| is constant in x and the norm reduces exactly to FL^q_s;
 * otherwise L^2_x is a sample mean on a 2x oversampled physical grid.
 */
inline double wiener_amalgam_norm(const SpectralField& f, double q, double s) {
  const GridSpec& g = f.grid();
  const auto windows = active_windows(f);
  if (g.mesh == 1) {
    detail::LpAccumulator acc(q);
    for (const auto& n : windows) acc.add(std::abs(f.at(n)) * std::pow(japanese(n, g.dim), s));
    return acc.value();
  }
  const int points = fft::fast_size(2 * g.axis_size());
  const std::size_t total = detail::cube_volume(g.dim, points);
  std::vector<detail::LpAccumulator> pointwise(total, detail::LpAccumulator(q));
  for (const auto& n : windows) {
    const double weight = std::pow(japanese(n, g.dim), s);
    const auto samples = inverse_transform(box_op(f, n), points);
    for (std::size_t j = 0; j < total; ++j) pointwise[j].add(weight * std::abs(samples.values[j]));
  }
  double mean = 0.0;
  for (const auto& acc : pointwise) {
    const double v = acc.value();
    mean += v * v;
  }
  mean /= static_cast<double>(total);
  return std::sqrt(physical_l2_weight(g) * mean);
}

inline double norm(const SpectralField& f, const SpaceSpec& spec) {
  switch (spec.family) {
    case Family::FourierAmalgam: return fourier_amalgam_norm(f, spec.p, spec.q, spec.s);
    case Family::FourierLebesgue: return fl_norm(f, spec.q, spec.s);
    case Family::Modulation: return modulation_norm(f, spec.q, spec.s);
    case Family::WienerAmalgam: return wiener_amalgam_norm(f, spec.q, spec.s);
    case Family::Sobolev: return sobolev_norm(f, spec.s);
  }
  return 0.0;
}

/**
 * The single n = n0 term of the outer l^q sum. Amalgam-type families use the
 * sharp cube, the windowed families use ||sigma_{n0} F f||_{L^2} (Plancherel).
 * The weight is <n0>^s for every family.
 */
inline double restricted_norm(const SpectralField& f, const SpaceSpec& spec, const LatticePoint& n0) {
  const GridSpec& g = f.grid();
  const double w = g.cell_measure();
  const double weight = std::pow(japanese(n0, g.dim), spec.s);
  if (spec.family == Family::Modulation || spec.family == Family::WienerAmalgam) {
    const WindowBump bump(g.mesh);
    detail::LpAccumulator acc(2.0);
    for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
      if (f[i] != cplx{}) acc.add(bump.window(g, k, n0) * std::abs(f[i]), w);
    });
    return acc.value() * weight;
  }
  const double p = spec.family == Family::FourierAmalgam ? spec.p
                   : spec.family == Family::Sobolev      ? 2.0
                                                         : spec.q;
  detail::LpAccumulator acc(p);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] != cplx{} && cube_of(g, k) == n0) acc.add(std::abs(f[i]), w);
  });
  return acc.value() * weight;
}

/// ||u0||_{X_s} + sqrt(2) ||u1||_{X_{s-1}}.
inline double pair_norm(const DataPair& pair, const SpaceSpec& spec) {
  return norm(pair.u0, spec) + std::sqrt(2.0) * norm(pair.u1, spec.with_regularity(spec.s - 1.0));
}

/// Pair norm in FL^1 x FL^1_{-1}, the size that controls the Picard series.
inline double fl1_pair_norm(const DataPair& pair) {
  return fl_norm(pair.u0, 1.0, 0.0) + std::sqrt(2.0) * fl_norm(pair.u1, 1.0, -1.0);
}

struct AlgebraCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool ok = false;
};

/**
 * ||f g||_X <= ||f||_{FL^1} ||g||_X. The product is formed on a lattice wide
 * enough to hold its full support, so no frequencies are cropped from lhs.
 */
inline AlgebraCheck algebra_check(const SpectralField& f, const SpectralField& g,
                                  const SpaceSpec& spec, double tol = 1e-10) {
  require(f.grid() == g.grid(), "algebra_check: grid mismatch");
  const GridSpec& grid = f.grid();
  const int r = std::max(0, f.support_radius()) + std::max(0, g.support_radius());
  const int extent = std::max(grid.extent, (r + grid.mesh - 1) / grid.mesh);
  const GridSpec wide = with_extent(grid, extent);
  const auto fw = embed(f, wide);
  const auto gw = embed(g, wide);
  AlgebraCheck out;
  out.lhs = norm(pointwise_product(fw, gw, false), spec);
  out.rhs = fl_norm(f, 1.0, 0.0) * norm(g, spec);
  out.ok = out.lhs <= out.rhs * (1.0 + tol);
  return out;
}

}  // namespace amalgam
