#pragma once

#include <cmath>
#include <vector>

#include "amalgam/fft.hpp"
#include "amalgam/field.hpp"

namespace amalgam {

/// Physical-space samples of a lattice-supported function at
/// x_j = period * j / points along each axis (row-major).
struct PhysicalSamples {
  GridSpec grid;
  int points = 0;
  std::vector<cplx> values;
};

namespace detail {

/// alpha in f(x_j) = alpha * sum_k F f(k/M) e^{i x_j k/M}: 1 on the torus,
/// (2 pi M)^{-d} for the inverse of F f = int f e^{-ix.xi} dx as a Riemann sum.
inline double synthesis_scale(const GridSpec& g) {
  return g.domain == Domain::Torus ? 1.0 : std::pow(g.period(), -g.dim);
}

inline std::size_t cube_volume(int dim, int n) {
  std::size_t v = 1;
  for (int a = 0; a < dim; ++a) v *= static_cast<std::size_t>(n);
  return v;
}

inline std::size_t wrapped_index(const LatticePoint& k, int dim, int P) {
  std::size_t idx = 0;
  for (int a = 0; a < dim; ++a) idx = idx * P + static_cast<std::size_t>(((k[a] % P) + P) % P);
  return idx;
}

inline std::vector<cplx> scatter(const SpectralField& f, int P, double scale) {
  const GridSpec& g = f.grid();
  std::vector<cplx> buf(cube_volume(g.dim, P));
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    buf[wrapped_index(k, g.dim, P)] = scale * f[i];
  });
  return buf;
}

inline SpectralField gather(const std::vector<cplx>& buf, int P, const GridSpec& g, double scale) {
  SpectralField out(g);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    out[i] = scale * buf[wrapped_index(k, g.dim, P)];
  });
  return out;
}

}  // namespace detail

/// Samples of f on `points` nodes per axis (default: one per lattice frequency).
inline PhysicalSamples inverse_transform(const SpectralField& f, int points = 0) {
  const GridSpec& g = f.grid();
  if (points == 0) points = g.axis_size();
  require(points >= g.axis_size(), "inverse_transform: fewer samples than lattice points");
  auto buf = detail::scatter(f, points, detail::synthesis_scale(g));
  fft::transform(buf, g.dim, points, +1);
  return PhysicalSamples{g, points, std::move(buf)};
}

/// Lattice coefficients of a sampled function; exact inverse of inverse_transform.
inline SpectralField forward_transform(const PhysicalSamples& s) {
  const GridSpec& g = s.grid;
  require(s.points >= g.axis_size(), "forward_transform: fewer samples than lattice points");
  require(s.values.size() == detail::cube_volume(g.dim, s.points),
          "forward_transform: sample count does not match the lattice");
  auto buf = s.values;
  fft::transform(buf, g.dim, s.points, -1);
  const double scale = 1.0 / (detail::synthesis_scale(g) *
                              static_cast<double>(detail::cube_volume(g.dim, s.points)));
  return detail::gather(buf, s.points, g, scale);
}

/// Weight c with c * mean_j |f(x_j)|^2 = sum_xi |F f(xi)|^2 * cell_measure, so
/// that physical L^2 norms are Plancherel-isometric to the frequency side.
inline double physical_l2_weight(const GridSpec& g) {
  const double a = detail::synthesis_scale(g);
  return g.cell_measure() / (a * a);
}

/**
 * Transform of the pointwise product f_1 ... f_r conj(f_{r+1}) ... conj(f_m)
 * restricted to the common lattice. With anti-aliasing the samples are taken on
 * a zero-padded grid wide enough that the product is exact before cropping;
 * without it an AliasingError is raised if the summed supports leave the lattice.
 */
inline SpectralField multiply(const std::vector<const SpectralField*>& factors, int plain_count,
                              bool anti_alias = true) {
  require(!factors.empty(), "multiply: no factors");
  require(plain_count >= 0 && plain_count <= static_cast<int>(factors.size()),
          "multiply: invalid conjugation split");
  const GridSpec& g = factors.front()->grid();
  int radius_sum = 0;
  for (const auto* f : factors) {
    require(f->grid() == g, "multiply: factors live on different grids");
    const int r = f->support_radius();
    if (r < 0) return SpectralField(g);
    radius_sum += r;
  }
  int points = g.axis_size();
  if (anti_alias) {
    points = fft::fast_size(std::max(points, radius_sum + g.half_width() + 1));
  } else if (radius_sum > g.half_width()) {
    throw AliasingError("multiply: product support radius " + std::to_string(radius_sum) +
                        " exceeds the lattice half-width " + std::to_string(g.half_width()) +
                        " and anti-aliasing is disabled");
  }
  std::vector<cplx> acc;
  for (std::size_t m = 0; m < factors.size(); ++m) {
    auto samples = inverse_transform(*factors[m], points);
    const bool conj = static_cast<int>(m) >= plain_count;
    if (m == 0) {
      acc = std::move(samples.values);
      if (conj)
        for (auto& v : acc) v = std::conj(v);
      continue;
    }
    for (std::size_t j = 0; j < acc.size(); ++j)
      acc[j] *= conj ? std::conj(samples.values[j]) : samples.values[j];
  }
  return forward_transform(PhysicalSamples{g, points, std::move(acc)});
}

/// F(f g) or F(f conj g), computed through physical space.
inline SpectralField pointwise_product(const SpectralField& f, const SpectralField& g,
                                       bool conjugate_g, bool anti_alias = true) {
  return multiply({&f, &g}, conjugate_g ? 1 : 2, anti_alias);
}

}  // namespace amalgam
