#pragma once

#include <cmath>
#include <set>
#include <vector>

#include "amalgam/field.hpp"

namespace amalgam {

/// Index n of the half-open unit cube n + (-1/2, 1/2] containing k/mesh.
inline int cube_index(int k, int mesh) {
  // n = ceil((2k - M) / (2M)) in exact integer arithmetic.
  const int num = 2 * k - mesh;
  const int den = 2 * mesh;
  return num >= 0 ? (num + den - 1) / den : -((-num) / den);
}

inline LatticePoint cube_of(const GridSpec& g, const LatticePoint& k) {
  LatticePoint n{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) n[a] = cube_index(k[a], g.mesh);
  return n;
}

/// Zeroes every coefficient outside the cube n + (-1/2, 1/2]^d.
inline SpectralField cube_restrict(const SpectralField& f, const LatticePoint& n) {
  const GridSpec& g = f.grid();
  SpectralField out(g);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (cube_of(g, k) == n) out[i] = f[i];
  });
  return out;
}

/**
 * Smooth bump h with h = 1 on [-1/2, 1/2] and h = 0 outside (-1, 1), built
 * from the exp(-1/x) transition and tabulated at the lattice offsets j/mesh.
 * The frequency-uniform windows are sigma_n(xi) = prod_a h(xi_a - n_a) / S(xi_a)
 * with S(x) = sum_l h(x - l); the normalisation factorises over axes.
 */
class WindowBump {
 public:
  explicit WindowBump(int mesh) : mesh_(mesh), table_(2 * mesh + 1) {
    for (int j = -mesh; j <= mesh; ++j) table_[j + mesh] = value(static_cast<double>(j) / mesh);
  }

  static const char* construction() { return "exp(-1/x) smooth step, plateau [-1/2,1/2]"; }

  static double value(double x) {
    const double ax = std::abs(x);
    if (ax <= 0.5) return 1.0;
    if (ax >= 1.0) return 0.0;
    const double y = 2.0 * (1.0 - ax);  // in (0, 1)
    const double a = std::exp(-1.0 / y);
    const double b = std::exp(-1.0 / (1.0 - y));
    return a / (a + b);
  }

  int mesh() const { return mesh_; }

  /// h((k - n*mesh)/mesh) from the table.
  double at_offset(int offset) const {
    return std::abs(offset) > mesh_ ? 0.0 : table_[offset + mesh_];
  }

  /// One-axis window sigma for the lattice coordinate k and window centre n.
  double axis_window(int k, int n) const {
    const double num = at_offset(k - n * mesh_);
    if (num == 0.0) return 0.0;
    return num / axis_normaliser(k);
  }

  double axis_normaliser(int k) const {
    // Only centres within distance < 1 of k/mesh contribute.
    const int lo = static_cast<int>(std::floor(static_cast<double>(k) / mesh_)) - 1;
    double s = 0.0;
    for (int l = lo; l <= lo + 3; ++l) s += at_offset(k - l * mesh_);
    return s;
  }

  double window(const GridSpec& g, const LatticePoint& k, const LatticePoint& n) const {
    double w = 1.0;
    for (int a = 0; a < g.dim && w != 0.0; ++a) w *= axis_window(k[a], n[a]);
    return w;
  }

 private:
  int mesh_;
  std::vector<double> table_;
};

/// Frequency-uniform decomposition operator: coefficients times sigma_n.
inline SpectralField box_op(const SpectralField& f, const LatticePoint& n) {
  const GridSpec& g = f.grid();
  const WindowBump bump(g.mesh);
  SpectralField out(g);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] != cplx{}) out[i] = bump.window(g, k, n) * f[i];
  });
  return out;
}

/// Window centres n with sigma_n(k/mesh) > 0.
inline std::vector<LatticePoint> window_candidates(const WindowBump& bump, const GridSpec& g,
                                                   const LatticePoint& k) {
  std::array<std::vector<int>, 3> cand;
  for (int a = 0; a < 3; ++a) {
    if (a >= g.dim) {
      cand[a] = {0};
      continue;
    }
    const int base = static_cast<int>(std::floor(static_cast<double>(k[a]) / g.mesh));
    for (int n = base - 1; n <= base + 2; ++n)
      if (bump.axis_window(k[a], n) > 0.0) cand[a].push_back(n);
  }
  std::vector<LatticePoint> out;
  for (int n0 : cand[0])
    for (int n1 : cand[1])
      for (int n2 : cand[2]) out.push_back(LatticePoint{n0, n1, n2});
  return out;
}

/// Window centres whose support meets the nonzero coefficients of f.
inline std::set<LatticePoint> active_windows(const SpectralField& f) {
  const GridSpec& g = f.grid();
  const WindowBump bump(g.mesh);
  std::set<LatticePoint> out;
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] == cplx{}) return;
    for (const auto& n : window_candidates(bump, g, k)) out.insert(n);
  });
  return out;
}

}  // namespace amalgam
