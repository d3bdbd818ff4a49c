#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>

#include "amalgam/errors.hpp"

namespace amalgam {

enum class Domain { Torus, TruncatedEuclidean };

inline std::string to_string(Domain d) {
  return d == Domain::Torus ? "torus" : "euclidean";
}

/// Integer lattice coordinates k (frequency k/mesh per axis). Unused axes are 0.
using LatticePoint = std::array<int, 3>;

/// Default upper bound on the number of lattice points of one grid.
inline constexpr std::size_t kDefaultLatticeCap = std::size_t{1} << 26;

/**
 * Frequency lattice: integer vectors k with |k_i| <= extent*mesh, representing
 * frequencies xi = k/mesh. On the torus mesh is 1 and xi ranges over Z^d.
 * Flat storage is row-major with the last axis fastest.
 */
struct GridSpec {
  int dim = 1;
  int extent = 1;
  Domain domain = Domain::Torus;
  int mesh = 1;

  /// Largest integer lattice coordinate per axis.
  int half_width() const { return extent * mesh; }
  int axis_size() const { return 2 * extent * mesh + 1; }

  std::size_t size() const {
    std::size_t n = 1;
    for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(axis_size());
    return n;
  }

  double spacing() const { return 1.0 / mesh; }

  /// Weight of one lattice point in frequency integrals: counting measure on
  /// the torus, mesh^{-d} Riemann weight on the truncated Euclidean lattice.
  double cell_measure() const { return std::pow(spacing(), dim); }

  double frequency(int k) const { return static_cast<double>(k) / mesh; }

  LatticePoint point(std::size_t flat) const {
    LatticePoint k{0, 0, 0};
    const auto n = static_cast<std::size_t>(axis_size());
    for (int a = dim - 1; a >= 0; --a) {
      k[a] = static_cast<int>(flat % n) - half_width();
      flat /= n;
    }
    return k;
  }

  bool contains(const LatticePoint& k) const {
    for (int a = 0; a < dim; ++a)
      if (std::abs(k[a]) > half_width()) return false;
    return true;
  }

  std::size_t flat(const LatticePoint& k) const {
    std::size_t idx = 0;
    const auto n = static_cast<std::size_t>(axis_size());
    for (int a = 0; a < dim; ++a)
      idx = idx * n + static_cast<std::size_t>(k[a] + half_width());
    return idx;
  }

  /// Euclidean length |xi| of the frequency at a lattice point.
  double magnitude(const LatticePoint& k) const {
    double r2 = 0.0;
    for (int a = 0; a < dim; ++a) r2 += frequency(k[a]) * frequency(k[a]);
    return std::sqrt(r2);
  }

  /// Period of the physical domain per axis (2*pi*mesh).
  double period() const { return 2.0 * M_PI * mesh; }

  bool operator==(const GridSpec&) const = default;
};

/// Builds a validated grid. Lattice size is capped at `cap` points.
inline GridSpec make_grid(int dim, int extent, Domain domain, int mesh,
                          std::size_t cap = kDefaultLatticeCap) {
  require(dim >= 1 && dim <= 3, "grid: dim must be 1, 2 or 3");
  require(extent >= 1, "grid: extent must be >= 1");
  require(mesh >= 1, "grid: mesh must be >= 1");
  require(domain != Domain::Torus || mesh == 1, "grid: mesh must be 1 on the torus");
  const double axis = 2.0 * static_cast<double>(extent) * mesh + 1.0;
  if (std::pow(axis, dim) > static_cast<double>(cap))
    throw ValidationError("grid: lattice of " + std::to_string(axis) + "^" +
                          std::to_string(dim) + " points exceeds the memory cap of " +
                          std::to_string(cap));
  return GridSpec{dim, extent, domain, mesh};
}

/// Same dimension, domain and mesh as `g`, with a different extent.
inline GridSpec with_extent(const GridSpec& g, int extent) {
  return make_grid(g.dim, extent, g.domain, g.mesh);
}

template <typename Fn>
void for_each_point(const GridSpec& g, Fn&& fn) {
  const std::size_t n = g.size();
  LatticePoint k{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) k[a] = -g.half_width();
  for (std::size_t i = 0; i < n; ++i) {
    fn(i, static_cast<const LatticePoint&>(k));
    for (int a = g.dim - 1; a >= 0; --a) {
      if (++k[a] <= g.half_width()) break;
      k[a] = -g.half_width();
    }
  }
}

}  // namespace amalgam
