#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "amalgam/grid.hpp"

namespace amalgam {

using cplx = std::complex<double>;

/**
 * Complex amplitudes F f(xi) on a frequency lattice.
 *
 * Convention: F f(xi) = int f(x) e^{-i x.xi} dx on R^d and Fourier
 * coefficients on T^d, so f(x) = sum_n F f(n) e^{i n.x} on the torus.
 */
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(GridSpec grid) : grid_(grid), coeffs_(grid.size()) {}
  SpectralField(GridSpec grid, std::vector<cplx> coeffs)
      : grid_(grid), coeffs_(std::move(coeffs)) {
    require(coeffs_.size() == grid_.size(),
            "field: coefficient count does not match the lattice size");
  }

  static SpectralField delta(const GridSpec& grid, const LatticePoint& k, cplx value = 1.0) {
    require(grid.contains(k), "field: delta location outside the lattice");
    SpectralField f(grid);
    f[grid.flat(k)] = value;
    return f;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }

  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  const cplx& operator[](std::size_t i) const { return coeffs_[i]; }

  cplx at(const LatticePoint& k) const {
    return grid_.contains(k) ? coeffs_[grid_.flat(k)] : cplx{};
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

  bool is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const cplx& c) { return c == cplx{}; });
  }

  /// Transform of the complex conjugate: F(conj f)(xi) = conj(F f(-xi)).
  SpectralField conj_reflect() const {
    SpectralField out(grid_);
    const std::size_t n = size();
    // Flat index of -k is (n-1) - flat(k) for the symmetric lattice.
    for (std::size_t i = 0; i < n; ++i) out[n - 1 - i] = std::conj(coeffs_[i]);
    return out;
  }

  /// True when F f is real and even to within `tol` (absolute).
  bool is_real_even(double tol = 1e-12) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      if (std::abs(coeffs_[i].imag()) > tol) return false;
      if (std::abs(coeffs_[i] - coeffs_[n - 1 - i]) > tol) return false;
    }
    return true;
  }

  /// Largest |k_a| over nonzero coefficients (lattice units); -1 for the zero field.
  int support_radius() const {
    int r = -1;
    for_each_point(grid_, [&](std::size_t i, const LatticePoint& k) {
      if (coeffs_[i] == cplx{}) return;
      for (int a = 0; a < grid_.dim; ++a) r = std::max(r, std::abs(k[a]));
    });
    return r;
  }

  SpectralField& operator+=(const SpectralField& o) {
    require(o.grid_ == grid_, "field: grid mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  SpectralField& operator-=(const SpectralField& o) {
    require(o.grid_ == grid_, "field: grid mismatch");
    for (std::size_t i = 0; i < size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  SpectralField& operator*=(cplx a) {
    for (auto& c : coeffs_) c *= a;
    return *this;
  }

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(cplx s, SpectralField a) { return a *= s; }

 private:
  GridSpec grid_;
  std::vector<cplx> coeffs_;
};

/// Copies `f` onto `target` (same dim/domain/mesh); coefficients outside the
/// target lattice are dropped, new lattice points are zero.
inline SpectralField embed(const SpectralField& f, const GridSpec& target) {
  const GridSpec& g = f.grid();
  require(g.dim == target.dim && g.domain == target.domain && g.mesh == target.mesh,
          "embed: grids differ in dimension, domain or mesh");
  SpectralField out(target);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (target.contains(k)) out[target.flat(k)] = f[i];
  });
  return out;
}

/// Initial data (u0, u1) for the wave equation.
struct DataPair {
  SpectralField u0;
  SpectralField u1;

  DataPair(SpectralField first, SpectralField second)
      : u0(std::move(first)), u1(std::move(second)) {
    require(u0.grid() == u1.grid(), "data pair: u0 and u1 live on different grids");
  }

  static DataPair position_only(SpectralField f) {
    SpectralField zero(f.grid());
    return DataPair(std::move(f), std::move(zero));
  }

  const GridSpec& grid() const { return u0.grid(); }

  int support_radius() const { return std::max(u0.support_radius(), u1.support_radius()); }
};

inline DataPair embed(const DataPair& p, const GridSpec& target) {
  return DataPair(embed(p.u0, target), embed(p.u1, target));
}

}  // namespace amalgam
