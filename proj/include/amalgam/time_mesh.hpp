#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "amalgam/errors.hpp"

namespace amalgam {

enum class Quadrature { Simpson, GaussLegendre };

inline std::string to_string(Quadrature q) {
  return q == Quadrature::Simpson ? "simpson" : "gauss-legendre";
}

/**
 * Time discretisation for Duhamel integrals. The interval [0, t] is split into
 * equal panels; each panel carries the nodes of its rule. Simpson panels hold
 * three equispaced nodes (two subintervals), Gauss-Legendre panels hold the
 * panel_order + 1 Gauss-Lobatto-Legendre nodes so panel endpoints are shared.
 */
struct TimeMesh {
  Quadrature quadrature = Quadrature::GaussLegendre;
  int nodes_per_unit = 64;
  int panel_order = 16;

  TimeMesh refined(int factor = 2) const {
    TimeMesh m = *this;
    m.nodes_per_unit *= factor;
    return m;
  }
};

/// Nodes on [0, 1] and the cumulative integration matrix
/// weights[i][j] = int_0^{nodes[i]} l_j(x) dx for the Lagrange basis l_j.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<std::vector<double>> weights;

  int order() const { return static_cast<int>(nodes.size()) - 1; }
};

namespace detail {

/// Legendre P_0..P_n at x.
inline std::vector<long double> legendre_values(int n, long double x) {
  std::vector<long double> p(n + 2);
  p[0] = 1.0L;
  if (n + 1 >= 1) p[1] = x;
  for (int j = 1; j <= n; ++j) p[j + 1] = ((2 * j + 1) * x * p[j] - j * p[j - 1]) / (j + 1);
  return p;
}

/// Gauss-Lobatto-Legendre nodes of degree n on [-1, 1], ascending.
inline std::vector<long double> lobatto_nodes(int n) {
  std::vector<long double> x(n + 1);
  for (int i = 0; i <= n; ++i) x[i] = -std::cos(static_cast<long double>(M_PI) * i / n);
  // Newton iteration on (1 - x^2) P_n'(x) written through P_{n-1}, P_n.
  for (int it = 0; it < 100; ++it) {
    long double change = 0.0L;
    for (int i = 1; i < n; ++i) {
      const auto p = legendre_values(n, x[i]);
      const long double xold = x[i];
      x[i] = xold - (xold * p[n] - p[n - 1]) / ((n + 1) * p[n]);
      change = std::max(change, std::abs(x[i] - xold));
    }
    if (change < 1e-18L) break;
  }
  x[0] = -1.0L;
  x[n] = 1.0L;
  return x;
}

/// Solves A X = B in place (A n x n, B n x m), partial pivoting.
inline void solve_dense(std::vector<std::vector<long double>> a, std::vector<std::vector<long double>>& b) {
  const std::size_t n = a.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const long double f = a[r][c] / a[c][c];
      if (f == 0.0L) continue;
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      for (std::size_t k = 0; k < b[r].size(); ++k) b[r][k] -= f * b[c][k];
    }
  }
  for (std::size_t r = 0; r < n; ++r)
    for (auto& v : b[r]) v /= a[r][r];
}

/// Cumulative integration matrix for interpolation at `nodes` (on [-1, 1]),
/// returned for the reference interval [0, 1].
inline PanelRule integration_rule(const std::vector<long double>& nodes) {
  const int n = static_cast<int>(nodes.size()) - 1;
  // Legendre Vandermonde V[i][j] = P_j(x_i); antiderivative table I[i][j].
  std::vector<std::vector<long double>> vt(n + 1, std::vector<long double>(n + 1));
  std::vector<std::vector<long double>> it(n + 1, std::vector<long double>(n + 1));
  for (int i = 0; i <= n; ++i) {
    const auto p = legendre_values(n, nodes[i]);
    for (int j = 0; j <= n; ++j) {
      vt[j][i] = p[j];
      it[j][i] = j == 0 ? nodes[i] + 1.0L : (p[j + 1] - p[j - 1]) / (2 * j + 1);
    }
  }
  // W V = I  <=>  V^T W^T = I^T.
  solve_dense(vt, it);
  PanelRule rule;
  rule.nodes.resize(n + 1);
  rule.weights.assign(n + 1, std::vector<double>(n + 1));
  for (int i = 0; i <= n; ++i) {
    rule.nodes[i] = static_cast<double>((nodes[i] + 1.0L) / 2.0L);
    for (int j = 0; j <= n; ++j) rule.weights[i][j] = static_cast<double>(it[j][i] / 2.0L);
  }
  return rule;
}

}  // namespace detail

inline PanelRule panel_rule(const TimeMesh& mesh) {
  if (mesh.quadrature == Quadrature::Simpson)
    return detail::integration_rule({-1.0L, 0.0L, 1.0L});
  require(mesh.panel_order >= 2 && mesh.panel_order <= 64,
          "time mesh: panel order must lie in [2, 64]");
  return detail::integration_rule(detail::lobatto_nodes(mesh.panel_order));
}

/// Number of equal panels covering [0, t].
inline int panel_count(const TimeMesh& mesh, double t) {
  require(mesh.nodes_per_unit >= 1, "time mesh: nodes per unit time must be >= 1");
  require(t >= 0.0 && std::isfinite(t), "time mesh: t must be finite and >= 0");
  const double nodes = std::ceil(t * mesh.nodes_per_unit);
  if (mesh.quadrature == Quadrature::Simpson) {
    // Even number of subintervals, two per panel.
    return std::max(1, static_cast<int>(std::ceil(nodes / 2.0)));
  }
  return std::max(1, static_cast<int>(std::ceil(nodes / mesh.panel_order)));
}

}  // namespace amalgam
