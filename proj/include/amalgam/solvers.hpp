#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "amalgam/picard.hpp"

namespace amalgam {

/// Contraction condition for the integral equation in C([0,T], FL^1):
/// T <= 1 and T^2 (2 M)^(sigma - 1) <= 1/8 with M the FL^1 pair norm.
struct Smallness {
  double pair_fl1 = 0.0;
  double measure = 0.0;
  bool ok = false;
};

inline constexpr double kSmallnessThreshold = 0.125;

inline Smallness smallness(const DataPair& pair, const NlwProblem& problem, double T) {
  Smallness s;
  s.pair_fl1 = fl1_pair_norm(pair);
  s.measure = T * T * std::pow(2.0 * s.pair_fl1, problem.sigma - 1);
  s.ok = T <= 1.0 && s.measure <= kSmallnessThreshold;
  return s;
}

inline void require_small(const DataPair& pair, const NlwProblem& problem, double T) {
  const Smallness s = smallness(pair, problem, T);
  if (!s.ok)
    throw ValidationError("solver: smallness violated, need T <= 1 and T^2 (2M)^(sigma-1) <= 1/8; got T = " +
                          std::to_string(T) + ", T^2 (2M)^(sigma-1) = " + std::to_string(s.measure));
}

/**
 * Upper bound on sum_{k > K} ||S_k(T)||_{FL^1} from the a priori envelope
 *   ||S_k(t)||_{FL^1} <= a_k t^{2(k-1)/(sigma-1)} M^k,
 *   a_1 = 1, a_k = (sigma-1)^2 / (2(k-1)(2k-sigma-1)) * sum_{k_1+..+k_sigma=k} a_{k_1}..a_{k_sigma},
 * which follows from |sin((t-tau)w)/w| <= t - tau and the FL^1 algebra property.
 * Terms are summed until they fall below 1e-18 of the running tail, then a
 * geometric remainder with the last ratio is added.
 */
inline double envelope_tail(int sigma, double T, double M, int K) {
  require(sigma >= 2, "envelope: sigma must be >= 2");
  if (M == 0.0 || T == 0.0) return 0.0;
  const long double y = static_cast<long double>(M) * std::pow(static_cast<long double>(T), 2.0L / (sigma - 1));
  const long double ys = std::pow(y, static_cast<long double>(sigma - 1));
  const int kcap = K + 4000;
  // conv[j][k] = (c^{*j})_k with c_k = a_k y^{k-1}.
  std::vector<std::vector<long double>> conv(sigma + 1, std::vector<long double>(kcap + 1, 0.0L));
  long double tail = 0.0L, prev = 0.0L, ratio = 0.0L;
  int rising = 0;
  for (int k = 1; k <= kcap; ++k) {
    for (int j = 2; j <= sigma; ++j) {
      long double s = 0.0L;
      for (int i = 1; i < k; ++i) s += conv[1][i] * conv[j - 1][k - i];
      conv[j][k] = s;
    }
    long double c = 0.0L;
    if (k == 1) {
      c = 1.0L;
    } else if (k >= sigma) {
      const long double coef =
          static_cast<long double>((sigma - 1) * (sigma - 1)) / (2.0L * (k - 1) * (2.0L * k - sigma - 1));
      c = coef * ys * conv[sigma][k];
    }
    if (!std::isfinite(static_cast<double>(c)))
      throw ConvergenceError("envelope: coefficients overflow, the series bound diverges");
    conv[1][k] = c;
    if (c == 0.0L) continue;
    const long double term = static_cast<long double>(M) * c;
    if (prev > 0.0L) {
      ratio = term / prev;
      rising = ratio >= 1.0L ? rising + 1 : 0;
      if (rising >= 50) throw ConvergenceError("envelope: term ratio stays >= 1, no tail bound");
    }
    prev = term;
    if (k <= K) continue;
    tail += term;
    if (ratio > 0.0L && ratio < 1.0L && term < 1e-18L * tail)
      return static_cast<double>(tail + term * ratio / (1.0L - ratio));
  }
  if (ratio >= 1.0L) throw ConvergenceError("envelope: term ratio >= 1 at the cap, no tail bound");
  return static_cast<double>(tail + prev * ratio / (1.0L - ratio));
}

inline int default_kmax(int sigma) { return 1 + 3 * (sigma - 1); }

struct SeriesSolution {
  SpectralField solution;
  double tail_bound = 0.0;
  int terms_used = 0;
  PicardSeries series;
};

/**
 * u(T) = sum_k S_k(T), summed through kmax or until an active term has FL^1
 * norm below tol. tail_bound bounds the FL^1 norm of everything not summed.
 */
inline SeriesSolution solve_series(const DataPair& pair, const NlwProblem& problem, double T, double tol,
                                   int kmax, const TimeMesh& mesh) {
  require(tol > 0.0, "solve_series: tol must be > 0");
  require_small(pair, problem, T);
  SeriesSolution out;
  out.series = picard_iterates(pair, problem, kmax, T, mesh);
  out.solution = SpectralField(pair.grid());
  for (int k = 1; k <= kmax; ++k) {
    out.solution += out.series.at(k);
    out.terms_used = k;
    if (out.series.info[k - 1].active && out.series.info[k - 1].fl1 < tol) break;
  }
  out.tail_bound = envelope_tail(problem.sigma, T, fl1_pair_norm(pair), out.terms_used);
  return out;
}

struct FixedPointSolution {
  SpectralField solution;
  int iterations = 0;
  double last_difference = 0.0;
};

/**
 * Iterates Psi(u)(t) = S(t)(u0, u1) + sign * Duhamel(u^rho conj(u)^(sigma-rho))(t)
 * from u = S(t)(u0, u1) on the full time mesh, stopping when the sup over
 * nodes of the FL^1 change drops below tol. Three consecutive increases of the
 * change raise ConvergenceError, as does exhausting itermax.
 */
inline FixedPointSolution solve_fixed_point(const DataPair& pair, const NlwProblem& problem, double T,
                                            double tol, int itermax, const TimeMesh& mesh) {
  require(tol > 0.0, "solve_fixed_point: tol must be > 0");
  require(itermax >= 1, "solve_fixed_point: itermax must be >= 1");
  require(T > 0.0, "solve_fixed_point: T must be > 0");
  require(problem.grid == pair.grid(), "solve_fixed_point: data grid differs from the problem grid");
  require_small(pair, problem, T);
  const GridSpec& g = pair.grid();
  FixedPointSolution out;
  out.solution = SpectralField(g);
  if (pair.support_radius() < 0) return out;

  const int half = g.half_width();
  const detail::PaddedTransform padded(
      g, fft::fast_size(std::max(g.axis_size(), problem.sigma * half + half + 1)));
  const std::vector<detail::ProductTerm> power{detail::ProductTerm{
      std::vector<int>(problem.rho, 0), std::vector<int>(problem.sigma - problem.rho, 0), 1.0}};
  const PanelRule rule = panel_rule(mesh);
  const int panels = panel_count(mesh, T);
  detail::PanelKernel kernel(frequency_magnitudes(g), rule, T / panels);
  const std::size_t m = kernel.nodes();
  const double cell = g.cell_measure();

  using Panel = std::vector<std::vector<cplx>>;
  std::vector<Panel> history(panels), linear(panels);
  for (int p = 0; p < panels; ++p) {
    kernel.move_to(p * kernel.step());
    detail::linear_at_nodes(kernel, pair, linear[p]);
  }
  history = linear;

  double previous = kInf;
  int growth = 0;
  std::vector<cplx> phys, buf;
  Panel forcing(m), duhamel_out;
  for (int it = 1; it <= itermax; ++it) {
    detail::DuhamelAccumulator acc(g.size());
    std::vector<Panel> next(panels);
    double diff = 0.0;
    for (int p = 0; p < panels; ++p) {
      kernel.move_to(p * kernel.step());
      for (std::size_t j = 0; j < m; ++j) {
        padded.to_physical(history[p][j], phys);
        detail::accumulate_products(power, {{0, &phys}}, buf);
        padded.to_spectral(buf, forcing[j]);
        for (auto& v : forcing[j]) v *= static_cast<double>(problem.sign);
      }
      acc.advance(kernel, rule, forcing, duhamel_out);
      next[p].resize(m);
      for (std::size_t j = 0; j < m; ++j) {
        next[p][j].resize(g.size());
        double d = 0.0;
        for (std::size_t x = 0; x < g.size(); ++x) {
          next[p][j][x] = linear[p][j][x] + duhamel_out[j][x];
          d += std::abs(next[p][j][x] - history[p][j][x]);
        }
        diff = std::max(diff, d * cell);
      }
    }
    history.swap(next);
    out.iterations = it;
    out.last_difference = diff;
    if (diff < tol) {
      std::copy(history.back().back().begin(), history.back().back().end(), out.solution.coeffs().begin());
      return out;
    }
    growth = diff > previous ? growth + 1 : 0;
    if (growth >= 3)
      throw ConvergenceError("solve_fixed_point: iteration differences grew 3 times in a row (" +
                             std::to_string(diff) + ")");
    previous = diff;
  }
  throw ConvergenceError("solve_fixed_point: no convergence to tol within " + std::to_string(itermax) +
                         " iterations (last change " + std::to_string(out.last_difference) + ")");
}

}  // namespace amalgam
