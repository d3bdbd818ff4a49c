#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "amalgam/norms.hpp"
#include "amalgam/propagator.hpp"

namespace amalgam {

/// Measure of the numerical Fourier support: coefficients above threshold*max|coeff|,
/// counted on the torus and weighted by mesh^{-d} on the Euclidean lattice.
inline double support_size(const SpectralField& f, double threshold = 1e-12) {
  require(threshold >= 0.0, "support_size: threshold must be >= 0");
  const double cut = threshold * f.max_abs();
  if (f.max_abs() == 0.0) return 0.0;
  std::size_t count = 0;
  for (const auto& c : f.coeffs())
    if (std::abs(c) > cut) ++count;
  return static_cast<double>(count) * f.grid().cell_measure();
}

/// k = 1 + l(sigma - 1): the only orders with a nonempty composition sum.
inline bool active_order(int k, int sigma) { return k >= 1 && (k - 1) % (sigma - 1) == 0; }

struct IterateInfo {
  int k = 1;
  bool active = true;
  double fl1 = 0.0;
  double support = 0.0;
};

/// S_1(T), ..., S_kmax(T) with per-iterate FL^1 norms and support sizes.
struct PicardSeries {
  int sigma = 3;
  double T = 0.0;
  std::vector<SpectralField> iterates;  // iterates[k - 1]
  std::vector<IterateInfo> info;

  int kmax() const { return static_cast<int>(iterates.size()); }

  const SpectralField& at(int k) const {
    require(k >= 1 && k <= kmax(), "picard: iterate index out of range");
    return iterates[k - 1];
  }

  SpectralField partial_sum(int upto) const {
    SpectralField sum(iterates.front().grid());
    for (int k = 1; k <= std::min(upto, kmax()); ++k) sum += iterates[k - 1];
    return sum;
  }

  /// Norm of every iterate in a target space.
  std::vector<double> norms(const SpaceSpec& spec) const {
    std::vector<double> out;
    for (const auto& s : iterates) out.push_back(norm(s, spec));
    return out;
  }
};

namespace detail {

/// Zero-padded physical grid shared by all factors of one nonlinearity.
class PaddedTransform {
 public:
  PaddedTransform(const GridSpec& g, int points)
      : g_(g), points_(points), alpha_(synthesis_scale(g)), index_(g.size()) {
    for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
      index_[i] = wrapped_index(k, g.dim, points);
    });
    total_ = cube_volume(g.dim, points);
    beta_ = 1.0 / (alpha_ * static_cast<double>(total_));
  }

  int points() const { return points_; }

  void to_physical(const std::vector<cplx>& coeffs, std::vector<cplx>& buf) const {
    buf.assign(total_, cplx{});
    for (std::size_t i = 0; i < coeffs.size(); ++i) buf[index_[i]] = alpha_ * coeffs[i];
    fft::transform(buf, g_.dim, points_, +1);
  }

  /// Destroys `buf`.
  void to_spectral(std::vector<cplx>& buf, std::vector<cplx>& coeffs) const {
    fft::transform(buf, g_.dim, points_, -1);
    coeffs.resize(index_.size());
    for (std::size_t i = 0; i < index_.size(); ++i) coeffs[i] = beta_ * buf[index_[i]];
  }

 private:
  GridSpec g_;
  int points_;
  double alpha_;
  double beta_ = 1.0;
  std::size_t total_ = 0;
  std::vector<std::size_t> index_;
};

/// One group of compositions (k_1..k_sigma) sharing the same plain and
/// conjugated multisets; `count` of them contribute the same product.
struct ProductTerm {
  std::vector<int> plain;
  std::vector<int> conj;
  double count = 0.0;
};

inline void compose(int remaining, int slots, int sigma, std::vector<int>& parts,
                    std::vector<std::vector<int>>& out) {
  if (slots == 0) {
    if (remaining == 0) out.push_back(parts);
    return;
  }
  for (int k = 1; k <= remaining - (slots - 1); k += sigma - 1) {
    parts.push_back(k);
    compose(remaining - k, slots - 1, sigma, parts, out);
    parts.pop_back();
  }
}

/// Compositions of k into sigma active orders, grouped by symmetry of the product.
inline std::vector<ProductTerm> product_terms(int k, int sigma, int rho) {
  std::vector<std::vector<int>> comps;
  std::vector<int> parts;
  compose(k, sigma, sigma, parts, comps);
  std::map<std::pair<std::vector<int>, std::vector<int>>, double> grouped;
  for (const auto& c : comps) {
    std::vector<int> plain(c.begin(), c.begin() + rho), conj(c.begin() + rho, c.end());
    std::sort(plain.begin(), plain.end());
    std::sort(conj.begin(), conj.end());
    grouped[{plain, conj}] += 1.0;
  }
  std::vector<ProductTerm> out;
  for (const auto& [key, count] : grouped) out.push_back(ProductTerm{key.first, key.second, count});
  return out;
}

/// max_a |k_a| per flat lattice index.
inline std::vector<int> lattice_radius(const GridSpec& g) {
  std::vector<int> r(g.size());
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    int m = 0;
    for (int a = 0; a < g.dim; ++a) m = std::max(m, std::abs(k[a]));
    r[i] = m;
  });
  return r;
}

/// Evaluates sum_terms count * prod plain * prod conj(...) in physical space.
inline void accumulate_products(const std::vector<ProductTerm>& terms,
                                const std::map<int, const std::vector<cplx>*>& physical,
                                std::vector<cplx>& buf) {
  const std::size_t n = physical.begin()->second->size();
  buf.assign(n, cplx{});
  std::vector<cplx> prod(n);
  for (const auto& term : terms) {
    std::fill(prod.begin(), prod.end(), cplx(term.count, 0.0));
    for (int k : term.plain) {
      const cplx* u = physical.at(k)->data();
      for (std::size_t x = 0; x < n; ++x) prod[x] *= u[x];
    }
    for (int k : term.conj) {
      const cplx* u = physical.at(k)->data();
      for (std::size_t x = 0; x < n; ++x) prod[x] *= std::conj(u[x]);
    }
    for (std::size_t x = 0; x < n; ++x) buf[x] += prod[x];
  }
}

}  // namespace detail

/**
 * Time mesh resolving the fastest oscillation on the lattice: the Duhamel
 * integrand carries phases up to about 2 max|xi|, and each Gauss-Lobatto panel
 * of order 16 is kept to a phase advance of at most 4 at that rate.
 */
inline TimeMesh auto_mesh(const GridSpec& g, double T, int panel_order = 16) {
  require(T > 0.0, "auto_mesh: T must be > 0");
  LatticePoint corner{0, 0, 0};
  for (int a = 0; a < g.dim; ++a) corner[a] = g.half_width();
  const double omega = 2.0 * std::max(1.0, g.magnitude(corner));
  const double panels = std::max(1.0, std::ceil(T * omega / 4.0));
  TimeMesh mesh;
  mesh.quadrature = Quadrature::GaussLegendre;
  mesh.panel_order = panel_order;
  mesh.nodes_per_unit = static_cast<int>(std::ceil(panels * panel_order / T));
  return mesh;
}

/**
 * Picard iterates S_k(T), k = 1..kmax, of the integral equation
 *   u(t) = S(t)(u0, u1) + sign * int_0^t sin((t - tau)|D|)/|D| u^rho conj(u)^(sigma - rho) dtau.
 *
 * S_1 is the linear flow; for k >= 2,
 *   S_k = sign * sum over compositions k_1 + ... + k_sigma = k of
 *         Duhamel(prod_{l <= rho} S_{k_l} prod_{l > rho} conj(S_{k_l})).
 * Only k = 1 mod (sigma - 1) admit such compositions; the remaining iterates are
 * exactly zero. Time is streamed one panel at a time, all orders advancing
 * together, so memory does not grow with the number of time nodes. Products are
 * formed on a zero-padded grid sized from the data support and cropped to the
 * lattice; F S_k vanishes outside k times the data support radius.
 */
inline PicardSeries picard_iterates(const DataPair& pair, const NlwProblem& problem, int kmax,
                                   double T, const TimeMesh& mesh) {
  require(kmax >= 1, "picard: kmax must be >= 1");
  require(T > 0.0 && std::isfinite(T), "picard: T must be finite and > 0");
  require(problem.grid == pair.grid(), "picard: data grid differs from the problem grid");
  const GridSpec& g = pair.grid();
  const int sigma = problem.sigma;

  PicardSeries series;
  series.sigma = sigma;
  series.T = T;
  series.iterates.assign(kmax, SpectralField(g));
  series.iterates[0] = propagate_linear(pair, T);

  const int b0 = pair.support_radius();
  std::vector<int> levels;
  for (int k = sigma; k <= kmax; ++k)
    if (active_order(k, sigma)) levels.push_back(k);

  if (b0 >= 0 && !levels.empty()) {
    const int half = g.half_width();
    auto radius = [&](int k) { return std::min(half, k * b0); };
    std::map<int, std::vector<detail::ProductTerm>> terms;
    std::vector<int> factors;
    int widest = 0;
    for (int k : levels) {
      terms[k] = detail::product_terms(k, sigma, problem.rho);
      for (const auto& t : terms[k]) {
        int sum = 0;
        for (int f : t.plain) sum += radius(f);
        for (int f : t.conj) sum += radius(f);
        widest = std::max(widest, sum);
        factors.insert(factors.end(), t.plain.begin(), t.plain.end());
        factors.insert(factors.end(), t.conj.begin(), t.conj.end());
      }
    }
    std::sort(factors.begin(), factors.end());
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());

    const detail::PaddedTransform padded(g, fft::fast_size(std::max(g.axis_size(), widest + half + 1)));
    const std::vector<int> lattice_r = detail::lattice_radius(g);
    const PanelRule rule = panel_rule(mesh);
    const int panels = panel_count(mesh, T);
    detail::PanelKernel kernel(frequency_magnitudes(g), rule, T / panels);
    const std::size_t m = kernel.nodes();

    std::map<int, std::vector<std::vector<cplx>>> spectral;  // S_k at the panel nodes
    std::map<int, std::vector<std::vector<cplx>>> physical;  // padded samples of S_k
    std::map<int, std::vector<std::vector<cplx>>> forcing;   // sign * H_k at the nodes
    std::map<int, detail::DuhamelAccumulator> accumulators;
    for (int k : levels) accumulators.emplace(k, detail::DuhamelAccumulator(g.size()));
    for (int k : factors) physical[k].resize(m);

    std::vector<cplx> buf;
    for (int p = 0; p < panels; ++p) {
      kernel.move_to(p * kernel.step());
      detail::linear_at_nodes(kernel, pair, spectral[1]);
      auto to_physical = [&](int k) {
        if (!physical.count(k)) return;
        for (std::size_t j = 0; j < m; ++j) {
          // Panels share endpoints: node 0 repeats the last node of the previous panel.
          if (p > 0 && j == 0) {
            physical[k][0].swap(physical[k][m - 1]);
            continue;
          }
          padded.to_physical(spectral[k][j], physical[k][j]);
        }
      };
      to_physical(1);
      for (int k : levels) {
        auto& h = forcing[k];
        h.resize(m);
        for (std::size_t j = 0; j < m; ++j) {
          if (p > 0 && j == 0) {
            h[0].swap(h[m - 1]);
            continue;
          }
          std::map<int, const std::vector<cplx>*> at_node;
          for (int f : factors)
            if (f < k) at_node[f] = &physical[f][j];
          detail::accumulate_products(terms[k], at_node, buf);
          padded.to_spectral(buf, h[j]);
          const int rk = radius(k);
          for (std::size_t x = 0; x < h[j].size(); ++x)
            h[j][x] = lattice_r[x] > rk ? cplx{} : static_cast<double>(problem.sign) * h[j][x];
        }
        accumulators.at(k).advance(kernel, rule, h, spectral[k]);
        to_physical(k);
      }
    }
    for (int k : levels)
      std::copy(spectral[k][m - 1].begin(), spectral[k][m - 1].end(),
                series.iterates[k - 1].coeffs().begin());
  }

  for (int k = 1; k <= kmax; ++k) {
    const auto& s = series.iterates[k - 1];
    series.info.push_back(IterateInfo{k, active_order(k, sigma), fl_norm(s, 1.0, 0.0), support_size(s)});
  }
  return series;
}

}  // namespace amalgam
