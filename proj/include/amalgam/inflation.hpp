#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "amalgam/picard.hpp"

namespace amalgam {

/// Amplitude R on the four frequency cubes around +-N e_1 and +-2N e_1.
struct PerturbationSpec {
  int N = 64;
  double R = 1.0;
  int dim = 1;

  static PerturbationSpec make(int N, double R, int dim) {
    require(N >= 4, "perturbation: N >= 4 is needed for disjoint cubes around +-N e1, +-2N e1");
    require(R > 0.0 && std::isfinite(R), "perturbation: R must be finite and > 0");
    require(dim >= 1 && dim <= 3, "perturbation: dim must be 1, 2 or 3");
    return PerturbationSpec{N, R, dim};
  }
};

/**
 * (phi, 0) with F phi = R on the union of eta + [-1, 1]^d, eta in {+-N e_1, +-2N e_1}.
 * Both faces of every cube include their lattice points, so F phi is real and even.
 */
inline DataPair build_perturbation(const PerturbationSpec& spec, const GridSpec& g) {
  require(spec.dim == g.dim, "perturbation: dimension differs from the grid");
  require(spec.N >= 4, "perturbation: N >= 4 is needed for disjoint cubes");
  require(g.extent >= 2 * spec.N + 1, "perturbation: lattice extent must be >= 2N + 1");
  SpectralField phi(g);
  const int centres[4] = {-2 * spec.N, -spec.N, spec.N, 2 * spec.N};
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    for (int a = 1; a < g.dim; ++a)
      if (std::abs(k[a]) > g.mesh) return;
    for (int c : centres)
      if (std::abs(k[0] - c * g.mesh) <= g.mesh) phi[i] = spec.R;
  });
  return DataPair::position_only(std::move(phi));
}

/**
 * Band-limited smooth data (u0, u1) with F u0 = a exp(-|xi|^2 / 2) and
 * F u1 = a exp(-|xi|^2) / 2 on |xi|_inf <= radius, scaled to the given pair norm.
 */
inline DataPair smooth_data(const GridSpec& g, int radius, double target_norm, const SpaceSpec& spec) {
  require(radius >= 1 && radius <= g.extent, "smooth_data: radius must lie in [1, extent]");
  SpectralField u0(g), u1(g);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    for (int a = 0; a < g.dim; ++a)
      if (std::abs(k[a]) > radius * g.mesh) return;
    const double r = g.magnitude(k);
    u0[i] = std::exp(-r * r / 2.0);
    u1[i] = 0.5 * std::exp(-r * r);
  });
  DataPair pair(std::move(u0), std::move(u1));
  const double scale = target_norm / pair_norm(pair, spec);
  pair.u0 *= scale;
  pair.u1 *= scale;
  return pair;
}

enum class RegimeCase { A, B };

inline std::string to_string(RegimeCase c) { return c == RegimeCase::A ? "A" : "B"; }

/**
 * Exponents of R = N^r_exp and T = N^t_exp.
 *   case A (-1/(sigma-1) <= s < 0): R = N^{-s-delta}, T = N^{(sigma-1)(s+delta/2)/2}
 *   case B (s < -1/(sigma-1)):      R = N^{1/(sigma-1)-delta}, T = N^{-1/2+(sigma-1)delta/4}
 */
struct RegimeParams {
  RegimeCase regime = RegimeCase::A;
  double s = -0.4;
  int sigma = 3;
  double delta = 0.1;
  double r_exp = 0.0;
  double t_exp = 0.0;

  double R(double N) const { return std::pow(N, r_exp); }
  double T(double N) const { return std::pow(N, t_exp); }
};

inline RegimeParams regime_params(double s, int sigma, double delta) {
  require(sigma >= 2, "regime: sigma must be >= 2");
  require(s < 0.0, "regime: s < 0 is required");
  require(delta > 0.0, "regime: delta must be > 0");
  RegimeParams p{RegimeCase::A, s, sigma, delta, 0.0, 0.0};
  const double sm = sigma - 1.0;
  if (s >= -1.0 / sm) {
    if (!((sigma + 1) * delta / 2.0 < -s))
      throw ValidationError("regime: invalid delta, case A needs (sigma+1) delta/2 < -s but (sigma+1) delta/2 = " +
                            std::to_string((sigma + 1) * delta / 2.0) + " >= -s = " + std::to_string(-s));
    p.r_exp = -s - delta;
    p.t_exp = sm * (s + delta / 2.0) / 2.0;
  } else {
    p.regime = RegimeCase::B;
    if (!((sigma + 1) * delta < 2.0 / sm))
      throw ValidationError("regime: invalid delta, case B needs (sigma+1) delta < 2/(sigma-1) but (sigma+1) delta = " +
                            std::to_string((sigma + 1) * delta));
    if (!(sm * delta / 4.0 < 0.5))
      throw ValidationError("regime: invalid delta, case B needs (sigma-1) delta/4 < 1/2");
    p.r_exp = 1.0 / sm - delta;
    p.t_exp = -0.5 + sm * delta / 4.0;
  }
  return p;
}

struct RegimeChoice {
  RegimeParams params;
  double N = 0.0;
  double R = 0.0;
  double T = 0.0;
};

inline RegimeChoice select_parameters(double s, int sigma, double delta, double N) {
  require(N >= 1.0, "regime: N must be >= 1");
  const RegimeParams p = regime_params(s, sigma, delta);
  return RegimeChoice{p, N, p.R(N), p.T(N)};
}

/**
 * The size conditions of the construction, each as a quantity that must be
 * small (below `threshold`):
 *   i    N^{-1/2} / T and T            ii_a R^{sigma-1} T^2
 *   ii_b 1 / R                         iii  m / (R^sigma T^2)
 *   iv   R N^s m
 * Values are computed from base-2 logarithms so huge N do not overflow.
 */
struct RegimeCheck {
  double inv_sqrt_n_over_t = 0.0;
  double t = 0.0;
  double r_pow_t2 = 0.0;
  double inv_r = 0.0;
  double m_over_dominant = 0.0;
  double perturbation_m = 0.0;
  bool i = false, ii_a = false, ii_b = false, iii = false, iv = false;

  bool all() const { return i && ii_a && ii_b && iii && iv; }
};

inline RegimeCheck check_regime(const RegimeParams& p, double log2_n, double m, double threshold = 0.25) {
  require(m > 0.0, "regime: m must be > 0");
  require(threshold > 0.0, "regime: threshold must be > 0");
  const double lr = p.r_exp * log2_n, lt = p.t_exp * log2_n, lm = std::log2(m);
  RegimeCheck c;
  c.inv_sqrt_n_over_t = std::exp2(-0.5 * log2_n - lt);
  c.t = std::exp2(lt);
  c.r_pow_t2 = std::exp2((p.sigma - 1) * lr + 2.0 * lt);
  c.inv_r = std::exp2(-lr);
  c.m_over_dominant = std::exp2(lm - p.sigma * lr - 2.0 * lt);
  c.perturbation_m = std::exp2(lr + p.s * log2_n + lm);
  c.i = c.inv_sqrt_n_over_t < threshold && c.t < threshold;
  c.ii_a = c.r_pow_t2 < threshold;
  c.ii_b = c.inv_r < threshold;
  c.iii = c.m_over_dominant < threshold;
  c.iv = c.perturbation_m < threshold;
  return c;
}

/// Smallest j <= jmax with every condition met at N = 2^j, or -1.
inline int smallest_admissible_power(const RegimeParams& p, double m, double threshold = 0.25, int jmax = 4096) {
  for (int j = 2; j <= jmax; ++j)
    if (check_regime(p, j, m, threshold).all()) return j;
  return -1;
}

inline const LatticePoint kUnitE1{1, 0, 0};

struct LowerBound {
  double L = 0.0;
  double scale = 0.0;  // R^sigma T^2
  double ratio = 0.0;
  bool time_below_threshold = false;
  std::string warning;
};

/// Restricted norm of S_sigma[phi](T) at the cube around e_1 against R^sigma T^2.
inline LowerBound lower_bound_from(const SpectralField& s_sigma, const PerturbationSpec& ps, int sigma, double T,
                                   const SpaceSpec& spec) {
  LowerBound out;
  out.L = restricted_norm(s_sigma, spec, kUnitE1);
  out.scale = std::pow(ps.R, sigma) * T * T;
  out.ratio = out.L / out.scale;
  out.time_below_threshold = T <= 1.0 / std::sqrt(static_cast<double>(ps.N));
  if (out.time_below_threshold)
    out.warning = "T <= N^{-1/2}: the non-resonant part of S_sigma may dominate the lower bound";
  return out;
}

inline LowerBound lower_bound_check(const DataPair& phi, const PerturbationSpec& ps, const NlwProblem& problem,
                                    double T, const SpaceSpec& spec, const TimeMesh& mesh) {
  const PicardSeries series = picard_iterates(phi, problem, problem.sigma, T, mesh);
  return lower_bound_from(series.at(problem.sigma), ps, problem.sigma, T, spec);
}

/// Norms of the terms that compete with the dominant iterate.
struct CompetingTerms {
  double s1 = 0.0;
  double cross = 0.0;
  double tail = 0.0;           // computed terms plus remainder
  double tail_computed = 0.0;  // sum of the computed S_{(sigma-1)l+1}, l >= 2
  double tail_ratio = 0.0;     // ||S_last|| / ||S_last - (sigma-1)||
};

/**
 * S_1, cross term S_sigma[u0 + phi] - S_sigma[phi] and the higher iterates
 * l >= 2. The tail beyond kmax is estimated geometrically from the ratio of
 * the last two computed terms (infinite if that ratio is >= 1).
 */
inline CompetingTerms competing_terms(const PicardSeries& full, const SpectralField& phi_sigma,
                                      const SpaceSpec& spec) {
  const int sigma = full.sigma;
  CompetingTerms c;
  c.s1 = norm(full.at(1), spec);
  c.cross = norm(full.at(sigma) - phi_sigma, spec);
  double last = 0.0, before = 0.0;
  int count = 0;
  for (int k = 2 * sigma - 1; k <= full.kmax(); k += sigma - 1) {
    const double v = norm(full.at(k), spec);
    c.tail_computed += v;
    before = last;
    last = v;
    ++count;
  }
  c.tail = c.tail_computed;
  if (count >= 2 && before > 0.0) {
    c.tail_ratio = last / before;
    c.tail += c.tail_ratio < 1.0 ? last * c.tail_ratio / (1.0 - c.tail_ratio) : kInf;
  } else if (count == 1) {
    c.tail = kInf;
  }
  return c;
}

inline CompetingTerms tail_and_cross_terms(const DataPair& u0, const DataPair& phi, const NlwProblem& problem,
                                           double T, const SpaceSpec& spec, int kmax, const TimeMesh& mesh) {
  require(kmax >= 2 * problem.sigma - 1, "tail: kmax must reach 2 sigma - 1");
  const DataPair data(u0.u0 + phi.u0, u0.u1 + phi.u1);
  const PicardSeries full = picard_iterates(data, problem, kmax, T, mesh);
  const bool zero = u0.support_radius() < 0;
  const SpectralField phi_sigma =
      zero ? full.at(problem.sigma) : picard_iterates(phi, problem, problem.sigma, T, mesh).at(problem.sigma);
  return competing_terms(full, phi_sigma, spec);
}

struct InflationConfig {
  double s = -0.4;
  int sigma = 3;
  int rho = 3;
  int sign = 1;
  std::vector<double> theta{-0.4};
  double delta = 0.1;
  std::vector<int> N{64, 128, 256, 512};
  double m = 10.0;
  Family family = Family::FourierAmalgam;
  double p = 2.0;
  double q = 2.0;
  int kmax = 7;
  double threshold = 0.25;
  int dim = 1;
  Domain domain = Domain::Torus;
  int mesh = 1;
  int threads = 0;  // 0: AMALGAM_THREADS or hardware concurrency

  void validate() const {
    require(s < 0.0, "inflate: s < 0 is required (the inflation construction covers s < 0 only)");
    require(sigma >= std::max(rho, 2), "inflate: sigma >= max(rho, 2) violated");
    require(rho >= 0, "inflate: rho must be >= 0");
    require(sign == 1 || sign == -1, "inflate: sign must be +1 or -1");
    require(!theta.empty(), "inflate: theta list is empty");
    require(!N.empty(), "inflate: N list is empty");
    for (int n : N) require(n >= 4, "inflate: every N must be >= 4");
    require(m > 0.0, "inflate: m must be > 0");
    require(kmax >= 2 * sigma - 1, "inflate: kmax must be >= 2 sigma - 1");
    require(domain == Domain::Torus || mesh >= 4, "inflate: Euclidean sweeps need mesh >= 4");
    regime_params(s, sigma, delta);
    SpaceSpec::make(family, p, q, s);
  }

  SpaceSpec space(double reg) const { return SpaceSpec::make(family, p, q, reg); }

  bool operator==(const InflationConfig&) const = default;
};

/// One (N, theta) row of a sweep.
struct ExperimentRecord {
  int N = 0;
  double R = 0.0;
  double T = 0.0;
  double theta = 0.0;
  double pert_norm = 0.0;
  double sol_norm = 0.0;         // ||u(T)||_{X_theta}, truncated series
  double sol_restricted = 0.0;   // cube e_1 term of ||u(T)||_{X_theta}
  double dominant_norm = 0.0;    // ||S_sigma(T)||_{X_theta}
  double dominant_restricted = 0.0;
  double restricted_L = 0.0;     // cube e_1 term of ||S_sigma(T)||_{X_s}
  double ratio_L = 0.0;          // restricted_L / (R^sigma T^2)
  double s1 = 0.0;
  double cross = 0.0;
  double tail = 0.0;
  double cross_scaled = 0.0;     // cross / (T^2 R^{sigma-1})
  double tail_scaled = 0.0;      // tail / (R^{2 sigma - 1} T^4)
  double s1_scaled = 0.0;        // s1 / (1 + R N^s)
  double pert_scaled = 0.0;      // pert_norm / (R N^s)
  bool dominance = false;        // restricted_L > 4 (s1 + cross + tail)
  bool time_warning = false;
  RegimeCheck regime;
  double wall_seconds = 0.0;
  std::string error;
};

struct ExperimentReport {
  InflationConfig config;
  std::vector<ExperimentRecord> records;

  /// Rows for one theta, in sweep order.
  std::vector<ExperimentRecord> at_theta(double theta) const {
    std::vector<ExperimentRecord> out;
    for (const auto& r : records)
      if (r.theta == theta) out.push_back(r);
    return out;
  }
};

inline int thread_budget(int requested) {
  int n = requested;
  if (n <= 0) {
    if (const char* env = std::getenv("AMALGAM_THREADS")) n = std::atoi(env);
  }
  if (n <= 0) n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return n;
}

namespace detail {

inline std::vector<ExperimentRecord> run_single(const DataPair& u0_input, const InflationConfig& cfg, int N) {
  const auto start = std::chrono::steady_clock::now();
  const RegimeChoice choice = select_parameters(cfg.s, cfg.sigma, cfg.delta, N);
  const int u0_radius = (std::max(0, u0_input.support_radius()) + cfg.mesh - 1) / cfg.mesh;
  const int b0 = std::max(2 * N + 1, u0_radius);
  const GridSpec g = make_grid(cfg.dim, cfg.kmax * b0, cfg.domain, cfg.mesh);
  const NlwProblem problem = NlwProblem::make(cfg.sigma, cfg.rho, cfg.sign, g);
  const PerturbationSpec ps = PerturbationSpec::make(N, choice.R, cfg.dim);
  const DataPair phi = build_perturbation(ps, g);
  const DataPair u0 = embed(u0_input, g);
  const bool zero = u0.support_radius() < 0;
  const DataPair data(u0.u0 + phi.u0, u0.u1 + phi.u1);
  const double T = choice.T;
  const TimeMesh mesh = auto_mesh(g, T);

  const PicardSeries full = picard_iterates(data, problem, cfg.kmax, T, mesh);
  const SpectralField phi_sigma =
      zero ? full.at(cfg.sigma) : picard_iterates(phi, problem, cfg.sigma, T, mesh).at(cfg.sigma);
  const SpaceSpec xs = cfg.space(cfg.s);
  const CompetingTerms comp = competing_terms(full, phi_sigma, xs);
  const LowerBound lb = lower_bound_from(full.at(cfg.sigma), ps, cfg.sigma, T, xs);
  const SpectralField u = full.partial_sum(cfg.kmax);
  const double R = choice.R;
  const double pert = pair_norm(phi, xs);
  const RegimeCheck regime = check_regime(choice.params, std::log2(static_cast<double>(N)), cfg.m, cfg.threshold);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<ExperimentRecord> rows;
  for (double theta : cfg.theta) {
    const SpaceSpec xt = cfg.space(theta);
    ExperimentRecord r;
    r.N = N;
    r.R = R;
    r.T = T;
    r.theta = theta;
    r.pert_norm = pert;
    r.sol_norm = norm(u, xt);
    r.sol_restricted = restricted_norm(u, xt, kUnitE1);
    r.dominant_norm = norm(full.at(cfg.sigma), xt);
    r.dominant_restricted = restricted_norm(full.at(cfg.sigma), xt, kUnitE1);
    r.restricted_L = lb.L;
    r.ratio_L = lb.ratio;
    r.s1 = comp.s1;
    r.cross = comp.cross;
    r.tail = comp.tail;
    r.cross_scaled = comp.cross / (T * T * std::pow(R, cfg.sigma - 1));
    r.tail_scaled = comp.tail / (std::pow(R, 2 * cfg.sigma - 1) * std::pow(T, 4));
    r.s1_scaled = comp.s1 / (1.0 + R * std::pow(N, cfg.s));
    r.pert_scaled = pert / (R * std::pow(N, cfg.s));
    r.dominance = lb.L > 4.0 * (comp.s1 + comp.cross + comp.tail);
    r.time_warning = lb.time_below_threshold;
    r.regime = regime;
    r.wall_seconds = wall;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace detail

/**
 * Sweep over N: build the perturbation, pick (R, T), compute the Picard
 * iterates of u0 + phi and record every measured quantity per theta. A failure
 * at one N is recorded in that row's `error` and the sweep continues. Runs for
 * different N execute on up to thread_budget(config.threads) threads.
 */
inline ExperimentReport run_inflation(const DataPair& u0, const InflationConfig& config) {
  config.validate();
  require(u0.grid().dim == config.dim && u0.grid().domain == config.domain && u0.grid().mesh == config.mesh,
          "inflate: u0 grid does not match the configured dimension, domain and mesh");
  ExperimentReport report;
  report.config = config;
  std::vector<std::vector<ExperimentRecord>> per_n(config.N.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < config.N.size(); i = next++) {
      try {
        per_n[i] = detail::run_single(u0, config, config.N[i]);
      } catch (const std::exception& e) {
        for (double theta : config.theta) {
          ExperimentRecord r;
          r.N = config.N[i];
          r.theta = theta;
          r.error = e.what();
          per_n[i].push_back(r);
        }
      }
    }
  };
  const int threads = std::min<int>(thread_budget(config.threads), static_cast<int>(config.N.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& rows : per_n) report.records.insert(report.records.end(), rows.begin(), rows.end());
  return report;
}

}  // namespace amalgam
