// Command-line front end: norms, Picard iterates, solvers, inflation sweeps,
// the oracle battery and report re-rendering.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>

#include "amalgam/amalgam.hpp"

namespace {

using namespace amalgam;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

struct DataOptions {
  std::string u0 = "zero";
  std::string u1;
  int sigma = 3;
  int rho = 3;
  int sign = 1;
  double T = 0.1;
  int kmax = 0;
  int mesh_nodes = 0;
  std::string quadrature = "gauss-legendre";
  double tol = 1e-12;
};

void add_problem_flags(CLI::App* app, DataOptions& o) {
  app->add_option("--input,--u0", o.u0, "F u0 as a field CSV")->required();
  app->add_option("--u1", o.u1, "F u1 as a field CSV (default: zero)");
  app->add_option("--sigma", o.sigma, "total degree of the nonlinearity");
  app->add_option("--rho", o.rho, "number of unconjugated factors");
  app->add_option("--sign", o.sign, "+1 or -1");
  app->add_option("--T", o.T, "final time");
  app->add_option("--kmax", o.kmax, "largest Picard order (default 1 + 3(sigma-1))");
  app->add_option("--mesh-nodes", o.mesh_nodes, "time nodes per unit time (default: resolve the lattice)");
  app->add_option("--quadrature", o.quadrature, "gauss-legendre | simpson");
  app->add_option("--tol", o.tol, "stopping tolerance");
}

DataPair load_pair(const DataOptions& o) {
  SpectralField u0 = io::read_field(o.u0);
  SpectralField u1 = o.u1.empty() ? SpectralField(u0.grid()) : io::read_field(o.u1);
  return DataPair(std::move(u0), std::move(u1));
}

TimeMesh mesh_for(const DataOptions& o, const GridSpec& g) {
  TimeMesh m = auto_mesh(g, o.T);
  if (o.quadrature == "simpson") m.quadrature = Quadrature::Simpson;
  else require(o.quadrature == "gauss-legendre", "--quadrature: expected gauss-legendre or simpson");
  if (o.mesh_nodes > 0) m.nodes_per_unit = o.mesh_nodes;
  return m;
}

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

int run_norm(const std::string& input, const std::string& family, double p, double q, double s, bool json) {
  const SpectralField f = io::read_field(input);
  const SpaceSpec spec = SpaceSpec::make(parse_family(family), p, q, s);
  const double v = norm(f, spec);
  if (json)
    std::cout << "{\"family\": \"" << to_string(spec.family) << "\", \"p\": \"" << io::fmt(spec.p) << "\", \"q\": \""
              << io::fmt(spec.q) << "\", \"s\": " << io::fmt(spec.s) << ", \"value\": " << io::fmt(v) << "}\n";
  else
    std::cout << io::fmt(v) << "\n";
  return kExitOk;
}

int run_picard(const DataOptions& o, const std::string& out) {
  const DataPair pair = load_pair(o);
  const NlwProblem problem = NlwProblem::make(o.sigma, o.rho, o.sign, pair.grid());
  const int kmax = o.kmax > 0 ? o.kmax : default_kmax(o.sigma);
  const PicardSeries series = picard_iterates(pair, problem, kmax, o.T, mesh_for(o, pair.grid()));
  std::ostringstream table;
  table << "k,active,fl1,support\n";
  for (const auto& info : series.info)
    table << info.k << "," << (info.active ? 1 : 0) << "," << io::fmt(info.fl1) << "," << io::fmt(info.support)
          << "\n";
  std::cout << table.str();
  if (!out.empty()) {
    fs::create_directories(out);
    io::write_atomic(fs::path(out) / "iterates.csv", table.str());
    io::write_field(series.partial_sum(kmax), fs::path(out) / "field.csv");
  }
  return kExitOk;
}

int run_solve(const DataOptions& o, const std::string& method, int itermax, const std::string& out) {
  const DataPair pair = load_pair(o);
  const NlwProblem problem = NlwProblem::make(o.sigma, o.rho, o.sign, pair.grid());
  const TimeMesh mesh = mesh_for(o, pair.grid());
  SpectralField u;
  if (method == "series") {
    const int kmax = o.kmax > 0 ? o.kmax : default_kmax(o.sigma);
    const SeriesSolution sol = solve_series(pair, problem, o.T, o.tol, kmax, mesh);
    std::cout << "method: series\nterms_used: " << sol.terms_used << "\ntail_bound: " << io::fmt(sol.tail_bound)
              << "\n";
    u = sol.solution;
  } else if (method == "fixed-point") {
    const FixedPointSolution sol = solve_fixed_point(pair, problem, o.T, o.tol, itermax, mesh);
    std::cout << "method: fixed-point\niterations: " << sol.iterations
              << "\nlast_difference: " << io::fmt(sol.last_difference) << "\n";
    u = sol.solution;
  } else {
    throw ValidationError("--method: expected series or fixed-point");
  }
  std::cout << "fl1_norm: " << io::fmt(fl_norm(u, 1.0, 0.0)) << "\n";
  if (!out.empty()) io::write_field(u, out);
  return kExitOk;
}

struct BatteryLine {
  std::string name;
  bool ok;
  std::string detail;
};

/// Quick oracle checks: every fast path against its independent counterpart.
std::vector<BatteryLine> oracle_battery() {
  std::vector<BatteryLine> out;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto random_field = [&](const GridSpec& g, int radius) {
    SpectralField f(g);
    for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
      if (std::abs(k[0]) <= radius) f[i] = cplx(U(rng), U(rng));
    });
    return f;
  };
  auto record = [&](const std::string& name, bool ok, double value) {
    out.push_back({name, ok, io::fmt(value)});
  };

  {
    const GridSpec g = make_grid(1, 32, Domain::Torus, 1);
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
      const auto a = random_field(g, 16), b = random_field(g, 16);
      const auto fast = pointwise_product(a, b, false);
      const auto slow = oracle::crop(oracle::brute_convolution(a, b), g);
      worst = std::max(worst, (fast - slow).max_abs() / slow.max_abs());
    }
    record("product vs brute convolution", worst < 1e-10, worst);
  }
  {
    const GridSpec g = make_grid(1, 8, Domain::Torus, 1);
    const NlwProblem pr = NlwProblem::make(2, 2, 1, g);
    const DataPair d = DataPair::position_only(SpectralField::delta(g, {1, 0, 0}));
    double worst = 0.0;
    for (double t : {0.25, 0.5, 1.0}) {
      const auto series = picard_iterates(d, pr, 2, t, auto_mesh(g, t));
      worst = std::max(worst, std::abs(series.at(2).at({2, 0, 0}) - oracle::s2_closed_form(1, t)));
    }
    record("S_2 closed form", worst < 1e-8, worst);
  }
  {
    const GridSpec g = make_grid(1, 12, Domain::Torus, 1);
    const NlwProblem pr = NlwProblem::make(3, 3, 1, g);
    const DataPair d = DataPair::position_only(0.3 * random_field(g, 2));
    const auto series = picard_iterates(d, pr, 5, 0.5, auto_mesh(g, 0.5));
    const double z = std::max(series.at(2).max_abs(), series.at(4).max_abs());
    record("vanishing iterates (sigma = 3)", z == 0.0, z);
  }
  {
    const auto ds = oracle::ds_verify(2, 1.0, 1.0, 25);
    const auto exact = oracle::ds_exact(2, 25);
    record("Catalan envelope", ds.ok && exact[25] == 1289904147324ULL, ds.worst_ratio);
  }
  {
    const GridSpec g = make_grid(1, 8, Domain::Torus, 1);
    const NlwProblem pr = NlwProblem::make(3, 3, 1, g);
    const DataPair d(0.03 * random_field(g, 2), 0.03 * random_field(g, 2));
    const double T = 0.5;
    const TimeMesh mesh = auto_mesh(g, T);
    const auto series = solve_series(d, pr, T, 1e-16, 13, mesh).solution;
    const auto fixed = solve_fixed_point(d, pr, T, 1e-14, 50, mesh).solution;
    const auto rk = oracle::rk4_frequency_oracle(d, pr, T, oracle::default_rk4_step(g, T));
    const double scale = fl_norm(rk, 1.0, 0.0);
    const double diff = std::max(fl_norm(series - fixed, 1.0, 0.0), fl_norm(series - rk, 1.0, 0.0)) / scale;
    record("series / fixed point / RK4", diff < 1e-5, diff);
  }
  {
    const GridSpec g = make_grid(1, 16, Domain::Torus, 1);
    double worst = 0.0;
    for (int r = 0; r < 20; ++r) {
      const auto f = random_field(g, 6), h = random_field(g, 6);
      const auto chk = algebra_check(f, h, SpaceSpec::make(Family::FourierAmalgam, 2, 1, 0.0));
      worst = std::max(worst, chk.lhs / chk.rhs);
    }
    record("FL^1 module inequality", worst <= 1.0 + 1e-10, worst);
  }
  return out;
}

int run_verify() {
  const auto lines = oracle_battery();
  bool all = true;
  std::printf("%-34s %-6s %s\n", "check", "result", "value");
  for (const auto& l : lines) {
    std::printf("%-34s %-6s %s\n", l.name.c_str(), l.ok ? "PASS" : "FAIL", l.detail.c_str());
    all = all && l.ok;
  }
  return all ? kExitOk : kExitNumeric;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier amalgam norms, wave-equation Picard series and norm-inflation sweeps"};
  app.require_subcommand(1);

  std::string norm_input, norm_family = "amalgam";
  double norm_p = 2, norm_q = 2, norm_s = 0;
  bool norm_json = false;
  auto* norm_cmd = app.add_subcommand("norm", "norm of a field");
  norm_cmd->add_option("--input", norm_input, "field CSV")->required();
  norm_cmd->add_option("--family", norm_family, "amalgam | fourier-lebesgue | modulation | wiener | sobolev");
  norm_cmd->add_option("--p", norm_p);
  norm_cmd->add_option("--q", norm_q);
  norm_cmd->add_option("--s", norm_s);
  norm_cmd->add_flag("--json", norm_json);

  DataOptions picard_opts;
  std::string picard_out;
  auto* picard_cmd = app.add_subcommand("picard", "Picard iterates S_k(T)");
  add_problem_flags(picard_cmd, picard_opts);
  picard_cmd->add_option("--out", picard_out, "directory for iterates.csv and field.csv");

  DataOptions solve_opts;
  std::string solve_method = "series", solve_out;
  int solve_itermax = 100;
  auto* solve_cmd = app.add_subcommand("solve", "solution u(T) of the integral equation");
  add_problem_flags(solve_cmd, solve_opts);
  solve_cmd->add_option("--method", solve_method, "series | fixed-point");
  solve_cmd->add_option("--itermax", solve_itermax);
  solve_cmd->add_option("--out", solve_out, "field CSV for u(T)");

  std::string inf_config, inf_u0 = "zero", inf_out = "inflation_out";
  std::vector<std::string> inf_flags;
  bool inf_no_plot = false;
  io::KeyValues inf_over;
  auto* inflate_cmd = app.add_subcommand("inflate", "norm-inflation sweep over N");
  inflate_cmd->add_option("--config", inf_config, "flat key: value file");
  for (const char* key : {"s", "sigma", "rho", "sign", "delta", "theta", "N", "m", "family", "p", "q", "kmax",
                          "threshold", "dim", "domain", "mesh", "threads"}) {
    inflate_cmd->add_option_function<std::string>(std::string("--") + key,
                                                  [&inf_over, key](const std::string& v) { inf_over[key] = v; });
  }
  inflate_cmd->add_option("--u0", inf_u0, "field CSV for F u0 or 'zero'");
  inflate_cmd->add_option("--out", inf_out, "output directory");
  inflate_cmd->add_flag("--no-plot", inf_no_plot);

  auto* verify_cmd = app.add_subcommand("verify-lemmas", "run the oracle battery");

  std::string report_in, report_out;
  auto* report_cmd = app.add_subcommand("report", "re-render plot.svg from a report.csv");
  report_cmd->add_option("--input", report_in, "report.csv")->required();
  report_cmd->add_option("--out", report_out, "output SVG (default: plot.svg next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*norm_cmd) return run_norm(norm_input, norm_family, norm_p, norm_q, norm_s, norm_json);
    if (*picard_cmd) return run_picard(picard_opts, picard_out);
    if (*solve_cmd) return run_solve(solve_opts, solve_method, solve_itermax, solve_out);
    if (*verify_cmd) return run_verify();
    if (*report_cmd) {
      const auto rep = io::report_from_csv(io::read_text(report_in), report_in);
      const fs::path out = report_out.empty() ? fs::path(report_in).parent_path() / "plot.svg" : fs::path(report_out);
      io::write_atomic(out, io::report_svg(rep));
      std::cout << out.string() << "\n";
      return kExitOk;
    }
    if (*inflate_cmd) {
      const auto start = std::chrono::steady_clock::now();
      const InflationConfig cfg =
          inf_config.empty() ? io::parse_config("", inf_over) : io::load_config(inf_config, inf_over);
      DataPair u0 = DataPair::position_only(SpectralField(make_grid(cfg.dim, 1, cfg.domain, cfg.mesh)));
      if (inf_u0 != "zero") u0 = DataPair::position_only(io::read_field(inf_u0));
      const ExperimentReport rep = run_inflation(u0, cfg);
      io::RunManifest manifest;
      manifest.command_line = command_line(argc, argv);
      manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      for (const auto& f : io::write_report(rep, inf_out, manifest, !inf_no_plot)) std::cout << f.string() << "\n";
      for (const auto& r : rep.records)
        if (!r.error.empty()) std::cerr << "N = " << r.N << ": " << r.error << "\n";
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}
