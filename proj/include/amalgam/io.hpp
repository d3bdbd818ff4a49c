#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "amalgam/inflation.hpp"

namespace amalgam::io {

inline constexpr const char* kVersion = "1.0.0";

/// Shortest round-trippable decimal with at most 17 significant digits, "inf"/"nan" spelled out.
inline std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& text, const std::string& what) {
  std::string t = text;
  t.erase(0, t.find_first_not_of(" \t"));
  t.erase(t.find_last_not_of(" \t\r") + 1);
  if (t == "inf" || t == "+inf" || t == "infinity") return kInf;
  if (t == "-inf") return -kInf;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc{} || res.ptr != t.data() + t.size() || t.empty())
    throw ValidationError(what + ": cannot parse '" + text + "' as a number");
  return v;
}

inline int parse_int(const std::string& text, const std::string& what) {
  const double v = parse_double(text, what);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ValidationError(what + ": '" + text + "' is not an integer");
  return static_cast<int>(v);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::string trim(std::string s) {
  s.erase(0, s.find_first_not_of(" \t"));
  const auto e = s.find_last_not_of(" \t\r\n");
  s.erase(e == std::string::npos ? 0 : e + 1);
  return s;
}

inline Domain parse_domain(const std::string& s) {
  if (s == "torus") return Domain::Torus;
  if (s == "euclidean" || s == "truncated-euclidean") return Domain::TruncatedEuclidean;
  throw ValidationError("domain: unknown domain '" + s + "' (torus | euclidean)");
}

/// Writes `text` to `path` through a temporary file and a rename.
inline void write_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---- fields ---------------------------------------------------------------

/// "# grid: dim=.. extent=.. domain=.. mesh=..", then "xi1[,xi2,xi3],re,im" and
/// one row per nonzero coefficient in lattice order.
inline std::string field_to_csv(const SpectralField& f) {
  const GridSpec& g = f.grid();
  std::ostringstream out;
  out << "# grid: dim=" << g.dim << " extent=" << g.extent << " domain=" << to_string(g.domain)
      << " mesh=" << g.mesh << "\n";
  for (int a = 0; a < g.dim; ++a) out << "xi" << a + 1 << ",";
  out << "re,im\n";
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (f[i] == cplx{}) return;
    for (int a = 0; a < g.dim; ++a) out << fmt(g.frequency(k[a])) << ",";
    out << fmt(f[i].real()) << "," << fmt(f[i].imag()) << "\n";
  });
  return out.str();
}

inline SpectralField field_from_csv(const std::string& text, const std::string& source = "field") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("# grid:", 0) != 0)
    throw ValidationError(source + ": first line must be '# grid: dim=.. extent=.. domain=.. mesh=..'");
  std::map<std::string, std::string> kv;
  for (const auto& tok : split(line.substr(7), ' ')) {
    const auto eq = tok.find('=');
    if (eq != std::string::npos) kv[tok.substr(0, eq)] = trim(tok.substr(eq + 1));
  }
  for (const char* key : {"dim", "extent", "domain", "mesh"})
    if (!kv.count(key)) throw ValidationError(source + ": grid line lacks '" + std::string(key) + "'");
  const GridSpec g = make_grid(parse_int(kv["dim"], source + " dim"), parse_int(kv["extent"], source + " extent"),
                               parse_domain(kv["domain"]), parse_int(kv["mesh"], source + " mesh"));
  if (!std::getline(in, line)) throw ValidationError(source + ": missing column header");
  if (split(trim(line), ',').size() != static_cast<std::size_t>(g.dim + 2))
    throw ValidationError(source + ": header must have dim + 2 columns");
  SpectralField f(g);
  int row = 2;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto cols = split(trim(line), ',');
    const std::string where = source + " line " + std::to_string(row);
    if (cols.size() != static_cast<std::size_t>(g.dim + 2)) throw ValidationError(where + ": wrong column count");
    LatticePoint k{0, 0, 0};
    for (int a = 0; a < g.dim; ++a) {
      const double xi = parse_double(cols[a], where) * g.mesh;
      k[a] = static_cast<int>(std::lround(xi));
      if (std::abs(xi - k[a]) > 1e-9) throw ValidationError(where + ": frequency is not on the lattice");
    }
    if (!g.contains(k)) throw ValidationError(where + ": frequency outside the lattice");
    f[g.flat(k)] = cplx(parse_double(cols[g.dim], where), parse_double(cols[g.dim + 1], where));
  }
  return f;
}

inline void write_field(const SpectralField& f, const std::filesystem::path& path) {
  write_atomic(path, field_to_csv(f));
}

inline SpectralField read_field(const std::filesystem::path& path) {
  return field_from_csv(read_text(path), path.string());
}

// ---- configuration --------------------------------------------------------

using KeyValues = std::map<std::string, std::string>;

/// "key: value" lines; '#' starts a comment, blank lines are ignored.
inline KeyValues parse_key_values(const std::string& text, const std::string& source = "config") {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ValidationError(source + " line " + std::to_string(row) + ": expected 'key: value'");
    kv[trim(line.substr(0, colon))] = trim(line.substr(colon + 1));
  }
  return kv;
}

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
  return s;
}

inline std::string join(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s;
}

inline std::string serialize(const InflationConfig& c) {
  std::ostringstream out;
  out << "s: " << fmt(c.s) << "\n"
      << "sigma: " << c.sigma << "\n"
      << "rho: " << c.rho << "\n"
      << "sign: " << c.sign << "\n"
      << "theta: " << join(c.theta) << "\n"
      << "delta: " << fmt(c.delta) << "\n"
      << "N: " << join(c.N) << "\n"
      << "m: " << fmt(c.m) << "\n"
      << "family: " << to_string(c.family) << "\n"
      << "p: " << fmt(c.p) << "\n"
      << "q: " << fmt(c.q) << "\n"
      << "kmax: " << c.kmax << "\n"
      << "threshold: " << fmt(c.threshold) << "\n"
      << "dim: " << c.dim << "\n"
      << "domain: " << to_string(c.domain) << "\n"
      << "mesh: " << c.mesh << "\n"
      << "threads: " << c.threads << "\n";
  return out.str();
}

/// Applies `kv` over `base`; unknown keys and out-of-range values raise
/// ValidationError naming the key.
inline InflationConfig apply(const KeyValues& kv, InflationConfig c = {}) {
  for (const auto& [key, value] : kv) {
    const std::string what = "config key '" + key + "'";
    if (key == "s") c.s = parse_double(value, what);
    else if (key == "sigma") c.sigma = parse_int(value, what);
    else if (key == "rho") c.rho = parse_int(value, what);
    else if (key == "sign") c.sign = parse_int(value, what);
    else if (key == "delta") c.delta = parse_double(value, what);
    else if (key == "m") c.m = parse_double(value, what);
    else if (key == "family") c.family = parse_family(value);
    else if (key == "p") c.p = parse_double(value, what);
    else if (key == "q") c.q = parse_double(value, what);
    else if (key == "kmax") c.kmax = parse_int(value, what);
    else if (key == "threshold") c.threshold = parse_double(value, what);
    else if (key == "dim") c.dim = parse_int(value, what);
    else if (key == "domain") c.domain = parse_domain(value);
    else if (key == "mesh") c.mesh = parse_int(value, what);
    else if (key == "threads") c.threads = parse_int(value, what);
    else if (key == "theta") {
      c.theta.clear();
      for (const auto& t : split(value, ',')) c.theta.push_back(parse_double(t, what));
    } else if (key == "N") {
      c.N.clear();
      for (const auto& t : split(value, ',')) c.N.push_back(parse_int(t, what));
    } else {
      throw ValidationError(what + ": unknown key");
    }
  }
  return c;
}

/// Range checks with messages that name the violated constraint.
inline void validate(const InflationConfig& c) {
  if (!(c.sigma >= std::max(c.rho, 2)))
    throw ValidationError("config keys 'sigma', 'rho': sigma >= max(rho, 2) violated (sigma = " +
                          std::to_string(c.sigma) + ", rho = " + std::to_string(c.rho) + ")");
  if (!(c.s < 0.0))
    throw ValidationError("config key 's': inflation requires s < 0 (got " + fmt(c.s) + ")");
  c.validate();
}

inline InflationConfig parse_config(const std::string& text, const KeyValues& overrides = {},
                                    const std::string& source = "config") {
  KeyValues kv = parse_key_values(text, source);
  for (const auto& [k, v] : overrides) kv[k] = v;
  InflationConfig c = apply(kv);
  validate(c);
  return c;
}

inline InflationConfig load_config(const std::filesystem::path& path, const KeyValues& overrides = {}) {
  return parse_config(read_text(path), overrides, path.string());
}

// ---- reports --------------------------------------------------------------

inline std::string report_header() {
  return "N,R,T,theta,pert_norm,sol_norm,sol_restricted,dominant_norm,dominant_restricted,restricted_L,ratio_L,"
         "S1,cross,tail,cross_scaled,tail_scaled,s1_scaled,pert_scaled,dominance,flag_i,flag_ii_a,flag_ii_b,"
         "flag_iii,flag_iv,time_warning,error\n";
}

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c == '\n' ? ' ' : c);
  return out + "\"";
}

/// One row per (N, theta); wall time is kept out so equal inputs give equal bytes.
inline std::string report_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out << report_header();
  for (const auto& r : report.records) {
    const auto b = [](bool v) { return v ? "1" : "0"; };
    out << r.N << "," << fmt(r.R) << "," << fmt(r.T) << "," << fmt(r.theta) << "," << fmt(r.pert_norm) << ","
        << fmt(r.sol_norm) << "," << fmt(r.sol_restricted) << "," << fmt(r.dominant_norm) << ","
        << fmt(r.dominant_restricted) << "," << fmt(r.restricted_L) << "," << fmt(r.ratio_L) << "," << fmt(r.s1)
        << "," << fmt(r.cross) << "," << fmt(r.tail) << "," << fmt(r.cross_scaled) << "," << fmt(r.tail_scaled)
        << "," << fmt(r.s1_scaled) << "," << fmt(r.pert_scaled) << "," << b(r.dominance) << "," << b(r.regime.i)
        << "," << b(r.regime.ii_a) << "," << b(r.regime.ii_b) << "," << b(r.regime.iii) << "," << b(r.regime.iv)
        << "," << b(r.time_warning) << "," << csv_escape(r.error) << "\n";
  }
  return out.str();
}

/// Splits one CSV line, honouring double-quoted fields.
inline std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') out.back() += '"', ++i;
      else if (c == '"') quoted = false;
      else out.back() += c;
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else if (c != '\r') {
      out.back() += c;
    }
  }
  return out;
}

/// Reads a report.csv written by report_csv. The theta list is rebuilt in order of appearance.
inline ExperimentReport report_from_csv(const std::string& text, const std::string& source = "report") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line + "\n" != report_header())
    throw ValidationError(source + ": unexpected header, not a report.csv");
  ExperimentReport rep;
  rep.config.theta.clear();
  rep.config.N.clear();
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    const auto f = csv_fields(line);
    const std::string where = source + " line " + std::to_string(row);
    if (f.size() != 26) throw ValidationError(where + ": expected 26 columns");
    ExperimentRecord r;
    r.N = parse_int(f[0], where);
    double* slots[] = {&r.R, &r.T, &r.theta, &r.pert_norm, &r.sol_norm, &r.sol_restricted, &r.dominant_norm,
                       &r.dominant_restricted, &r.restricted_L, &r.ratio_L, &r.s1, &r.cross, &r.tail,
                       &r.cross_scaled, &r.tail_scaled, &r.s1_scaled, &r.pert_scaled};
    for (std::size_t i = 0; i < 17; ++i) *slots[i] = parse_double(f[i + 1], where);
    bool* flags[] = {&r.dominance, &r.regime.i, &r.regime.ii_a, &r.regime.ii_b, &r.regime.iii, &r.regime.iv,
                     &r.time_warning};
    for (std::size_t i = 0; i < 7; ++i) *flags[i] = f[18 + i] == "1";
    r.error = f[25];
    if (std::find(rep.config.theta.begin(), rep.config.theta.end(), r.theta) == rep.config.theta.end())
      rep.config.theta.push_back(r.theta);
    if (std::find(rep.config.N.begin(), rep.config.N.end(), r.N) == rep.config.N.end()) rep.config.N.push_back(r.N);
    rep.records.push_back(r);
  }
  return rep;
}

inline std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool dashed = false;
};

/// Log-log line plot; non-positive or non-finite points are skipped.
inline std::string svg_loglog(const std::vector<Series>& series, const std::string& title, const std::string& xlabel,
                              const std::string& ylabel) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!(x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y))) continue;
      x0 = std::min(x0, std::log10(x));
      x1 = std::max(x1, std::log10(x));
      y0 = std::min(y0, std::log10(y));
      y1 = std::max(y1, std::log10(y));
    }
  if (!(x0 <= x1)) x0 = 0, x1 = 1;
  if (!(y0 <= y1)) y0 = 0, y1 = 1;
  if (x1 - x0 < 1e-9) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-9) y0 -= 0.5, y1 += 0.5;
  const double W = 720, H = 480, L = 90, Rm = 170, Tm = 50, B = 70;
  const auto px = [&](double lx) { return L + (lx - x0) / (x1 - x0) * (W - L - Rm); };
  const auto py = [&](double ly) { return H - B - (ly - y0) / (y1 - y0) * (H - Tm - B); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
  std::ostringstream o;
  o << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
    << " " << H << "\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
    << "<text x=\"" << W / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">" << xml_escape(title)
    << "</text>\n"
    << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - Rm << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n"
    << "<line x1=\"" << L << "\" y1=\"" << Tm << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n"
    << "<text x=\"" << (L + W - Rm) / 2 << "\" y=\"" << H - 20 << "\" text-anchor=\"middle\" font-size=\"13\">"
    << xml_escape(xlabel) << " (log10)</text>\n"
    << "<text x=\"20\" y=\"" << (Tm + H - B) / 2 << "\" text-anchor=\"middle\" font-size=\"13\" transform=\"rotate(-90 20 "
    << (Tm + H - B) / 2 << ")\">" << xml_escape(ylabel) << " (log10)</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double lx = x0 + (x1 - x0) * t / 4, ly = y0 + (y1 - y0) * t / 4;
    o << "<text x=\"" << px(lx) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
      << fmt(std::round(lx * 100) / 100) << "</text>\n"
      << "<text x=\"" << L - 8 << "\" y=\"" << py(ly) + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
      << fmt(std::round(ly * 100) / 100) << "</text>\n";
  }
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    const char* color = colors[i % 7];
    std::string pts;
    for (auto [x, y] : s.points) {
      if (!(x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y))) continue;
      pts += fmt(px(std::log10(x))) + "," + fmt(py(std::log10(y))) + " ";
    }
    if (!pts.empty()) pts.pop_back();
    o << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\""
      << (s.dashed ? " stroke-dasharray=\"6,4\"" : "") << " points=\"" << pts << "\"/>\n"
      << "<text x=\"" << W - Rm + 12 << "\" y=\"" << Tm + 18 * (i + 1) << "\" font-size=\"12\" fill=\"" << color
      << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// ||u(T)||_{X_theta} against N per theta, with the perturbation size dashed.
inline std::string report_svg(const ExperimentReport& report) {
  std::vector<Series> series;
  Series pert{"perturbation norm", {}, true};
  for (double theta : report.config.theta) {
    Series s{"theta = " + fmt(theta), {}, false};
    for (const auto& r : report.at_theta(theta)) {
      if (!r.error.empty()) continue;
      s.points.emplace_back(r.N, r.sol_norm);
      if (theta == report.config.theta.front()) pert.points.emplace_back(r.N, r.pert_norm);
    }
    series.push_back(std::move(s));
  }
  series.push_back(std::move(pert));
  return svg_loglog(series, "solution norm at time T", "N", "norm");
}

struct RunManifest {
  std::string command_line;
  std::string config_text;
  std::string grid;
  double wall_seconds = 0.0;
  std::vector<std::string> outputs;
  std::string summary;
};

inline std::string manifest_text(const RunManifest& m) {
  std::ostringstream out;
  out << "version: " << kVersion << "\n"
      << "command: " << m.command_line << "\n"
      << "grid: " << m.grid << "\n"
      << "wall_seconds: " << fmt(m.wall_seconds) << "\n"
      << "summary: " << m.summary << "\n"
      << "outputs: ";
  for (std::size_t i = 0; i < m.outputs.size(); ++i) out << (i ? "," : "") << m.outputs[i];
  out << "\n";
  for (const auto& line : split(m.config_text, '\n'))
    if (!trim(line).empty()) out << "config." << line << "\n";
  return out.str();
}

/**
 * Writes report.csv, plot.svg (when requested and the report has data) and,
 * last, manifest.txt listing the files that now exist.
 */
inline std::vector<std::filesystem::path> write_report(const ExperimentReport& report,
                                                       const std::filesystem::path& dir, RunManifest manifest = {},
                                                       bool plot = true) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  std::vector<std::filesystem::path> files;
  write_atomic(dir / "report.csv", report_csv(report));
  files.push_back(dir / "report.csv");
  if (plot && !report.records.empty()) {
    write_atomic(dir / "plot.svg", report_svg(report));
    files.push_back(dir / "plot.svg");
  }
  std::size_t failed = 0;
  for (const auto& r : report.records) failed += r.error.empty() ? 0 : 1;
  if (manifest.summary.empty())
    manifest.summary = std::to_string(report.records.size() - failed) + " rows ok, " + std::to_string(failed) +
                       " rows failed";
  if (manifest.config_text.empty()) manifest.config_text = serialize(report.config);
  if (manifest.grid.empty())
    manifest.grid = "dim=" + std::to_string(report.config.dim) + " domain=" + to_string(report.config.domain) +
                    " mesh=" + std::to_string(report.config.mesh) + " extent=kmax*(2N+1)";
  for (const auto& f : files) manifest.outputs.push_back(f.filename().string());
  manifest.outputs.push_back("manifest.txt");
  write_atomic(dir / "manifest.txt", manifest_text(manifest));
  files.push_back(dir / "manifest.txt");
  return files;
}

}  // namespace amalgam::io
