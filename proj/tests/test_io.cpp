#include <gtest/gtest.h>

#include <filesystem>

#include "test_util.hpp"

using namespace amalgam;
using amalgam::testing::max_diff;
using amalgam::testing::random_field;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("amalgam_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentReport tiny_report() {
  ExperimentReport rep;
  rep.config.theta = {-0.4, 1.0};
  rep.config.N = {64, 128};
  for (int N : rep.config.N)
    for (double th : rep.config.theta) {
      ExperimentRecord r;
      r.N = N;
      r.theta = th;
      r.R = 0.1 * N;
      r.T = 1.0 / N;
      r.pert_norm = 1.0 / N;
      r.sol_norm = N * (th + 2);
      r.regime.i = true;
      r.error = N == 128 ? "boom, \"quoted\"" : "";
      rep.records.push_back(r);
    }
  return rep;
}

}  // namespace

TEST(Format, ShortestRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) EXPECT_EQ(io::parse_double(io::fmt(x), "x"), x);
  EXPECT_EQ(io::fmt(kInf), "inf");
  EXPECT_THROW(io::parse_double("1.5x", "x"), ValidationError);
  EXPECT_THROW(io::parse_int("2.5", "n"), ValidationError);
}

TEST(FieldCsv, RoundTripsEveryGrid) {
  for (const GridSpec& g : {make_grid(1, 5, Domain::Torus, 1), make_grid(2, 2, Domain::TruncatedEuclidean, 3)}) {
    const SpectralField f = random_field(g, g.half_width() - 1);
    const SpectralField back = io::field_from_csv(io::field_to_csv(f));
    EXPECT_EQ(back.grid(), g);
    EXPECT_EQ(max_diff(back, f), 0.0);
  }
}

TEST(FieldCsv, RejectsMalformedInput) {
  EXPECT_THROW(io::field_from_csv("xi1,re,im\n0,1,0\n"), ValidationError);
  const std::string head = "# grid: dim=1 extent=2 domain=torus mesh=1\nxi1,re,im\n";
  EXPECT_THROW(io::field_from_csv(head + "5,1,0\n"), ValidationError);
  EXPECT_THROW(io::field_from_csv(head + "1,abc,0\n"), ValidationError);
  EXPECT_NO_THROW(io::field_from_csv(head + "1,2,0\n"));
}

TEST(FieldCsv, FileRoundTrip) {
  const fs::path dir = scratch("field");
  const SpectralField f = random_field(make_grid(1, 4, Domain::Torus, 1), 3);
  io::write_field(f, dir / "f.csv");
  EXPECT_EQ(max_diff(io::read_field(dir / "f.csv"), f), 0.0);
  EXPECT_THROW(io::read_field(dir / "missing.csv"), IoError);
}

TEST(Config, DefaultsRoundTrip) {
  const InflationConfig c = io::parse_config("");
  EXPECT_EQ(c, InflationConfig{});
  EXPECT_EQ(io::parse_config(io::serialize(c)), c);
}

TEST(Config, ParsesAndOverrides) {
  const std::string text = "# sweep\ns: -0.5\nsigma: 5\nrho: 4\nkmax: 9\ndelta: 0.05\nN: 16, 32\ntheta: -0.5,0,3\nfamily: modulation\n";
  const InflationConfig c = io::parse_config(text, {{"N", "8"}});
  EXPECT_EQ(c.sigma, 5);
  EXPECT_EQ(c.rho, 4);
  EXPECT_EQ(c.N, std::vector<int>{8});
  EXPECT_EQ(c.theta, (std::vector<double>{-0.5, 0.0, 3.0}));
  EXPECT_EQ(c.family, Family::Modulation);
}

TEST(Config, ErrorsNameTheKey) {
  try {
    io::parse_config("sigma: 2\nrho: 3\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'sigma', 'rho'"), std::string::npos);
  }
  try {
    io::parse_config("s: 0.2\n");
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("'s'"), std::string::npos);
  }
  EXPECT_THROW(io::parse_config("colour: blue\n"), ValidationError);
  EXPECT_THROW(io::parse_config("sigma 3\n"), ValidationError);
}

TEST(Report, CsvRoundTrip) {
  const ExperimentReport rep = tiny_report();
  const std::string csv = io::report_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), io::report_header());
  const ExperimentReport back = io::report_from_csv(csv);
  ASSERT_EQ(back.records.size(), rep.records.size());
  for (std::size_t i = 0; i < rep.records.size(); ++i) {
    EXPECT_EQ(back.records[i].N, rep.records[i].N);
    EXPECT_EQ(back.records[i].sol_norm, rep.records[i].sol_norm);
    EXPECT_EQ(back.records[i].error, rep.records[i].error);
    EXPECT_EQ(back.records[i].regime.i, rep.records[i].regime.i);
  }
  EXPECT_EQ(back.config.theta, rep.config.theta);
  EXPECT_EQ(back.config.N, rep.config.N);
}

TEST(Report, CsvIsDeterministic) { EXPECT_EQ(io::report_csv(tiny_report()), io::report_csv(tiny_report())); }

TEST(Report, SvgHasOneCurvePerTheta) {
  const std::string svg = io::report_svg(tiny_report());
  EXPECT_NE(svg.find("<svg"), std::string::npos);
  std::size_t count = 0;
  for (std::size_t pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++count;
  EXPECT_EQ(count, 3u);  // two theta curves and the perturbation norm
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);
}

TEST(Report, WriteReportProducesManifestLast) {
  const fs::path dir = scratch("report");
  io::RunManifest m;
  m.command_line = "amalgam inflate";
  m.wall_seconds = 1.5;
  const auto files = io::write_report(tiny_report(), dir, m);
  ASSERT_EQ(files.size(), 3u);
  EXPECT_EQ(files.back().filename(), "manifest.txt");
  const std::string man = io::read_text(dir / "manifest.txt");
  EXPECT_NE(man.find("version: " + std::string(io::kVersion)), std::string::npos);
  EXPECT_NE(man.find("config.sigma: 3"), std::string::npos);
  EXPECT_EQ(io::read_text(dir / "report.csv").find("wall"), std::string::npos);
}

TEST(Report, EmptySweepWritesNoPlot) {
  const fs::path dir = scratch("empty");
  ExperimentReport rep;
  const auto files = io::write_report(rep, dir, io::RunManifest{});
  EXPECT_FALSE(fs::exists(dir / "plot.svg"));
  EXPECT_TRUE(fs::exists(dir / "report.csv"));
  EXPECT_EQ(files.size(), 2u);
}
