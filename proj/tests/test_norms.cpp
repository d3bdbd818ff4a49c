#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace amalgam;
using amalgam::testing::random_field;
using amalgam::testing::uniform;

namespace {

const GridSpec kTorus = make_grid(1, 12, Domain::Torus, 1);
const GridSpec kEucl = make_grid(1, 5, Domain::TruncatedEuclidean, 4);

}  // namespace

TEST(SpaceSpec, ValidatesExponents) {
  EXPECT_THROW(SpaceSpec::make(Family::FourierAmalgam, 0.5, 2, 0), ValidationError);
  EXPECT_THROW(SpaceSpec::make(Family::FourierAmalgam, 2, 0.0, 0), ValidationError);
  EXPECT_NO_THROW(SpaceSpec::make(Family::FourierAmalgam, kInf, kInf, -3));
  EXPECT_THROW(parse_family("besov"), ValidationError);
  EXPECT_EQ(parse_family("modulation"), Family::Modulation);
}

TEST(Norms, PerturbationSupportForNEight) {
  const GridSpec g = make_grid(1, 17, Domain::Torus, 1);
  const DataPair phi = build_perturbation(PerturbationSpec::make(8, 1.0, 1), g);
  std::vector<int> support;
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    if (phi.u0[i] != cplx{}) support.push_back(k[0]);
  });
  EXPECT_EQ(support, (std::vector<int>{-17, -16, -15, -9, -8, -7, 7, 8, 9, 15, 16, 17}));
  EXPECT_DOUBLE_EQ(fl_norm(phi.u0, 1.0, 0.0), 12.0);
  EXPECT_TRUE(phi.u0.is_real_even());
}

TEST(Norms, DeltaValues) {
  const SpectralField d = SpectralField::delta(kTorus, {3, 0, 0}, 2.0);
  const double w = std::pow(10.0, 0.25);  // <3>^{1/2}
  EXPECT_NEAR(fourier_amalgam_norm(d, 2, 2, 0.5), 2.0 * w, 1e-14);
  EXPECT_NEAR(fl_norm(d, 1, 0.5), 2.0 * w, 1e-14);
  EXPECT_NEAR(modulation_norm(d, 1, 0.5), 2.0 * w, 1e-14);
  EXPECT_NEAR(wiener_amalgam_norm(d, 1, 0.5), 2.0 * w, 1e-14);
  EXPECT_NEAR(sobolev_norm(d, 0.5), 2.0 * w, 1e-14);
}

TEST(Norms, TorusAmalgamIsIndependentOfInnerExponent) {
  for (int i = 0; i < 50; ++i) {
    const SpectralField f = random_field(kTorus, 12);
    const double s = uniform(-2, 2);
    for (double q : {1.0, 2.0, kInf}) {
      const double ref = fourier_amalgam_norm(f, 2, q, s);
      for (double p : {1.0, 3.0, kInf}) EXPECT_NEAR(fourier_amalgam_norm(f, p, q, s) / ref, 1.0, 1e-12);
      EXPECT_NEAR(fl_norm(f, q, s) / ref, 1.0, 1e-12);
    }
  }
}

TEST(Norms, SobolevEqualsAmalgamTwoTwo) {
  for (int i = 0; i < 30; ++i) {
    const SpectralField f = random_field(kTorus, 10);
    const double s = uniform(-2, 2);
    EXPECT_NEAR(sobolev_norm(f, s) / fourier_amalgam_norm(f, 2, 2, s), 1.0, 1e-10);
    const SpectralField h = random_field(kEucl, 16);
    EXPECT_NEAR(sobolev_norm(h, 0) / fourier_amalgam_norm(h, 2, 2, 0), 1.0, 1e-10);
  }
}

TEST(Norms, WeightsAreEquivalentOnEuclideanCubes) {
  // <xi>/<n> lies in [1/sqrt(2), sqrt(2)]-ish bounds on each unit cube, so the
  // two weighted norms agree up to 2^{|s|/2} times a cube-size factor.
  for (int i = 0; i < 20; ++i) {
    const SpectralField h = random_field(kEucl, 16);
    const double s = uniform(-2, 2);
    const double r = sobolev_norm(h, s) / fourier_amalgam_norm(h, 2, 2, s);
    EXPECT_LE(r, std::pow(2.0, std::abs(s)));
    EXPECT_GE(r, std::pow(2.0, -std::abs(s)));
  }
}

TEST(Norms, WienerTwoEqualsModulationTwo) {
  for (const GridSpec& g : {kTorus, kEucl}) {
    for (int i = 0; i < 10; ++i) {
      const SpectralField f = random_field(g, g.half_width() - 1);
      const double s = uniform(-1.5, 1.5);
      EXPECT_NEAR(wiener_amalgam_norm(f, 2, s) / modulation_norm(f, 2, s), 1.0, 1e-8);
    }
  }
}

TEST(Norms, WienerBelowAmalgamForSmallQOnTorus) {
  for (int i = 0; i < 100; ++i) {
    const SpectralField f = random_field(kTorus, 12);
    const double s = uniform(-2, 2);
    for (double q : {1.0, 1.5, 2.0}) EXPECT_LE(wiener_amalgam_norm(f, q, s), fourier_amalgam_norm(f, 2, q, s) + 1e-10);
  }
}

TEST(Norms, WienerBelowAmalgamUpToWindowOverlapOnEuclideanGrid) {
  const double overlap = 3.0 * std::pow(2.0, 2.0);  // 3^d 2^{|s|}, |s| <= 2
  for (int i = 0; i < 30; ++i) {
    const SpectralField f = random_field(kEucl, 16);
    const double s = uniform(-2, 2);
    EXPECT_LE(wiener_amalgam_norm(f, 1, s), overlap * fourier_amalgam_norm(f, 2, 1, s));
  }
}

TEST(Norms, WienerMonotoneInOuterExponent) {
  for (int i = 0; i < 50; ++i) {
    const SpectralField f = random_field(kTorus, 12);
    const double s = uniform(-2, 2);
    EXPECT_LE(wiener_amalgam_norm(f, 2, s), wiener_amalgam_norm(f, 1, s) * (1 + 1e-12));
    EXPECT_LE(wiener_amalgam_norm(f, kInf, s), wiener_amalgam_norm(f, 2, s) * (1 + 1e-12));
  }
}

TEST(Norms, AmalgamMonotoneInRegularityAndOuterExponent) {
  for (int i = 0; i < 50; ++i) {
    const SpectralField f = random_field(kEucl, 18);
    EXPECT_LE(fourier_amalgam_norm(f, 2, 2, -1), fourier_amalgam_norm(f, 2, 2, 0.5));
    EXPECT_LE(fourier_amalgam_norm(f, 2, 2, 0), fourier_amalgam_norm(f, 2, 1, 0) * (1 + 1e-12));
  }
}

TEST(Norms, RestrictedNormIsOneTermOfTheSum) {
  const SpectralField f = random_field(kTorus, 5);
  const SpaceSpec sp = SpaceSpec::make(Family::FourierAmalgam, 2, 1, -0.4);
  double total = 0.0;
  for (int n = -5; n <= 5; ++n) total += restricted_norm(f, sp, {n, 0, 0});
  EXPECT_NEAR(total, norm(f, sp), 1e-12);
}

TEST(Norms, PairNormAddsVelocityAtLowerRegularity) {
  const SpectralField u0 = SpectralField::delta(kTorus, {1, 0, 0});
  const SpectralField u1 = SpectralField::delta(kTorus, {1, 0, 0});
  const DataPair p(u0, u1);
  const SpaceSpec sp = SpaceSpec::make(Family::FourierAmalgam, 2, 2, 0);
  EXPECT_NEAR(pair_norm(p, sp), 1.0 + std::sqrt(2.0) / std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(fl1_pair_norm(p), 2.0, 1e-14);
}

TEST(Algebra, ModuleInequalityAtZeroRegularity) {
  for (int i = 0; i < 100; ++i) {
    const GridSpec& g = i % 2 ? kTorus : kEucl;
    const SpectralField f = random_field(g, g.half_width() / 2), h = random_field(g, g.half_width() / 2);
    const double p = i % 3 == 0 ? 1.0 : (i % 3 == 1 ? 2.0 : kInf);
    const double q = i % 4 == 0 ? 1.0 : (i % 4 == 1 ? 2.0 : kInf);
    EXPECT_TRUE(algebra_check(f, h, SpaceSpec::make(Family::FourierAmalgam, p, q, 0)).ok);
  }
}

TEST(Algebra, FailsForNegativeRegularity) {
  // Two far-apart deltas multiply into the low-frequency cube, where the
  // negative-order weight is largest.
  const int N = 20;
  const GridSpec g = make_grid(1, N, Domain::Torus, 1);
  const SpectralField f = SpectralField::delta(g, {-N, 0, 0});
  const SpectralField h = SpectralField::delta(g, {N, 0, 0});
  const AlgebraCheck chk = algebra_check(f, h, SpaceSpec::make(Family::FourierAmalgam, 2, 2, -1));
  EXPECT_FALSE(chk.ok);
  EXPECT_NEAR(chk.lhs / chk.rhs, std::sqrt(1.0 + N * N), 1e-9);
}
