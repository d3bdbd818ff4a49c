#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace amalgam;
using amalgam::testing::max_diff;
using amalgam::testing::random_field;

TEST(Grid, FlatIndexRoundTrips) {
  const GridSpec g = make_grid(2, 3, Domain::TruncatedEuclidean, 2);
  EXPECT_EQ(g.axis_size(), 13);
  for_each_point(g, [&](std::size_t i, const LatticePoint& k) {
    EXPECT_EQ(g.flat(k), i);
    EXPECT_EQ(g.point(i), k);
  });
}

TEST(Grid, RejectsBadArguments) {
  EXPECT_THROW(make_grid(4, 3, Domain::Torus, 1), ValidationError);
  EXPECT_THROW(make_grid(1, 0, Domain::Torus, 1), ValidationError);
  EXPECT_THROW(make_grid(1, 3, Domain::Torus, 2), ValidationError);
  EXPECT_THROW(make_grid(3, 1000, Domain::Torus, 1), ValidationError);
}

TEST(Grid, CellMeasure) {
  EXPECT_DOUBLE_EQ(make_grid(2, 3, Domain::Torus, 1).cell_measure(), 1.0);
  EXPECT_DOUBLE_EQ(make_grid(2, 3, Domain::TruncatedEuclidean, 4).cell_measure(), 1.0 / 16.0);
}

TEST(Field, ConjReflectIsInvolution) {
  const GridSpec g = make_grid(2, 2, Domain::Torus, 1);
  const SpectralField f = random_field(g, 2);
  EXPECT_EQ(max_diff(f.conj_reflect().conj_reflect(), f), 0.0);
  EXPECT_EQ(f.conj_reflect().at({1, -2, 0}), std::conj(f.at({-1, 2, 0})));
}

TEST(Field, EmbedCropsAndPads) {
  const GridSpec small = make_grid(1, 3, Domain::Torus, 1), big = make_grid(1, 6, Domain::Torus, 1);
  const SpectralField f = random_field(small, 3);
  const SpectralField up = embed(f, big);
  EXPECT_EQ(up.at({3, 0, 0}), f.at({3, 0, 0}));
  EXPECT_EQ(up.at({5, 0, 0}), cplx{});
  EXPECT_EQ(max_diff(embed(up, small), f), 0.0);
}

TEST(Field, SupportRadius) {
  const GridSpec g = make_grid(1, 9, Domain::Torus, 1);
  EXPECT_EQ(SpectralField(g).support_radius(), -1);
  EXPECT_EQ(SpectralField::delta(g, {-7, 0, 0}).support_radius(), 7);
}

TEST(Field, DataPairRequiresMatchingGrids) {
  EXPECT_THROW(DataPair(SpectralField(make_grid(1, 2, Domain::Torus, 1)), SpectralField(make_grid(1, 3, Domain::Torus, 1))),
               ValidationError);
}

TEST(Fft, FastSizesAreSmooth) {
  for (int n : {1, 7, 11, 13, 97, 1001, 14351}) {
    int m = fft::fast_size(n);
    EXPECT_GE(m, n);
    for (int p : {2, 3, 5, 7})
      while (m % p == 0) m /= p;
    EXPECT_EQ(m, 1);
  }
}

class TransformRoundTrip : public ::testing::TestWithParam<std::tuple<int, Domain, int>> {};

TEST_P(TransformRoundTrip, ForwardInvertsInverse) {
  const auto [dim, domain, mesh] = GetParam();
  const GridSpec g = make_grid(dim, 3, domain, mesh);
  const SpectralField f = random_field(g, g.half_width());
  for (int extra : {0, 5}) {
    const auto samples = inverse_transform(f, g.axis_size() + extra);
    EXPECT_LT(max_diff(forward_transform(samples), f), 1e-12);
  }
}

TEST_P(TransformRoundTrip, PlancherelWeight) {
  const auto [dim, domain, mesh] = GetParam();
  const GridSpec g = make_grid(dim, 3, domain, mesh);
  const SpectralField f = random_field(g, g.half_width());
  const auto samples = inverse_transform(f);
  double mean = 0.0;
  for (const auto& v : samples.values) mean += std::norm(v);
  mean /= static_cast<double>(samples.values.size());
  const double freq = std::pow(fl_norm(f, 2.0, 0.0), 2);
  EXPECT_NEAR(physical_l2_weight(g) * mean / freq, 1.0, 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Grids, TransformRoundTrip,
                         ::testing::Values(std::tuple{1, Domain::Torus, 1}, std::tuple{2, Domain::Torus, 1},
                                           std::tuple{1, Domain::TruncatedEuclidean, 4},
                                           std::tuple{2, Domain::TruncatedEuclidean, 2}));

TEST(Transform, MonochromaticWaveSamples) {
  const GridSpec g = make_grid(1, 4, Domain::Torus, 1);
  const auto s = inverse_transform(SpectralField::delta(g, {2, 0, 0}), 16);
  const double a = std::abs(s.values[0]);
  for (int j = 0; j < 16; ++j) {
    const double x = 2.0 * M_PI * j / 16.0;
    EXPECT_NEAR(std::arg(s.values[j] / a), std::arg(std::exp(cplx(0.0, 2.0 * x))), 1e-12);
  }
}

class ProductVsBrute : public ::testing::TestWithParam<std::tuple<int, Domain, int, bool>> {};

TEST_P(ProductVsBrute, MatchesDirectConvolution) {
  const auto [dim, domain, mesh, conj] = GetParam();
  const GridSpec g = make_grid(dim, 4, domain, mesh);
  for (int rep = 0; rep < 5; ++rep) {
    const SpectralField a = random_field(g, g.half_width()), b = random_field(g, g.half_width());
    const SpectralField fast = pointwise_product(a, b, conj);
    const SpectralField slow = oracle::crop(oracle::brute_convolution(a, conj ? b.conj_reflect() : b), g);
    EXPECT_LT(max_diff(fast, slow) / slow.max_abs(), 1e-12);
  }
}

INSTANTIATE_TEST_SUITE_P(Grids, ProductVsBrute,
                         ::testing::Values(std::tuple{1, Domain::Torus, 1, false}, std::tuple{1, Domain::Torus, 1, true},
                                           std::tuple{2, Domain::Torus, 1, false},
                                           std::tuple{1, Domain::TruncatedEuclidean, 3, true},
                                           std::tuple{2, Domain::TruncatedEuclidean, 2, false}));

TEST(Product, DeltaTimesDeltaShifts) {
  const GridSpec g = make_grid(1, 10, Domain::Torus, 1);
  const SpectralField p =
      pointwise_product(SpectralField::delta(g, {3, 0, 0}), SpectralField::delta(g, {4, 0, 0}), false);
  EXPECT_NEAR(std::abs(p.at({7, 0, 0})), 1.0, 1e-13);
  EXPECT_NEAR(p.max_abs(), 1.0, 1e-13);
}

TEST(Product, AliasingIsReportedWithoutPadding) {
  const GridSpec g = make_grid(1, 4, Domain::Torus, 1);
  const SpectralField f = SpectralField::delta(g, {3, 0, 0});
  EXPECT_THROW(pointwise_product(f, f, false, false), AliasingError);
  EXPECT_NO_THROW(pointwise_product(f, f, false, true));
}

TEST(Product, RealEvenFieldsStayRealEven) {
  const SpectralField phi = build_perturbation(PerturbationSpec::make(4, 1.5, 1), make_grid(1, 12, Domain::Torus, 1)).u0;
  const SpectralField cube = multiply({&phi, &phi, &phi}, 3);
  EXPECT_TRUE(cube.is_real_even(1e-10));
}

TEST(Window, CubeIndexUsesHalfOpenCubes) {
  EXPECT_EQ(cube_index(0, 1), 0);
  EXPECT_EQ(cube_index(5, 1), 5);
  EXPECT_EQ(cube_index(2, 4), 0);   // 1/2 lies in (-1/2, 1/2]
  EXPECT_EQ(cube_index(3, 4), 1);
  EXPECT_EQ(cube_index(-2, 4), -1);  // -1/2 belongs to the cube of -1
}

TEST(Window, BumpIsPartitionOfUnity) {
  for (int mesh : {1, 2, 4, 8}) {
    const WindowBump bump(mesh);
    const GridSpec g = make_grid(1, 4, mesh == 1 ? Domain::Torus : Domain::TruncatedEuclidean, mesh);
    for_each_point(g, [&](std::size_t, const LatticePoint& k) {
      if (std::abs(k[0]) > (g.extent - 1) * mesh) return;
      double sum = 0.0;
      for (const auto& n : window_candidates(bump, g, k)) sum += bump.window(g, k, n);
      EXPECT_NEAR(sum, 1.0, 1e-14);
    });
  }
}

TEST(Window, BoxOpOnTorusIsCubeRestriction) {
  const GridSpec g = make_grid(1, 6, Domain::Torus, 1);
  const SpectralField f = random_field(g, 6);
  EXPECT_EQ(max_diff(box_op(f, {2, 0, 0}), cube_restrict(f, {2, 0, 0})), 0.0);
}
