#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace amalgam;
using amalgam::testing::max_diff;
using amalgam::testing::random_field;

TEST(Brute, ConvolutionOfDeltas) {
  const GridSpec g = make_grid(1, 5, Domain::Torus, 1);
  const SpectralField c = oracle::brute_convolution(SpectralField::delta(g, {4, 0, 0}, 2.0),
                                                    SpectralField::delta(g, {3, 0, 0}, 3.0));
  EXPECT_EQ(c.grid().extent, 10);
  EXPECT_NEAR(std::abs(c.at({7, 0, 0}) - 6.0), 0.0, 1e-15);
}

TEST(Brute, EuclideanConvolutionCarriesCellWeight) {
  const GridSpec g = make_grid(1, 2, Domain::TruncatedEuclidean, 4);
  const SpectralField a = random_field(g, 8), b = random_field(g, 8);
  const SpectralField fast = pointwise_product(a, b, false);
  EXPECT_LT(max_diff(fast, oracle::crop(oracle::brute_convolution(a, b), g)), 1e-12);
}

TEST(Brute, RefusesHugeLattices) {
  const GridSpec g = make_grid(3, 9, Domain::Torus, 1);
  EXPECT_THROW(oracle::brute_convolution(SpectralField(g), SpectralField(g)), ValidationError);
}

TEST(Ds, CatalanNumbers) {
  const auto b = oracle::ds_exact(2, 25);
  const std::vector<std::uint64_t> head{0, 1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862};
  for (std::size_t k = 1; k < head.size(); ++k) EXPECT_EQ(b[k], head[k]);
  EXPECT_EQ(b[25], 1289904147324ULL);
  EXPECT_NEAR(static_cast<double>(oracle::ds_constant(2, 1.0, 1.0)), 6.57973626739291, 1e-13);
}

TEST(Ds, CatalanBoundIsTightAtTheFirstTerm) {
  const auto r = oracle::ds_verify(2, 1.0, 1.0, 25);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.hypothesis_ok);
  EXPECT_DOUBLE_EQ(r.worst_ratio, 1.0);
  EXPECT_EQ(r.worst_k, 1);
}

TEST(Ds, CubicSequence) {
  const auto r = oracle::ds_verify(3, 2.0, 0.5, 7);
  const std::vector<double> expect{0.5, 0.0, 0.25, 0.0, 0.375, 0.0, 0.75};
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(static_cast<double>(r.terms[i + 1]), expect[i], 1e-15);
  EXPECT_TRUE(r.ok);
}

TEST(Ds, ViolatingSequenceIsFlagged) {
  const auto r = oracle::ds_verify_terms(2, 1.0, {1.0, 5.0, 1.0});
  EXPECT_FALSE(r.hypothesis_ok);
  const auto fine = oracle::ds_verify_terms(2, 1.0, {1.0, 1.0, 2.0, 5.0});
  EXPECT_TRUE(fine.hypothesis_ok);
  EXPECT_TRUE(fine.ok);
}

TEST(Ds, ExactArithmeticDetectsOverflow) { EXPECT_THROW(oracle::ds_exact(2, 45), NumericError); }

TEST(Rk4, LinearProblemMatchesPropagator) {
  const GridSpec g = make_grid(1, 6, Domain::Torus, 1);
  const NlwProblem pr = NlwProblem::make(3, 3, 1, g);
  const DataPair d(1e-8 * random_field(g, 6), 1e-8 * random_field(g, 6));
  const SpectralField rk = oracle::rk4_frequency_oracle(d, pr, 1.0, oracle::default_rk4_step(g, 1.0));
  EXPECT_LT(max_diff(rk, propagate_linear(d, 1.0)) / d.u0.max_abs(), 1e-8);
}

TEST(Rk4, RejectsUnstableStep) {
  const GridSpec g = make_grid(1, 20, Domain::Torus, 1);
  const NlwProblem pr = NlwProblem::make(3, 3, 1, g);
  const DataPair d = DataPair::position_only(SpectralField(g));
  EXPECT_THROW(oracle::rk4_frequency_oracle(d, pr, 1.0, 0.1), ValidationError);
}

TEST(ClosedForm, QuarterAtHalfPi) { EXPECT_NEAR(oracle::s2_closed_form(1, M_PI / 2).real(), 0.25, 1e-15); }
