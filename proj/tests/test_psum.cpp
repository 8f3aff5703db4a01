#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "horocvx/psum.hpp"
#include "horocvx/util.hpp"

using namespace horocvx;

namespace {

HPoint figure_Y(int n) { return LorentzVec::make(n, {1, 0, 0}, std::sqrt(2.0)); }

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST(PSum, FigureConfiguration) {
  for (int n : {1, 2}) {
    TwoPointBall B = two_point_ball(2.0, 16.0 / 25.0, 1, origin(n), 1, figure_Y(n));
    EXPECT_NEAR(B.T.x[0], 0.8, 1e-12);
    EXPECT_NEAR(B.T.h, (3 + 4 * std::sqrt(2.0)) / 5, 1e-12);
    double R = std::sqrt((25 + 24 * std::sqrt(2.0)) / 25);
    EXPECT_NEAR(B.R, R, 1e-12);
    EXPECT_NEAR(B.radius, std::log(R), 1e-12);
    EXPECT_NEAR(B.radius, 0.428832, 1e-6);
    EXPECT_NEAR(B.center.h, B.T.h / R, 1e-12);
    EXPECT_FALSE(B.empty);
  }
}

TEST(PSum, TwoPointBallP1) {
  TwoPointBall B = two_point_ball(1.0, 0.3, 1, origin(2), 1, origin(2));
  EXPECT_NEAR(B.R, 2.0, 1e-15);
  EXPECT_NEAR(B.radius, std::log(2.0), 1e-15);
  EXPECT_NEAR(B.center.h, 1.0, 1e-15);
  TwoPointBall E = two_point_ball(1.0, 0.3, 0.2, origin(2), 0.2, origin(2));
  EXPECT_TRUE(E.empty);
  EXPECT_NEAR(E.R, 0.4, 1e-15);  // T = 0.4 N
}

TEST(PSum, ConcentricBallsRandom) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(0, 1);
  for (auto g : {make_grid(1, 64), make_grid(2, 16)}) {
    int n = g->n();
    for (int trial = 0; trial < 20; ++trial) {
      double p = 0.5 + 1.5 * U(rng);
      double a = 0.2 + 1.5 * U(rng);
      double b = std::max(1.0 - a, 0.0) + 1.5 * U(rng);
      double r1 = 1.5 * U(rng), r2 = 1.5 * U(rng);
      HPoint C = radial_point(n, {0.6, 0.8, 0.0}, 0.7 * U(rng));
      PSumResult S = p_sum(a, support_of_ball(g, C, r1), p, b, support_of_ball(g, C, r2));
      double r = std::log(a * std::exp(p * r1) + b * std::exp(p * r2)) / p;
      SupportField expect = support_of_ball(g, C, r);
      EXPECT_LE(max_abs_diff(S.field.phi, expect.phi), 1e-12 * (1 + std::exp(r) * C.h * 2));
      EXPECT_EQ(S.convexity.cls, Convexity::Uniform);
    }
  }
}

TEST(PSum, TrivialCases) {
  auto g = make_grid(1, 32);
  SupportField K = support_of_ball(g, radial_point(1, {1, 0, 0}, 0.4), 0.5);
  SupportField L = support_of_ball(g, origin(1), 0.9);
  EXPECT_LE(max_abs_diff(p_sum(1, K, 1.5, 0, L).field.phi, K.phi), 1e-14);
  EXPECT_LE(max_abs_diff(p_sum(0.3, K, 0.7, 0.7, K).field.phi, K.phi), 1e-14);
  EXPECT_THROW(p_sum(0.3, K, 1.0, 0.3, L), InvalidArgument);
  EXPECT_THROW(p_sum(1, K, 2.5, 1, L), InvalidArgument);
  EXPECT_THROW(p_sum(1, K, 1.0, 1, support_of_ball(make_grid(1, 16), origin(1), 1.0)), InvalidArgument);
}

TEST(PSum, Dilation) {
  auto g = make_grid(2, 12);
  SupportField K = support_of_ball(g, origin(2), 0.5);
  double p = 1.7;
  SupportField D = p_dilate(std::exp(p), p, K);
  for (std::size_t i = 0; i < g->size(); ++i) EXPECT_NEAR(D.phi[i], std::exp(1.0) * K.phi[i], 1e-13);
  double a = 2.3;
  HPoint C = radial_point(2, {0, 0.6, 0.8}, 0.5);
  SupportField Db = p_dilate(a, p, support_of_ball(g, C, 0.4));
  SupportField expect = support_of_ball(g, C, 0.4 + std::log(a) / p);
  EXPECT_LE(max_abs_diff(Db.phi, expect.phi), 1e-12);
  SupportField Id = p_dilate(1.0, p, K);
  EXPECT_EQ(Id.phi, K.phi);
  EXPECT_THROW(p_dilate(0.5, p, K), InvalidArgument);
}

TEST(PSum, TwoPointSum) {
  auto g = make_grid(1, 64);
  HPoint X = radial_point(1, {1, 0, 0}, 0.6);
  // X = Y gives the ball of radius (1/p) log(a + b) at X.
  SupportField S = two_point_sum(g, 1.5, 0.8, X, 0.7, X);
  SupportField B = support_of_ball(g, X, std::log(1.5) / 1.5);
  EXPECT_LE(max_abs_diff(S.phi, B.phi), 1e-12);
  // p = 1: ball B(T/N(T), log N(T)), T = aX + bY.
  HPoint Y = radial_point(1, {0, 1, 0}, 0.9);
  LorentzVec T = 0.8 * X + 0.7 * Y;
  SupportField S1 = two_point_sum(g, 1.0, 0.8, X, 0.7, Y);
  SupportField B1 = support_of_ball(g, normalize_to_hyperboloid(T), std::log(minkowski_norm(T)));
  EXPECT_LE(max_abs_diff(S1.phi, B1.phi), 1e-12);
  // a = 1, b = 0 is the point field of X.
  SupportField P = two_point_sum(g, 2.0, 1.0, X, 0.0, Y);
  EXPECT_LE(max_abs_diff(P.phi, support_of_point(g, X).phi), 1e-14);
  ConvexityReport c = convexity(two_point_sum(g, 1.5, 1.0, X, 1.0, Y));
  EXPECT_NE(c.cls, Convexity::Not);
  EXPECT_THROW(two_point_sum(g, 1.5, 0.2, X, 0.2, Y), InvalidArgument);
}

TEST(PSum, Compatibility) {
  for (int n : {1, 2}) {
    HPoint N = origin(n), Y = figure_Y(n);
    EXPECT_LE(compatibility_check(1.0, 1, N, 1, Y, 200), 1e-9);
    EXPECT_LE(compatibility_check(2.0, 1, N, 1, N, 200), 1e-9);
    EXPECT_LE(compatibility_check(2.0, 1, N, 1, Y, 200), 1e-6);
    EXPECT_LE(compatibility_check(1.5, 0.7, N, 0.6, Y, 200), 1e-6);
    EXPECT_LE(compatibility_check(0.7, 1.2, N, 0.9, Y, 200), 1e-6);
  }
}

TEST(PSum, DilatesCheck) {
  auto g = make_grid(2, 12);
  SupportField K = support_of_ball(g, radial_point(2, {1, 0, 0}, 0.3), 0.6);
  EXPECT_TRUE(dilates_check(K, p_dilate(3.0, 1.0, K)).is_dilate);
  EXPECT_TRUE(dilates_check(support_of_ball(g, origin(2), 0.2), support_of_ball(g, origin(2), 1.1)).is_dilate);
  DilateReport off = dilates_check(support_of_ball(g, origin(2), 0.5), K);
  EXPECT_FALSE(off.is_dilate);
  EXPECT_GT(off.ratio_variation, 0.1);
}

TEST(PSum, AssociativityWithDilation) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  auto g = make_grid(1, 64);
  for (int trial = 0; trial < 20; ++trial) {
    double p = 0.5 + 1.5 * U(rng), a = 0.5 + U(rng), b = 0.5 + U(rng);
    SupportField K = support_of_ball(g, radial_point(1, {0.6, 0.8, 0}, U(rng)), 0.2 + U(rng));
    SupportField lhs = p_sum(a, K, p, b, K).field;
    SupportField rhs = p_dilate(a + b, p, K);
    EXPECT_LE(max_abs_diff(lhs.phi, rhs.phi), 1e-12 * (1 + rhs.phi[0]) * 10);
  }
}

TEST(PSum, MonotonicityProperty) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0, 1);
  auto g = make_grid(2, 12);
  for (int trial = 0; trial < 20; ++trial) {
    double p = 0.5 + 1.5 * U(rng), a = 0.5 + U(rng), b = 0.5 + U(rng);
    HPoint C = radial_point(2, {0, 0.6, 0.8}, U(rng));
    double r = 0.1 + U(rng);
    SupportField K = support_of_ball(g, C, r);
    SupportField Kp = support_of_ball(g, C, r + 0.5 * U(rng));
    SupportField L = support_of_ball(g, radial_point(2, {1, 0, 0}, U(rng)), 0.3 + U(rng));
    SupportField s1 = p_sum(a, K, p, b, L).field, s2 = p_sum(a, Kp, p, b, L).field;
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_LE(s1.phi[i], s2.phi[i] * (1 + 1e-14));
  }
}

TEST(PSum, BallSumContainsConcentricRadiusBall) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0, 1);
  auto g = make_grid(1, 128);
  for (int trial = 0; trial < 10; ++trial) {
    double p = 0.5 + 1.5 * U(rng), a = 0.5 + U(rng), b = 0.5 + U(rng);
    double r1 = 0.2 + U(rng), r2 = 0.2 + U(rng);
    HPoint X = radial_point(1, {1, 0, 0}, 0.5 * U(rng)), Y = radial_point(1, {0, 1, 0}, 0.2 + U(rng));
    SupportField sum = p_sum(a, support_of_ball(g, X, r1), p, b, support_of_ball(g, Y, r2)).field;
    double t = b * std::exp(p * r2) / (a * std::exp(p * r1) + b * std::exp(p * r2));
    double r = std::log(a * std::exp(p * r1) + b * std::exp(p * r2)) / p;
    // Center: a point of the two-point sum (1 - t) X +_p t Y, here its t-ball.
    TwoPointBall B = two_point_ball(p, t, 1 - t, X, t, Y);
    if (B.empty) continue;
    SupportField ball = support_of_ball(g, B.center, r);
    for (std::size_t i = 0; i < g->size(); ++i) EXPECT_LE(ball.phi[i], sum.phi[i] + 1e-8);
  }
}

TEST(PSum, IsometryEquivariance) {
  auto g = make_grid(2, 24);
  SupportField K = support_of_ball(g, radial_point(2, {1, 0, 0}, 0.3), 0.5);
  SupportField L = support_of_ball(g, radial_point(2, {0, 0, 1}, 0.2), 0.7);
  Isometry f = boost(2, 1, 0.3) * rotation(2, 0, 2, 0.5);
  SupportField lhs = apply_isometry_field(p_sum(1.0, K, 1.5, 0.8, L).field, f);
  SupportField rhs = p_sum(1.0, apply_isometry_field(K, f), 1.5, 0.8, apply_isometry_field(L, f)).field;
  EXPECT_LE(max_abs_diff(lhs.phi, rhs.phi), 1e-6);
}
