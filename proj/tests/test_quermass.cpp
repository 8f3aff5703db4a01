#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "horocvx/psum.hpp"
#include "horocvx/quermass.hpp"
#include "horocvx/util.hpp"

using namespace horocvx;

namespace {

SupportField perturbed_s1(GridPtr g) {
  return make_field(g, sample(*g, [](const Dir& z) { return 2.0 + 0.2 * std::cos(2 * std::atan2(z[1], z[0])); }));
}

SupportField perturbed_s2(GridPtr g) {
  return make_field(g, sample(*g, [](const Dir& z) { return 2.0 + 0.08 * (3 * z[2] * z[2] - 1) + 0.05 * z[0] * z[1]; }));
}

}  // namespace

TEST(Quermass, IkExamples) {
  const double pi = M_PI;
  EXPECT_NEAR(I_k(2, 2, std::log(2.0)), 3 * pi / 2, 1e-12);
  double r = std::log(2.0);
  EXPECT_NEAR(I_k(2, 1, r), 4 * pi * (r / 2 + (std::exp(-2 * r) - 1) / 4), 1e-12);
  EXPECT_NEAR(I_k(2, 1, r), 1.998978, 1e-6);
  for (double s : {0.3, 1.0, 2.0}) {
    EXPECT_NEAR(I_k(1, 0, s), 2 * pi * (std::cosh(s) - 1), 1e-11 * std::cosh(s));
    // Volume of a ball in H^3: pi (sinh 2r - 2r).
    EXPECT_NEAR(I_k(2, 0, s), pi * (std::sinh(2 * s) - 2 * s), 1e-11 * std::cosh(2 * s));
  }
  EXPECT_EQ(I_k(2, 1, 0.0), 0.0);
  EXPECT_THROW(I_k(2, 3, 1.0), InvalidArgument);
}

TEST(Quermass, IkInverseRoundTrip) {
  for (int n : {1, 2}) {
    for (int k = 0; k <= n; ++k) {
      for (double r : {0.05, 0.3, std::log(2.0), 1.2, 2.5}) {
        EXPECT_NEAR(I_k_inverse(n, k, I_k(n, k, r)), r, 1e-12 * std::max(1.0, r));
      }
    }
  }
  EXPECT_THROW(I_k_inverse(1, 1, 2 * M_PI), DomainError);
  EXPECT_THROW(I_k_inverse(2, 0, -1.0), DomainError);
  EXPECT_EQ(I_k_sup(2, 0), std::numeric_limits<double>::infinity());
  EXPECT_NEAR(I_k_sup(2, 2), 2 * M_PI, 1e-15);
}

TEST(Quermass, CurvatureIntegralBalls) {
  for (auto g : {make_grid(1, 64), make_grid(2, 16)}) {
    int n = g->n();
    double r = 0.7;
    SupportField B = support_of_ball(g, origin(n), r);
    for (int m = 0; m <= n; ++m) {
      double expect = sphere_area(n) * std::pow(std::sinh(r), n - m) * std::exp(-m * r);
      EXPECT_NEAR(curvature_integral(B, m), expect, 1e-11 * expect);
    }
    SupportField P = support_of_point(g, radial_point(n, {0.6, 0.8, 0}, 0.4));
    for (int m = 0; m < n; ++m) EXPECT_NEAR(curvature_integral(P, m), 0.0, 1e-8);
  }
}

TEST(Quermass, BallsMatchIk) {
  for (auto g : {make_grid(1, 64), make_grid(2, 16)}) {
    int n = g->n();
    for (double r : {0.3, std::log(2.0), 1.2}) {
      SupportField B = support_of_ball(g, origin(n), r);
      for (int k = 0; k <= n; ++k) {
        EXPECT_NEAR(modified_quermass_homotopy(B, k).value, I_k(n, k, r), 1e-8) << n << " " << k << " " << r;
        EXPECT_NEAR(k_mean_radius(B, k), r, 1e-8);
      }
      EXPECT_NEAR(quermass_closed_n(B), I_k(n, n, r), 1e-12);
    }
  }
}

TEST(Quermass, PointIsZero) {
  for (auto g : {make_grid(1, 32), make_grid(2, 12)}) {
    int n = g->n();
    SupportField P = support_of_point(g, origin(n));
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(modified_quermass(P, k).value, 0.0);
      EXPECT_EQ(k_mean_radius(P, k), 0.0);
    }
  }
}

TEST(Quermass, KnClosedFormAndRadius) {
  for (auto K : {perturbed_s1(make_grid(1, 64)), perturbed_s2(make_grid(2, 16))}) {
    int n = K.n();
    QuermassReport h = modified_quermass_homotopy(K, n);
    EXPECT_NEAR(h.value, quermass_closed_n(K), 1e-9);
    ScalarField f(K.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(K.phi[i], -n);
    double rn = -std::log(K.grid->integrate(f) / sphere_area(n)) / n;
    EXPECT_NEAR(k_mean_radius(K, n), rn, 1e-12);
    EXPECT_EQ(modified_quermass(K, n).method, "closed-form-k=n");
  }
}

TEST(Quermass, InductionRelation) {
  // n = 1: W~_0 is the enclosed area A. Gauss-Bonnet gives int kappa~ ds = 2 pi + A - L
  // and W~_1 = 2 pi - int kappa~ ds, so L = W~_0 + W~_1.
  auto g = make_grid(1, 64);
  for (double r : {0.3, 1.1}) {
    SupportField B = support_of_ball(g, origin(1), r);
    double len = curvature_integral(B, 0);
    EXPECT_NEAR(len, modified_quermass(B, 0).value + modified_quermass(B, 1).value, 1e-8);
  }
  SupportField K = perturbed_s1(make_grid(1, 128));
  double len = curvature_integral(K, 0);
  EXPECT_NEAR(len - modified_quermass(K, 0).value, modified_quermass(K, 1).value, 1e-8);
}

TEST(Quermass, WeightedVolumeAndS) {
  auto g2 = make_grid(2, 16);
  double r = std::log(2.0);
  SupportField B = support_of_ball(g2, origin(2), r);
  EXPECT_NEAR(weighted_volume(B), 4 * M_PI / 3 * std::pow(0.75, 3), 1e-12);
  EXPECT_NEAR(weighted_volume(B), 1.767146, 1e-6);
  EXPECT_NEAR(S_functional(B), std::sinh(r), 1e-12);
  for (auto g : {make_grid(1, 128), make_grid(2, 32)}) {
    int n = g->n();
    HPoint X = radial_point(n, {0.6, 0.8, 0}, 0.8);
    SupportField Bx = support_of_ball(g, X, 0.5);
    EXPECT_NEAR(S_functional(Bx), std::pow(X.h, 1.0 / (n + 1)) * std::sinh(0.5), 1e-9);
  }
}

TEST(Quermass, SteinerBalls) {
  for (auto g : {make_grid(1, 64), make_grid(2, 16)}) {
    SupportField B = support_of_ball(g, origin(g->n()), 0.6);
    SteinerResult s = steiner_check(B, 0.4);
    for (double v : s.residual) EXPECT_LE(v, 1e-8);
    EXPECT_LE(s.classical_k0, 1e-8);
    SteinerResult z = steiner_check(B, 0.0);
    for (double v : z.residual) EXPECT_EQ(v, 0.0);
    WeightedSteinerResult w = weighted_steiner_check(B, 0.5);
    EXPECT_LE(w.integral_form, 1e-8);
    EXPECT_LE(w.closed_form, 1e-8);
    WeightedSteinerResult w0 = weighted_steiner_check(B, 0.0);
    EXPECT_EQ(w0.integral_form, 0.0);
    EXPECT_EQ(w0.closed_form, 0.0);
  }
}

TEST(Quermass, SteinerPerturbed) {
  for (auto K : {perturbed_s1(make_grid(1, 128)), perturbed_s2(make_grid(2, 32))}) {
    SteinerResult s = steiner_check(K, 0.3);
    for (double v : s.residual) EXPECT_LE(v, 1e-6);
    EXPECT_LE(s.classical_k0, 1e-6);
    WeightedSteinerResult w = weighted_steiner_check(K, 0.5);
    EXPECT_LE(w.integral_form, 1e-6);
    EXPECT_LE(w.closed_form, 1e-6);
  }
  // Off-center ball: weighted Steiner holds without centering.
  auto g = make_grid(2, 32);
  WeightedSteinerResult w = weighted_steiner_check(support_of_ball(g, radial_point(2, {0, 0.6, 0.8}, 0.5), 0.4), 0.5);
  EXPECT_LE(w.integral_form, 1e-8);
  EXPECT_LE(w.closed_form, 1e-8);
}

TEST(Quermass, MinkowskiFormulas) {
  for (auto g : {make_grid(1, 64), make_grid(2, 16)}) {
    MinkowskiResiduals m = minkowski_formula_residuals(support_of_ball(g, origin(g->n()), 0.8));
    for (double v : m.classical) EXPECT_LE(v, 1e-9);
    for (double v : m.shifted) EXPECT_LE(v, 1e-9);
  }
  for (auto K : {perturbed_s1(make_grid(1, 128)), perturbed_s2(make_grid(2, 32)),
                 support_of_ball(make_grid(2, 32), radial_point(2, {1, 0, 0}, 0.6), 0.5)}) {
    MinkowskiResiduals m = minkowski_formula_residuals(K);
    for (double v : m.classical) EXPECT_LE(v, 1e-6);
    for (double v : m.shifted) EXPECT_LE(v, 1e-6);
  }
  EXPECT_THROW(minkowski_formula_residuals(support_of_point(make_grid(1, 32), origin(1))), DomainError);
}

TEST(Quermass, IsometryInvariance) {
  auto g = make_grid(2, 32);
  SupportField K = perturbed_s2(g);
  Isometry f = boost(2, 0, 0.25) * rotation(2, 1, 2, 0.6);
  SupportField fK = apply_isometry_field(K, f);
  for (int k = 0; k <= 2; ++k)
    EXPECT_NEAR(modified_quermass(fK, k).value, modified_quermass(K, k).value, 1e-6) << k;
  EXPECT_NEAR(curvature_integral(fK, 0), curvature_integral(K, 0), 1e-6);
  // Vol_w is not isometry invariant (weight cosh r is centered); a rotation keeps it.
  SupportField rK = apply_isometry_field(K, rotation(2, 0, 1, 0.9));
  EXPECT_NEAR(weighted_volume(rK), weighted_volume(K), 1e-6);
}

TEST(Quermass, InclusionMonotonicityProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  auto g = make_grid(1, 64);
  for (int trial = 0; trial < 10; ++trial) {
    HPoint C = radial_point(1, {0.6, 0.8, 0}, 0.5 * U(rng));
    double r = 0.2 + U(rng);
    SupportField K = support_of_ball(g, C, r);
    // L is the 1-sum of K with a random ball, which contains K.
    SupportField B = support_of_ball(g, radial_point(1, {1, 0, 0}, U(rng)), 0.1 + U(rng));
    SupportField L = p_sum(1.0, K, 1.0, 0.5 * U(rng), B).field;
    for (int k = 0; k <= 1; ++k) EXPECT_LE(modified_quermass(K, k).value, modified_quermass(L, k).value + 1e-8);
  }
}

TEST(Quermass, AFChainProperty) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-1, 1);
  auto g = make_grid(2, 16);
  for (int trial = 0; trial < 4; ++trial) {
    double a = 0.06 * U(rng), b = 0.06 * U(rng), c = 0.04 * U(rng);
    SupportField K = make_field(g, sample(*g, [&](const Dir& z) {
                                  return 2.0 + a * (3 * z[2] * z[2] - 1) + b * z[0] * z[1] + c * z[0];
                                }));
    ASSERT_EQ(convexity(K).cls, Convexity::Uniform);
    std::vector<double> W(3);
    for (int k = 0; k <= 2; ++k) W[k] = modified_quermass(K, k).value;
    for (int l = 0; l < 2; ++l)
      for (int k = l + 1; k <= 2; ++k) EXPECT_GE(W[k], I_k(2, k, I_k_inverse(2, l, W[l])) - 1e-8);
  }
}
