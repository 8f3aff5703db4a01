#include "horocvx/psum.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "horocvx/util.hpp"

namespace horocvx {

PSumResult p_sum(double a, const SupportField& K, double p, double b, const SupportField& L) {
  if (a < 0 || b < 0) throw InvalidArgument("p-sum coefficients must be nonnegative");
  if (a + b < 1.0) throw InvalidArgument("p-sum requires a + b >= 1");
  if (p < 0.5 || p > 2.0) throw InvalidArgument("p-sum requires p in [1/2, 2]");
  require_same_grid(K, L);
  if (convexity(K).cls == Convexity::Not || convexity(L).cls == Convexity::Not)
    throw InvalidArgument("p-sum inputs must be h-convex");
  ScalarField phi(K.size());
  for (std::size_t i = 0; i < K.size(); ++i)
    phi[i] = std::pow(a * std::pow(K.phi[i], p) + b * std::pow(L.phi[i], p), 1.0 / p);
  PSumResult res{make_field(K.grid, std::move(phi)), {}, false};
  res.convexity = convexity(res.field);
  res.degenerate_config = (p == 0.5 || p == 2.0 || a + b == 1.0);
  return res;
}

SupportField p_dilate(double a, double p, const SupportField& K) {
  if (a < 1.0) throw InvalidArgument("p-dilation requires a >= 1");
  if (p <= 0) throw InvalidArgument("p-dilation requires p > 0");
  double s = std::pow(a, 1.0 / p);
  ScalarField phi = K.phi;
  for (double& v : phi) v *= s;
  return make_field(K.grid, std::move(phi));
}

TwoPointBall two_point_ball(double p, double t, double a, const HPoint& X, double b, const HPoint& Y) {
  if (p <= 0) throw InvalidArgument("two-point ball requires p > 0");
  if (t < 0 || t > 1) throw InvalidArgument("t must lie in [0, 1]");
  validate_hpoint(X);
  validate_hpoint(Y);
  double cx, cy;
  if (p == 1.0) {
    cx = a;
    cy = b;
  } else {
    double invq = 1.0 - 1.0 / p;
    cx = std::pow(1.0 - t, invq) * std::pow(a, 1.0 / p);
    cy = std::pow(t, invq) * std::pow(b, 1.0 / p);
  }
  TwoPointBall out;
  out.T = cx * X + cy * Y;
  double q = -inner(out.T, out.T);
  out.R = q > 0 ? std::sqrt(q) : 0.0;
  if (!std::isfinite(out.R)) {
    out.radius = std::numeric_limits<double>::infinity();
    out.center = X;
    return out;
  }
  if (out.R < 1.0 || out.T.h <= 0) {
    out.empty = true;
    out.center = X;
    return out;
  }
  out.center = (1.0 / out.R) * out.T;
  out.radius = std::log(out.R);
  return out;
}

SupportField two_point_sum(GridPtr grid, double p, double a, const HPoint& X, double b, const HPoint& Y) {
  if (a < 0 || b < 0) throw InvalidArgument("coefficients must be nonnegative");
  if (a + b < 1.0) throw InvalidArgument("two-point sum requires a + b >= 1");
  if (p < 0.5 || p > 2.0) throw InvalidArgument("two-point sum requires p in [1/2, 2]");
  SupportField fx = support_of_point(grid, X);
  SupportField fy = support_of_point(grid, Y);
  ScalarField phi(fx.size());
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = std::pow(a * std::pow(fx.phi[i], p) + b * std::pow(fy.phi[i], p), 1.0 / p);
  return make_field(std::move(grid), std::move(phi));
}

double compatibility_check(double p, double a, const HPoint& X, double b, const HPoint& Y, int samples,
                           GridPtr boundary_grid) {
  if (samples < 2) throw InvalidArgument("need at least two t samples");
  const int n = X.n;
  if (!boundary_grid) boundary_grid = make_grid(n, n == 1 ? 128 : 24);
  SupportField S = two_point_sum(boundary_grid, p, a, X, b, Y);
  BoundaryData bd = boundary_data(S);
  const double inf = std::numeric_limits<double>::infinity();

  // Signed excess of W over the ball at parameter t; +inf marks an empty ball.
  auto excess = [&](const HPoint& W, double t) {
    TwoPointBall B = two_point_ball(p, t, a, X, b, Y);
    if (B.empty) return inf;
    if (!std::isfinite(B.radius)) return -inf;
    return geodesic_distance(W, B.center) - B.radius;
  };

  double worst = 0.0;
  for (const HPoint& W0 : bd.X) {
    HPoint W = normalize_to_hyperboloid(W0);
    double defect;
    if (p == 1.0) {
      defect = std::abs(excess(W, 0.0));
    } else {
      // p > 1: W must lie on the boundary of the union, min_t excess = 0.
      // p < 1: boundary of the intersection, max_t excess = 0.
      const double sgn = p > 1.0 ? 1.0 : -1.0;
      auto obj = [&](double t) {
        double e = excess(W, t);
        if (p < 1.0 && e == -inf) return inf;  // whole-space ball: no constraint
        return sgn * e;
      };
      int best = -1;
      double bestv = inf;
      for (int i = 0; i < samples; ++i) {
        double t = p > 1.0 ? double(i) / (samples - 1) : (i + 0.5) / samples;
        double v = obj(t);
        if (v < bestv) {
          bestv = v;
          best = i;
        }
      }
      if (!std::isfinite(bestv)) return inf;
      double lo = p > 1.0 ? double(std::max(best - 1, 0)) / (samples - 1) : (std::max(best - 1, 0) + 0.5) / samples;
      double hi = p > 1.0 ? double(std::min(best + 1, samples - 1)) / (samples - 1)
                          : (std::min(best + 1, samples - 1) + 0.5) / samples;
      auto r = boost::math::tools::brent_find_minima(obj, lo, hi, 40);
      defect = std::abs(std::min(bestv, r.second));
    }
    worst = std::max(worst, defect);
  }
  return worst;
}

DilateReport dilates_check(const SupportField& K, const SupportField& L) {
  require_same_grid(K, L);
  KahanSum s;
  for (std::size_t i = 0; i < K.size(); ++i) s.add(L.phi[i] / K.phi[i]);
  double mean = s.value() / K.size();
  double var = 0;
  for (std::size_t i = 0; i < K.size(); ++i) var = std::max(var, std::abs(L.phi[i] / K.phi[i] - mean));
  DilateReport rep;
  rep.ratio_variation = var / mean;
  rep.is_dilate = rep.ratio_variation <= 1e-8;
  return rep;
}

}  // namespace horocvx
