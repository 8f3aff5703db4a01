#include "horocvx/euclid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "horocvx/util.hpp"

namespace horocvx {

namespace {

SymField shifted_hessian(const EuclideanSupport& K) {
  SymField H = hessian(*K.grid, K.u);
  for (std::size_t i = 0; i < H.size(); ++i) {
    H[i].xx += K.u[i];
    H[i].yy += K.u[i];
  }
  return H;
}

void require_admissible(const EuclideanSupport& K) {
  for (double v : K.u)
    if (!(v > 0)) throw InvalidArgument("Euclidean support must be positive");
  if (euclid_min_eig(K) <= 0) throw DomainError("Euclidean support is not admissible");
}

}  // namespace

double euclid_min_eig(const EuclideanSupport& K) {
  const int n = K.grid->n();
  double m = std::numeric_limits<double>::infinity();
  for (const Sym2& s : shifted_hessian(K)) m = std::min(m, eigenvalues(n, s)[0]);
  return m;
}

EuclideanSupport project(const SupportField& K) { return {K.grid, K.phi}; }

EuclideanSupport firey_sum(double a, const EuclideanSupport& K, double p, double b, const EuclideanSupport& L) {
  if (!K.grid->same_as(*L.grid)) throw InvalidArgument("Euclidean supports on different grids");
  if (p < 1) throw InvalidArgument("Firey sum requires p >= 1");
  if (a < 0 || b < 0) throw InvalidArgument("Firey sum coefficients must be nonnegative");
  EuclideanSupport out{K.grid, ScalarField(K.u.size())};
  // Same expression as the hyperbolic p-sum, so the bridge commutes bit for bit.
  for (std::size_t i = 0; i < K.u.size(); ++i)
    out.u[i] = std::pow(a * std::pow(K.u[i], p) + b * std::pow(L.u[i], p), 1.0 / p);
  return out;
}

double commute_check(double a, const SupportField& K, double p, double b, const SupportField& L) {
  if (p < 1) throw InvalidArgument("commute check requires p >= 1");
  require_same_grid(K, L);
  ScalarField hyp(K.size());
  for (std::size_t i = 0; i < K.size(); ++i)
    hyp[i] = std::pow(a * std::pow(K.phi[i], p) + b * std::pow(L.phi[i], p), 1.0 / p);
  EuclideanSupport lhs = project(make_field(K.grid, std::move(hyp)));
  EuclideanSupport rhs = firey_sum(a, project(K), p, b, project(L));
  double d = 0;
  for (std::size_t i = 0; i < K.size(); ++i) d = std::max(d, std::abs(lhs.u[i] - rhs.u[i]));
  return d;
}

double euclid_mixed_volume_p(const EuclideanSupport& K, const EuclideanSupport& L, double p) {
  if (!K.grid->same_as(*L.grid)) throw InvalidArgument("Euclidean supports on different grids");
  require_admissible(K);
  const int n = K.grid->n();
  SymField H = shifted_hessian(K);
  ScalarField f(K.u.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::pow(L.u[i], p) * std::pow(K.u[i], 1.0 - p) * det(n, H[i]);
  return K.grid->integrate(f) / (n + 1);
}

double euclid_volume(const EuclideanSupport& K) { return euclid_mixed_volume_p(K, K, 1.0); }

BridgeValue V_p_functional(const SupportField& K, const SupportField& L, double p) {
  require_same_grid(K, L);
  if (convexity(K).cls != Convexity::Uniform) throw DomainError("V_p requires uniform h-convexity");
  const int n = K.n();
  BridgeValue r;
  r.value = euclid_mixed_volume_p(project(K), project(L), p);
  // Boundary form with kappa_i = 1 + 1/lambda~_i.
  BoundaryData bd = boundary_data(K);
  ScalarField f(K.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    double prod = 1;
    for (int j = 0; j < n; ++j) prod *= bd.coshr[i] * (1.0 + 1.0 / bd.lambda_tilde[i][j]) - bd.u_tilde[i];
    double w = bd.coshr[i] - bd.u_tilde[i];
    f[i] = std::pow(L.phi[i], p) * prod / std::pow(w, n + 1 - p) * bd.area_density[i];
  }
  r.hyperbolic = K.grid->integrate(f) / (n + 1);
  r.cross_residual = std::abs(r.value - r.hyperbolic);
  return r;
}

BridgeValue V_functional(const SupportField& K) { return V_p_functional(K, K, 0.0); }

}  // namespace horocvx
