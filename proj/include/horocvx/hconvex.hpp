#pragma once

#include <array>
#include <string>
#include <vector>

#include "horocvx/grid.hpp"
#include "horocvx/lorentz.hpp"

namespace horocvx {

// phi = e^u on a sphere grid.
struct SupportField {
  GridPtr grid;
  ScalarField phi;

  int n() const { return grid->n(); }
  std::size_t size() const { return phi.size(); }
};

SupportField make_field(GridPtr grid, ScalarField phi);
void require_same_grid(const SupportField& a, const SupportField& b);

SupportField support_of_point(GridPtr grid, const HPoint& X);
SupportField support_of_ball(GridPtr grid, const HPoint& X, double r);

// A[phi] from pointwise data, in the orthonormal frame.
Sym2 a_pointwise(int n, double phi, const Vec2& grad, const Sym2& hess);
std::array<double, 2> eigenvalues(int n, const Sym2& s);
double det(int n, const Sym2& s);
double trace(int n, const Sym2& s);

// Normalized elementary symmetric functions of the eigenvalues, p_0 = 1.
double p_elem(int n, int m, const Sym2& s);
double sigma_elem(int n, int m, const Sym2& s);
double p_elem(int n, int m, const std::array<double, 2>& lam);
double sigma_elem(int n, int m, const std::array<double, 2>& lam);

struct ATensorField {
  SymField a;
  std::vector<double> min_eig;
  std::vector<double> max_eig;
};

// Derivatives of phi and A[phi] at every node.
struct FieldGeometry {
  VecField grad;
  SymField hess;
  ATensorField A;
};

FieldGeometry analyze(const SupportField& K);
ATensorField a_tensor(const SupportField& K);

enum class Convexity { Uniform, Weak, Not };
std::string to_string(Convexity c);

struct ConvexityReport {
  Convexity cls = Convexity::Not;
  double min_eig = 0.0;
  std::size_t worst_node = 0;
};

double default_convexity_tol(const SupportField& K);
ConvexityReport convexity(const SupportField& K, double tol);
ConvexityReport convexity(const SupportField& K);

struct BoundaryData {
  std::vector<HPoint> X;
  std::vector<LorentzVec> nu;
  std::vector<double> coshr;
  std::vector<double> u_tilde;
  std::vector<std::array<double, 2>> lambda_tilde;
  std::vector<double> area_density;
};

BoundaryData boundary_data(const SupportField& K);
BoundaryData boundary_data(const SupportField& K, const FieldGeometry& geo);

// Pointwise coshr = |Dphi|^2/(2phi) + (phi + 1/phi)/2.
double coshr_pointwise(int n, double phi, const Vec2& grad);

// max |Dphi| / phi over the nodes.
double max_grad_ratio(const SupportField& K, const FieldGeometry& geo);

SupportField apply_isometry_field(const SupportField& K, const Isometry& f);

}  // namespace horocvx
