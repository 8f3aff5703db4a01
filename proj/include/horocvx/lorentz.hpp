#pragma once

#include <Eigen/Dense>
#include <array>

#include "horocvx/grid.hpp"

namespace horocvx {

// Vector of R^{n+1,1}: spatial part x (first n+1 entries of `x` used) and height.
struct LorentzVec {
  int n = 1;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  double h = 0.0;

  static LorentzVec make(int n, const Dir& spatial, double height);
  int dim() const { return n + 2; }
  double& operator[](int i) { return i <= n ? x[i] : h; }
  double operator[](int i) const { return i <= n ? x[i] : h; }
};

// Point of the hyperboloid <X,X> = -1, x_{n+1} >= 1.
using HPoint = LorentzVec;

LorentzVec operator+(const LorentzVec& a, const LorentzVec& b);
LorentzVec operator-(const LorentzVec& a, const LorentzVec& b);
LorentzVec operator*(double s, const LorentzVec& a);

double inner(const LorentzVec& a, const LorentzVec& b);
double spatial_dot(const LorentzVec& a, const Dir& z);

HPoint origin(int n);
// (sinh s * dir, cosh s) for a unit spatial direction.
HPoint radial_point(int n, const Dir& dir, double s);
void validate_hpoint(const LorentzVec& X, double tol = 1e-10);
bool is_hpoint(const LorentzVec& X, double tol = 1e-10);

double geodesic_distance(const HPoint& X, const HPoint& Y);

bool is_future_timelike(const LorentzVec& T);
double minkowski_norm(const LorentzVec& T);
HPoint normalize_to_hyperboloid(const LorentzVec& T);

using Isometry = Eigen::MatrixXd;  // (n+2) x (n+2), last coordinate is the height

Eigen::MatrixXd lorentz_form(int n);
bool is_isometry(const Isometry& f, double tol = 1e-10);
Isometry boost(int n, int axis, double rapidity);
Isometry rotation(int n, int axis_a, int axis_b, double angle);
HPoint apply_isometry(const Isometry& f, const HPoint& X);
LorentzVec apply_linear(const Eigen::MatrixXd& f, const LorentzVec& X);

}  // namespace horocvx
