#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace horocvx {

using ScalarField = std::vector<double>;
using Dir = std::array<double, 3>;  // unit direction; third entry unused on S^1

// Components in the orthonormal frame at a node. On S^1 only `a` is used.
struct Vec2 {
  double a = 0.0;
  double b = 0.0;
};

// Symmetric 2x2 in the orthonormal frame. On S^1 only `xx` is used.
struct Sym2 {
  double xx = 0.0;
  double xy = 0.0;
  double yy = 0.0;
};

using VecField = std::vector<Vec2>;
using SymField = std::vector<Sym2>;

class Grid;
using GridPtr = std::shared_ptr<const Grid>;

class Grid {
 public:
  // n=1: resolution is the node count N (even).
  // n=2: resolution is the polar count L; azimuth count is 2L.
  static GridPtr make(int n, int resolution);

  int n() const { return n_; }
  std::size_t size() const { return nodes_.size(); }
  int resolution() const { return res_; }
  int polar() const { return n_ == 2 ? res_ : 0; }
  int azimuth() const { return n_ == 2 ? 2 * res_ : 0; }
  int band_limit() const { return n_ == 1 ? res_ / 2 - 1 : res_ - 1; }
  const std::vector<Dir>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<std::size_t>& antipodal_index() const { return anti_; }

  // Orthonormal tangent frame (e1, e2) at node i as ambient vectors.
  // e1 = d/dtheta; e2 = (1/sin theta) d/dphi on S^2.
  const Dir& frame1(std::size_t i) const { return e1_[i]; }
  const Dir& frame2(std::size_t i) const { return e2_[i]; }

  double integrate(const ScalarField& f) const;
  void derivatives(const ScalarField& f, VecField* grad, SymField* hess) const;
  std::vector<double> resample(const ScalarField& f, const std::vector<Dir>& targets) const;
  // Projection onto the resolvable band (identity for band-limited input).
  ScalarField band_project(const ScalarField& f) const;

  std::string describe() const;  // "s1:N" or "s2:LxM"
  bool same_as(const Grid& other) const { return n_ == other.n_ && res_ == other.res_; }

  // Polar angle / azimuth / x = cos(theta) of S^2 node indices (row-major, polar-major).
  double theta(std::size_t ring) const { return theta_[ring]; }

 private:
  Grid() = default;
  void build_s1();
  void build_s2();

  // Per-ring azimuthal cos/sin coefficients, m = 0..L-1.
  void ring_transform(const ScalarField& f, std::vector<double>& c, std::vector<double>& s) const;

  int n_ = 1;
  int res_ = 0;
  std::vector<Dir> nodes_;
  std::vector<double> weights_;
  std::vector<std::size_t> anti_;
  std::vector<Dir> e1_, e2_;

  // S^1 spectral differentiation matrices (row-major N x N).
  std::vector<double> d1_, d2_;

  // S^2 data.
  std::vector<double> theta_, x_, glw_, azim_, cos_, sin_;
  // For each m: L x L operators acting on ring values of the m-th coefficient.
  std::vector<std::vector<double>> proj_, dth_, dthth_;
  // Normalized associated Legendre values, plm_[m][l*L + j] = Pbar_l^m(x_j), l >= m.
  std::vector<std::vector<double>> plm_;
};

GridPtr make_grid(int n, int resolution);

void check_size(const Grid& g, const ScalarField& f);

double integrate(const Grid& g, const ScalarField& f);
VecField gradient(const Grid& g, const ScalarField& f);
SymField hessian(const Grid& g, const ScalarField& f);
ScalarField antipodal(const Grid& g, const ScalarField& f);
double even_error(const Grid& g, const ScalarField& f);
ScalarField even_project(const Grid& g, const ScalarField& f);
std::vector<double> resample(const Grid& g, const ScalarField& f, const std::vector<Dir>& targets);

// Builds a field from a function of the node direction.
template <class F>
ScalarField sample(const Grid& g, F&& fn) {
  ScalarField out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = fn(g.nodes()[i]);
  return out;
}

// Ambient gradient vector sum_a grad_a e_a at node i.
Dir ambient_gradient(const Grid& g, std::size_t i, const Vec2& grad);

}  // namespace horocvx
