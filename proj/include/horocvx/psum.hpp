#pragma once

#include "horocvx/hconvex.hpp"
#include "horocvx/lorentz.hpp"

namespace horocvx {

struct TwoPointBall {
  HPoint center;
  double radius = 0.0;
  bool empty = false;
  LorentzVec T;  // unnormalized Lorentz combination, R = N(T)
  double R = 0.0;
};

struct PSumResult {
  SupportField field;
  ConvexityReport convexity;
  bool degenerate_config = false;  // configuration where A may have a kernel
};

PSumResult p_sum(double a, const SupportField& K, double p, double b, const SupportField& L);
SupportField p_dilate(double a, double p, const SupportField& K);

TwoPointBall two_point_ball(double p, double t, double a, const HPoint& X, double b, const HPoint& Y);
SupportField two_point_sum(GridPtr grid, double p, double a, const HPoint& X, double b, const HPoint& Y);

// Worst distance defect of boundary points of the support-form two-point sum
// against the pointwise union/intersection of balls, over `samples` values of t.
double compatibility_check(double p, double a, const HPoint& X, double b, const HPoint& Y, int samples,
                           GridPtr boundary_grid = nullptr);

struct DilateReport {
  bool is_dilate = false;
  double ratio_variation = 0.0;
};

DilateReport dilates_check(const SupportField& K, const SupportField& L);

}  // namespace horocvx
