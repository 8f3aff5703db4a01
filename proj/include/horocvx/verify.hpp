#pragma once

#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "horocvx/hconvex.hpp"

namespace horocvx {

enum class Expect {
  Inequality,  // gap >= -tol * scale
  Equality,    // additionally |gap| <= eq_tol * scale
  Negative,    // gap < 0 is the certified outcome
};

struct CheckRecord {
  std::string suite;
  std::string case_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // lhs - rhs
  Expect expect = Expect::Inequality;
  bool asserted = true;  // false for exploratory (conjectured) records
  bool pass = false;

  bool equality_expected() const { return expect == Expect::Equality; }
};

struct SuiteOptions {
  double tol = 1e-8;
  double eq_tol = 1e-6;
  bool exploratory = false;
  unsigned long long seed = 20240601;
  int s1_nodes = 128;
  int s2_polar = 24;
};

// Tolerance scale max(1, |lhs|, |rhs|).
double record_scale(const CheckRecord& r);
// Fills gap and pass from lhs, rhs, expect.
void finalize(CheckRecord& r, const SuiteOptions& opt);

const std::vector<std::string>& suite_names();
// "all" runs every suite in suite_names() order.
std::vector<CheckRecord> run_suite(const std::string& name, const SuiteOptions& opt = {});

// True when every asserted record passes.
bool all_pass(const std::vector<CheckRecord>& records);

// CSV header: suite,case,lhs,rhs,gap,equality_expected,pass.
void write_records_csv(std::ostream& os, const std::vector<CheckRecord>& records);
std::vector<CheckRecord> read_records_csv(std::istream& is);
void print_table(std::ostream& os, const std::vector<CheckRecord>& records);

// Random uniformly h-convex field around a ball of radius ~ log 2; low-degree perturbation.
SupportField random_hconvex_field(GridPtr grid, std::mt19937_64& rng, bool even);

struct CorpusField {
  std::string id;
  SupportField field;
  bool ball = false;         // geodesic ball
  bool origin_ball = false;  // geodesic ball centered at the origin
};

// Deterministic corpus: origin balls, off-center balls, and perturbed balls (all contain the origin).
std::vector<CorpusField> corpus(GridPtr grid, unsigned long long seed);

// S(B(X, r)) = x_{n+1}^{1/(n+1)} sinh r; f(S) = S + sqrt(S^2 + 1).
double counterexample_gap(int n, double x_height);

}  // namespace horocvx
