#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace horocvx {

class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Compensated accumulator. Order of add() calls fixes the result bit-for-bit.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

double binomial(int n, int k);

// Surface area of the unit n-sphere (n = 1, 2).
double sphere_area(int n);

// Worker count from HOROCVX_THREADS, default 1.
int worker_count();

// Runs body(i) for i in [0, count). Bodies must write disjoint outputs.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace horocvx
