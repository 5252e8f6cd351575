#pragma once

namespace fvddp {

// Neumaier-compensated accumulator; used wherever weight totals feed a
// normalization so that sums stay accurate independently of table size.
class StableSum {
 public:
  StableSum() = default;
  explicit StableSum(double init) : sum_(init) {}

  void add(double x) {
    double t = sum_ + x;
    double z = t - sum_;
    c_ += (sum_ - (t - z)) + (x - z);
    sum_ = t;
  }

  double get() const { return sum_ + c_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

}  // namespace fvddp
