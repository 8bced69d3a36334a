#ifndef NCRW_SRC_SUMMATION_HPP
#define NCRW_SRC_SUMMATION_HPP

#include <cmath>

namespace ncrw::detail {

// Neumaier's variant of Kahan summation.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) noexcept {
    add(v);
    return *this;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace ncrw::detail

#endif  // NCRW_SRC_SUMMATION_HPP
