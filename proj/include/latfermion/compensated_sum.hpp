#pragma once

#include <cmath>
#include <complex>

namespace latfermion {

namespace detail {

// Neumaier's variant of Kahan summation: also correct when the addend is
// larger in magnitude than the running sum.
inline void neumaier_add(double& sum, double& compensation, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    compensation += (sum - t) + x;
  } else {
    compensation += (x - t) + sum;
  }
  sum = t;
}

}  // namespace detail

template <class T>
class CompensatedSum;

template <>
class CompensatedSum<double> {
 public:
  void add(double x) { detail::neumaier_add(sum_, compensation_, x); }
  CompensatedSum& operator+=(double x) {
    add(x);
    return *this;
  }
  [[nodiscard]] double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

template <>
class CompensatedSum<std::complex<double>> {
 public:
  void add(std::complex<double> x) {
    re_.add(x.real());
    im_.add(x.imag());
  }
  CompensatedSum& operator+=(std::complex<double> x) {
    add(x);
    return *this;
  }
  [[nodiscard]] std::complex<double> value() const {
    return {re_.value(), im_.value()};
  }

 private:
  CompensatedSum<double> re_;
  CompensatedSum<double> im_;
};

}  // namespace latfermion
