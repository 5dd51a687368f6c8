#include "bayestomo/scaled_value.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace bayestomo {

ScaledValue::ScaledValue(Complex value) : mantissa_(value) { normalize(); }

ScaledValue::ScaledValue(Complex mantissa, double log_scale)
    : mantissa_(mantissa), log_scale_(log_scale) {
  normalize();
}

ScaledValue ScaledValue::from_log(double log_magnitude) {
  if (std::isinf(log_magnitude) && log_magnitude < 0) return zero();
  return ScaledValue(Complex(1.0, 0.0), log_magnitude);
}

void ScaledValue::normalize() {
  const double mag = std::abs(mantissa_);
  if (mag == 0.0 || !std::isfinite(log_scale_)) {
    if (mag == 0.0) {
      mantissa_ = Complex(0.0, 0.0);
      log_scale_ = 0.0;
    }
    return;
  }
  if (!std::isfinite(mag)) {
    // Only reachable with non-finite input; keep it visible downstream.
    return;
  }
  const double shift = std::floor(std::log(mag));
  if (shift != 0.0) {
    mantissa_ *= std::exp(-shift);
    log_scale_ += shift;
  }
  // Rounding near the interval edges.
  const double m = std::abs(mantissa_);
  if (m < 1.0) {
    mantissa_ *= std::exp(1.0);
    log_scale_ -= 1.0;
  } else if (m >= std::exp(1.0)) {
    mantissa_ *= std::exp(-1.0);
    log_scale_ += 1.0;
  }
}

double ScaledValue::log_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  return std::log(std::abs(mantissa_)) + log_scale_;
}

Complex ScaledValue::to_complex() const {
  if (is_zero()) return Complex(0.0, 0.0);
  return mantissa_ * std::exp(log_scale_);
}

ScaledValue& ScaledValue::operator*=(const ScaledValue& other) {
  if (is_zero() || other.is_zero()) {
    *this = zero();
    return *this;
  }
  mantissa_ *= other.mantissa_;
  log_scale_ += other.log_scale_;
  normalize();
  return *this;
}

ScaledValue& ScaledValue::operator/=(const ScaledValue& other) {
  if (other.is_zero()) {
    mantissa_ /= Complex(0.0, 0.0);
    return *this;
  }
  if (is_zero()) return *this;
  mantissa_ /= other.mantissa_;
  log_scale_ -= other.log_scale_;
  normalize();
  return *this;
}

ScaledValue& ScaledValue::operator+=(const ScaledValue& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) {
    *this = other;
    return *this;
  }
  if (log_scale_ >= other.log_scale_) {
    mantissa_ += other.mantissa_ * std::exp(other.log_scale_ - log_scale_);
  } else {
    mantissa_ = mantissa_ * std::exp(log_scale_ - other.log_scale_) + other.mantissa_;
    log_scale_ = other.log_scale_;
  }
  normalize();
  return *this;
}

ScaledValue& ScaledValue::operator-=(const ScaledValue& other) { return *this += -other; }

Complex ratio(const ScaledValue& a, const ScaledValue& b) {
  if (a.is_zero()) return Complex(0.0, 0.0);
  return (a.mantissa() / b.mantissa()) * std::exp(a.log_scale() - b.log_scale());
}

double relative_difference(const ScaledValue& a, const ScaledValue& b) {
  if (a.is_zero() && b.is_zero()) return 0.0;
  const ScaledValue diff = a - b;
  if (diff.is_zero()) return 0.0;
  const double ref = std::max(a.log_abs(), b.log_abs());
  return std::exp(diff.log_abs() - ref);
}

std::string to_string(const ScaledValue& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(" << v.mantissa().real() << (v.mantissa().imag() < 0 ? "" : "+") << v.mantissa().imag()
     << "i)*exp(" << v.log_scale() << ")";
  return os.str();
}

}  // namespace bayestomo
