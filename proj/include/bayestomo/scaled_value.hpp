#pragma once

#include <complex>
#include <string>

namespace bayestomo {

using Complex = std::complex<double>;

// A complex number stored as mantissa * exp(log_scale). Permanents of Gram
// matrices grow factorially with the number of rows; this keeps products and
// ratios of them representable.
//
// Invariant: |mantissa| is in [1, e) or mantissa == 0 (log_scale == 0 then).
class ScaledValue {
 public:
  ScaledValue() = default;
  ScaledValue(Complex value);  // NOLINT(google-explicit-constructor)
  ScaledValue(Complex mantissa, double log_scale);

  static ScaledValue zero() { return ScaledValue(); }
  static ScaledValue one() { return ScaledValue(Complex(1.0, 0.0)); }
  // exp(log_magnitude) as a positive real.
  static ScaledValue from_log(double log_magnitude);

  const Complex& mantissa() const noexcept { return mantissa_; }
  double log_scale() const noexcept { return log_scale_; }
  bool is_zero() const noexcept { return mantissa_ == Complex(0.0, 0.0); }

  // Natural log of |value|; -inf for zero.
  double log_abs() const;
  // Plain complex value; may overflow to inf or underflow to 0.
  Complex to_complex() const;

  ScaledValue& operator*=(const ScaledValue& other);
  ScaledValue& operator/=(const ScaledValue& other);
  ScaledValue& operator+=(const ScaledValue& other);
  ScaledValue& operator-=(const ScaledValue& other);

  friend ScaledValue operator*(ScaledValue a, const ScaledValue& b) { return a *= b; }
  friend ScaledValue operator/(ScaledValue a, const ScaledValue& b) { return a /= b; }
  friend ScaledValue operator+(ScaledValue a, const ScaledValue& b) { return a += b; }
  friend ScaledValue operator-(ScaledValue a, const ScaledValue& b) { return a -= b; }
  ScaledValue operator-() const { return ScaledValue(-mantissa_, log_scale_); }

  ScaledValue conj() const { return ScaledValue(std::conj(mantissa_), log_scale_); }

 private:
  void normalize();

  Complex mantissa_{0.0, 0.0};
  double log_scale_ = 0.0;
};

// a / b as a plain complex number, computed without forming a or b.
Complex ratio(const ScaledValue& a, const ScaledValue& b);

// |a - b| / max(|a|, |b|), computed in scaled form. Zero when both are zero.
double relative_difference(const ScaledValue& a, const ScaledValue& b);

std::string to_string(const ScaledValue& v);

}  // namespace bayestomo
