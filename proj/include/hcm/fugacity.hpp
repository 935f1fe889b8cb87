#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hcm/rational.hpp"

namespace hcm {

/// Positive weight parameter of the hard-core model. Keeps the exact rational
/// value when one was supplied, so downstream checks can run in exact arithmetic.
class Fugacity {
 public:
  explicit Fugacity(double value) : approx_(value) { check(); }
  explicit Fugacity(Rational value) : exact_(std::move(value)), approx_(to_double(*exact_)) {
    if (*exact_ <= 0) throw std::domain_error("fugacity must be positive, got " + to_string(*exact_));
    check();
  }

  /// "1/4", "0.05", "2" all parse exactly.
  static Fugacity parse(std::string_view text) { return Fugacity(parse_rational(text)); }

  double value() const noexcept { return approx_; }
  const std::optional<Rational>& exact() const noexcept { return exact_; }
  bool is_exact() const noexcept { return exact_.has_value(); }

  /// lambda / (1 + lambda): the occupation probability of an isolated vertex.
  double occupation_ceiling() const noexcept { return approx_ / (1.0 + approx_); }

  std::string str() const { return exact_ ? to_string(*exact_) : std::to_string(approx_); }

 private:
  void check() const {
    if (!(approx_ > 0.0) || !std::isfinite(approx_))
      throw std::domain_error("fugacity must be positive and finite, got " + std::to_string(approx_));
  }

  std::optional<Rational> exact_;
  double approx_;
};

}  // namespace hcm
