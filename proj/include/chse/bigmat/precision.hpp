#pragma once

#include <string>

namespace chse {

enum class PrecisionMode { hardware_double, big_float };

// Selects the arithmetic every matrix of a computation runs at. Matrices
// built under different policies never mix.
struct PrecisionPolicy {
  PrecisionMode mode = PrecisionMode::hardware_double;
  unsigned bits = 53;  // significand bits; fixed to 53 in double mode

  static PrecisionPolicy hardware_double() { return {PrecisionMode::hardware_double, 53}; }
  static PrecisionPolicy big_float(unsigned bits);

  bool is_big() const { return mode == PrecisionMode::big_float; }
  // Unit roundoff 2^(1-bits), as a double (underflows to 0 beyond ~1070 bits;
  // use BigFloat ulp helpers when that matters).
  double ulp() const;
  std::string describe() const;

  friend bool operator==(const PrecisionPolicy&, const PrecisionPolicy&) = default;
};

}  // namespace chse
