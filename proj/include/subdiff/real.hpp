#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <stdexcept>
#include <string>

namespace subdiff {

// Extended-precision real scalar. Hankel moment matrices have smallest
// eigenvalues that decay geometrically with the order, so all moment and
// factorization arithmetic runs at a configurable mantissa width (default
// 256 bits) and only final results are narrowed to double.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

inline constexpr unsigned kDefaultPrecisionBits = 256;
inline constexpr unsigned kMinPrecisionBits = 64;

// Process-global default precision, in bits of mantissa. Values capture the
// precision in effect when they are created; raising the default affects
// subsequently created values only.
unsigned precision_bits();
void set_precision_bits(unsigned bits);

// Restores the previous default precision on scope exit.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits) : saved_(precision_bits()) {
    set_precision_bits(bits);
  }
  ~ScopedPrecision() { set_precision_bits(saved_); }
  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

inline double to_double(const Real& x) { return x.convert_to<double>(); }

Real real_pi();             // pi at the current precision
Real factorial(int n);      // n! as a Real
Real double_factorial(int n);  // n!! (with (-1)!! = 0!! = 1)

// Error taxonomy shared across modules; the CLI maps these onto distinct
// exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace subdiff
