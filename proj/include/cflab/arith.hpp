#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace cflab {

using Int = mpz_class;
using Rational = mpq_class;

enum class ErrorKind {
  invalid_argument,
  dimension_mismatch,
  unsupported_shape,
  out_of_range,
  too_large,
  inconclusive_depth,
  thinning_failed,
  degenerate,
  precondition,
  parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind);

std::string to_string(const Int& v);
// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& v);
double to_double(const Rational& v);
Rational parse_rational(const std::string& text);

inline Rational make_rational(const Int& num, const Int& den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

// Closed rational interval [lo, hi].
struct CertifiedValue {
  Rational lo;
  Rational hi;

  CertifiedValue() = default;
  CertifiedValue(Rational l, Rational h);
  static CertifiedValue point(const Rational& v) { return {v, v}; }

  bool exact() const { return lo == hi; }
  Rational width() const { return hi - lo; }
  Rational mid() const { return (lo + hi) / 2; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool contains(const CertifiedValue& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const CertifiedValue& o) const { return lo <= o.hi && o.lo <= hi; }
  std::string str() const;

  friend bool operator==(const CertifiedValue& a, const CertifiedValue& b) {
    return a.lo == b.lo && a.hi == b.hi;
  }
};

CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b);
CertifiedValue operator*(const CertifiedValue& a, const Rational& s);  // s >= 0
// Product of intervals with nonnegative endpoints.
CertifiedValue mul_nonneg(const CertifiedValue& a, const CertifiedValue& b);
// Quotient of intervals with nonnegative endpoints; den.lo must be positive.
CertifiedValue div_nonneg(const CertifiedValue& num, const CertifiedValue& den);
CertifiedValue hull(const CertifiedValue& a, const CertifiedValue& b);

}  // namespace cflab
