#include "cflab/arith.hpp"

#include <algorithm>
#include <cmath>

namespace cflab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::dimension_mismatch: return "dimension-mismatch";
    case ErrorKind::unsupported_shape: return "unsupported-shape";
    case ErrorKind::out_of_range: return "out-of-range";
    case ErrorKind::too_large: return "too-large";
    case ErrorKind::inconclusive_depth: return "inconclusive-depth";
    case ErrorKind::thinning_failed: return "thinning-failed";
    case ErrorKind::degenerate: return "structurally-degenerate";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::parse: return "parse";
  }
  return "error";
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

double to_double(const Rational& v) {
  // mpq_get_d truncates but never overflows for the magnitudes used here
  // unless numerator/denominator exceed double range; go through log scale then.
  long exp_num = 0, exp_den = 0;
  double n = mpz_get_d_2exp(&exp_num, v.get_num_mpz_t());
  double d = mpz_get_d_2exp(&exp_den, v.get_den_mpz_t());
  if (n == 0.0) return 0.0;
  return std::ldexp(n / d, static_cast<int>(exp_num - exp_den));
}

Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw Error(ErrorKind::invalid_argument, "bad rational: " + text);
  if (r.get_den() == 0) throw Error(ErrorKind::invalid_argument, "zero denominator: " + text);
  r.canonicalize();
  return r;
}

CertifiedValue::CertifiedValue(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) throw Error(ErrorKind::invalid_argument, "interval with lo > hi");
}

std::string CertifiedValue::str() const {
  if (exact()) return to_string(lo);
  return "[" + to_string(lo) + ", " + to_string(hi) + "]";
}

CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lo + b.lo, a.hi + b.hi};
}

CertifiedValue operator*(const CertifiedValue& a, const Rational& s) {
  return {a.lo * s, a.hi * s};
}

CertifiedValue mul_nonneg(const CertifiedValue& a, const CertifiedValue& b) {
  return {a.lo * b.lo, a.hi * b.hi};
}

CertifiedValue div_nonneg(const CertifiedValue& num, const CertifiedValue& den) {
  if (den.lo <= 0) throw Error(ErrorKind::inconclusive_depth, "denominator interval reaches 0");
  return {num.lo / den.hi, num.hi / den.lo};
}

CertifiedValue hull(const CertifiedValue& a, const CertifiedValue& b) {
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace cflab
