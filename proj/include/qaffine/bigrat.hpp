#pragma once

#include <gmpxx.h>

#include <string>

#include "qaffine/common.hpp"

namespace qaffine {

using BigInt = mpz_class;
using BigRat = mpq_class;

inline BigInt intGcd(const BigInt& a, const BigInt& b) {
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline BigInt intPow(const BigInt& base, unsigned long e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
  return r;
}

// Canonicalized num/den rational.
inline BigRat makeRat(const BigInt& num, const BigInt& den) {
  check(den != 0, "makeRat: zero denominator");
  BigRat r(num, den);
  r.canonicalize();
  return r;
}

inline BigRat ratPow(const BigRat& base, long e) {
  if (e == 0) return BigRat(1);
  BigInt n = base.get_num(), d = base.get_den();
  if (e < 0) {
    check(n != 0, "ratPow: zero to negative power");
    std::swap(n, d);
    e = -e;
  }
  return makeRat(intPow(n, static_cast<unsigned long>(e)),
                 intPow(d, static_cast<unsigned long>(e)));
}

inline std::string toString(const BigInt& v) { return v.get_str(); }
inline std::string toString(const BigRat& v) { return v.get_str(); }

inline BigInt parseBigInt(const std::string& text) {
  if (text.empty()) fail("parseBigInt: empty string");
  try {
    BigInt v(text);
    // mpz accepts whitespace and leading '+'; require canonical digits only.
    check(v.get_str() == text, "parseBigInt: non-canonical integer '" + text + "'");
    return v;
  } catch (const std::invalid_argument&) {
    fail("parseBigInt: invalid integer '" + text + "'");
  }
}

}  // namespace qaffine
