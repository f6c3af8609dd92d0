#pragma once

#include <optional>
#include <string>
#include <utility>

#include "qaffine/zpoly.hpp"

namespace qaffine {

// Element of Q(s) as num/den over Z[s].
// Canonical form: gcd(num, den) = 1 (polynomial part, integer contents and
// s-powers all included), den has positive leading coefficient, zero is 0/1.
// Equality is structural.
class QScalar {
public:
  QScalar() : den_(ZPoly(1)) {}
  explicit QScalar(long v) : num_(ZPoly(v)), den_(ZPoly(1)) {}
  explicit QScalar(const BigInt& v) : num_(ZPoly(v)), den_(ZPoly(1)) {}
  explicit QScalar(const BigRat& v)
      : num_(ZPoly(v.get_num())), den_(ZPoly(v.get_den())) {}

  QScalar(ZPoly num, ZPoly den) : num_(std::move(num)), den_(std::move(den)) {
    canonicalize();
  }

  static QScalar sPow(long k) {
    if (k >= 0) return QScalar(ZPoly::monomial(k, BigInt(1)), ZPoly(1));
    return QScalar(ZPoly(1), ZPoly::monomial(-k, BigInt(1)));
  }

  const ZPoly& num() const { return num_; }
  const ZPoly& den() const { return den_; }

  bool isZero() const { return num_.isZero(); }
  bool isOne() const { return num_.isOne() && den_.isOne(); }

  // (exponent, coefficient) when both num and den are monomials.
  std::optional<std::pair<long, BigRat>> asMonomial() const {
    if (isZero()) return std::make_pair(0L, BigRat(0));
    if (!num_.isMonomial() || !den_.isMonomial()) return std::nullopt;
    return std::make_pair(num_.terms()[0].first - den_.terms()[0].first,
                          makeRat(num_.terms()[0].second, den_.terms()[0].second));
  }

  std::optional<BigRat> asRational() const {
    if (!num_.isConstant() || !den_.isConstant()) return std::nullopt;
    if (isZero()) return BigRat(0);
    return makeRat(num_.terms()[0].second, den_.terms()[0].second);
  }

  friend bool operator==(const QScalar& a, const QScalar& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const QScalar& a, const QScalar& b) { return !(a == b); }

  friend QScalar operator-(const QScalar& a) {
    QScalar r = a;
    r.num_ = -r.num_;
    return r;
  }

  friend QScalar operator+(const QScalar& a, const QScalar& b) {
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    ZPoly g = gcdPoly(a.den_, b.den_);
    ZPoly a2 = divExact(a.den_, g);
    ZPoly b2 = divExact(b.den_, g);
    ZPoly num0 = a.num_ * b2 + b.num_ * a2;
    if (num0.isZero()) return QScalar();
    ZPoly h = gcdPoly(num0, g);
    QScalar r;
    if (h.isOne()) {
      r.num_ = std::move(num0);
      r.den_ = a.den_ * b2;
    } else {
      r.num_ = divExact(num0, h);
      r.den_ = divExact(g, h) * a2 * b2;
    }
    // Cross-reduced result is already in lowest terms with positive den lead.
    return r;
  }

  friend QScalar operator-(const QScalar& a, const QScalar& b) { return a + (-b); }

  friend QScalar operator*(const QScalar& a, const QScalar& b) {
    if (a.isZero() || b.isZero()) return QScalar();
    ZPoly g1 = gcdPoly(a.num_, b.den_);
    ZPoly g2 = gcdPoly(b.num_, a.den_);
    QScalar r;
    r.num_ = divExact(a.num_, g1) * divExact(b.num_, g2);
    r.den_ = divExact(a.den_, g2) * divExact(b.den_, g1);
    return r;
  }

  friend QScalar operator/(const QScalar& a, const QScalar& b) {
    return a * b.inverse();
  }

  QScalar& operator+=(const QScalar& o) { return *this = *this + o; }
  QScalar& operator-=(const QScalar& o) { return *this = *this - o; }
  QScalar& operator*=(const QScalar& o) { return *this = *this * o; }
  QScalar& operator/=(const QScalar& o) { return *this = *this / o; }

  QScalar inverse() const {
    check(!isZero(), "QScalar::inverse of zero");
    QScalar r;
    r.num_ = den_;
    r.den_ = num_;
    if (r.den_.leadingCoeff() < 0) {
      r.num_ = -r.num_;
      r.den_ = -r.den_;
    }
    return r;
  }

  QScalar pow(long k) const {
    if (k == 0) return QScalar(1L);
    QScalar base = k > 0 ? *this : inverse();
    unsigned long e = static_cast<unsigned long>(k > 0 ? k : -k);
    QScalar acc(1L);
    while (e > 0) {
      if (e & 1) acc *= base;
      base = (e >>= 1) > 0 ? base * base : base;
    }
    return acc;
  }

  BigRat specialize(const BigRat& s0) const {
    BigRat d = den_.evalAt(s0);
    check(d != 0, "QScalar::specialize: pole at s=" + toString(s0));
    return num_.evalAt(s0) / d;
  }

  std::string str() const { return num_.str() + "/" + den_.str(); }

  static QScalar parse(const std::string& text) {
    std::size_t slash = text.find('/');
    check(slash != std::string::npos, "QScalar::parse: missing '/' in '" + text + "'");
    check(text.find('/', slash + 1) == std::string::npos,
          "QScalar::parse: multiple '/' in '" + text + "'");
    QScalar r(ZPoly::parse(text.substr(0, slash)), ZPoly::parse(text.substr(slash + 1)));
    check(r.str() == text, "QScalar::parse: non-canonical input '" + text + "'");
    return r;
  }

private:
  void canonicalize() {
    check(!den_.isZero(), "QScalar: zero denominator");
    if (num_.isZero()) {
      den_ = ZPoly(1);
      return;
    }
    ZPoly g = gcdPoly(num_, den_);
    if (!g.isOne()) {
      num_ = divExact(num_, g);
      den_ = divExact(den_, g);
    }
    if (den_.leadingCoeff() < 0) {
      num_ = -num_;
      den_ = -den_;
    }
  }

  ZPoly num_;
  ZPoly den_;
};

// [n] at x = s^m: (x^n - x^-n)/(x - x^-1); [0] = 0, [-n] = -[n].
inline QScalar qIntPow(long n, long m) {
  check(m >= 1, "qIntPow: base exponent must be positive");
  if (n == 0) return QScalar();
  if (n < 0) return -qIntPow(-n, m);
  std::vector<ZPoly::Term> terms;
  for (long j = n - 1; j >= 0; --j) terms.emplace_back(2 * m * (n - 1 - j), BigInt(1));
  return QScalar(ZPoly::fromTerms(std::move(terms)),
                 ZPoly::monomial(m * (n - 1), BigInt(1)));
}

inline QScalar qFactPow(long n, long m) {
  check(n >= 0, "qFactPow: negative n");
  QScalar r(1L);
  for (long k = 2; k <= n; ++k) r *= qIntPow(k, m);
  return r;
}

inline QScalar qBinomPow(long n, long k, long m) {
  check(0 <= k && k <= n, "qBinomPow: k out of range");
  QScalar r(1L);
  for (long j = 1; j <= k; ++j) r *= qIntPow(n - k + j, m) / qIntPow(j, m);
  return r;
}

}  // namespace qaffine
