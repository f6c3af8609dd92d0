#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaffine/bigrat.hpp"
#include "qaffine/common.hpp"

namespace qaffine {

// Integer-coefficient polynomial in s.
// Sparse term list: strictly ascending exponents (all >= 0), nonzero coefficients.
class ZPoly {
public:
  using Term = std::pair<long, BigInt>;

  ZPoly() = default;
  explicit ZPoly(const BigInt& c) {
    if (c != 0) terms_.emplace_back(0, c);
  }
  explicit ZPoly(long c) : ZPoly(BigInt(c)) {}

  static ZPoly monomial(long exp, BigInt coeff) {
    check(exp >= 0, "ZPoly::monomial: negative exponent");
    ZPoly p;
    if (coeff != 0) p.terms_.emplace_back(exp, std::move(coeff));
    return p;
  }

  static ZPoly fromTerms(std::vector<Term> terms) {
    ZPoly p;
    p.terms_ = std::move(terms);
    long prev = -1;
    for (const Term& t : p.terms_) {
      check(t.first > prev, "ZPoly::fromTerms: exponents not strictly ascending");
      check(t.first >= 0, "ZPoly::fromTerms: negative exponent");
      check(t.second != 0, "ZPoly::fromTerms: zero coefficient");
      prev = t.first;
    }
    return p;
  }

  bool isZero() const { return terms_.empty(); }
  bool isOne() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
  }
  bool isMonomial() const { return terms_.size() == 1; }
  bool isConstant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].first == 0); }

  long degree() const {
    check(!isZero(), "ZPoly::degree of zero");
    return terms_.back().first;
  }
  long valuation() const {
    check(!isZero(), "ZPoly::valuation of zero");
    return terms_.front().first;
  }
  const BigInt& leadingCoeff() const {
    check(!isZero(), "ZPoly::leadingCoeff of zero");
    return terms_.back().second;
  }
  std::size_t termCount() const { return terms_.size(); }
  const std::vector<Term>& terms() const { return terms_; }

  BigInt coeff(long exp) const {
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), exp,
        [](const Term& t, long e) { return t.first < e; });
    if (it != terms_.end() && it->first == exp) return it->second;
    return BigInt(0);
  }

  friend bool operator==(const ZPoly& a, const ZPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const ZPoly& a, const ZPoly& b) { return !(a == b); }

  friend ZPoly operator-(const ZPoly& a) {
    ZPoly r = a;
    for (Term& t : r.terms_) t.second = -t.second;
    return r;
  }

  friend ZPoly operator+(const ZPoly& a, const ZPoly& b) { return merged(a, b, 1); }
  friend ZPoly operator-(const ZPoly& a, const ZPoly& b) { return merged(a, b, -1); }

  friend ZPoly operator*(const ZPoly& a, const ZPoly& b) {
    if (a.isZero() || b.isZero()) return {};
    if (a.isMonomial()) return b.scaledShift(a.terms_[0].first, a.terms_[0].second);
    if (b.isMonomial()) return a.scaledShift(b.terms_[0].first, b.terms_[0].second);
    long lo = a.valuation() + b.valuation();
    long hi = a.degree() + b.degree();
    std::size_t range = static_cast<std::size_t>(hi - lo + 1);
    std::size_t work = a.termCount() * b.termCount();
    ZPoly r;
    if (range <= 64 + 2 * work) {
      std::vector<BigInt> buf(range);
      for (const Term& ta : a.terms_)
        for (const Term& tb : b.terms_) {
          BigInt& slot = buf[static_cast<std::size_t>(ta.first + tb.first - lo)];
          mpz_addmul(slot.get_mpz_t(), ta.second.get_mpz_t(), tb.second.get_mpz_t());
        }
      for (std::size_t i = 0; i < range; ++i)
        if (buf[i] != 0) r.terms_.emplace_back(lo + static_cast<long>(i), std::move(buf[i]));
    } else {
      std::map<long, BigInt> acc;
      for (const Term& ta : a.terms_)
        for (const Term& tb : b.terms_) {
          BigInt& slot = acc[ta.first + tb.first];
          mpz_addmul(slot.get_mpz_t(), ta.second.get_mpz_t(), tb.second.get_mpz_t());
        }
      for (auto& [e, c] : acc)
        if (c != 0) r.terms_.emplace_back(e, std::move(c));
    }
    return r;
  }

  // this * coeff * s^shift
  ZPoly scaledShift(long shift, const BigInt& coeff) const {
    if (coeff == 0) return {};
    ZPoly r;
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) {
      long e = t.first + shift;
      check(e >= 0, "ZPoly::scaledShift: negative exponent");
      r.terms_.emplace_back(e, t.second * coeff);
    }
    return r;
  }

  // gcd of |coefficients|; content(0) = 0.
  BigInt content() const {
    BigInt g(0);
    for (const Term& t : terms_) {
      g = intGcd(g, t.second);
      if (g == 1) break;
    }
    return g;
  }

  ZPoly primitivePart() const {
    if (isZero()) return {};
    BigInt c = content();
    if (c == 1) return *this;
    ZPoly r;
    r.terms_.reserve(terms_.size());
    for (const Term& t : terms_) r.terms_.emplace_back(t.first, t.second / c);
    return r;
  }

  BigRat evalAt(const BigRat& s0) const {
    BigRat acc(0);
    BigRat cur(1);
    long curExp = 0;
    for (const Term& t : terms_) {
      if (t.first != curExp) {
        cur *= ratPow(s0, t.first - curExp);
        curExp = t.first;
      }
      acc += BigRat(t.second) * cur;
    }
    return acc;
  }

  std::string str() const {
    if (isZero()) return "0";
    std::string out;
    bool first = true;
    for (const Term& t : terms_) {
      if (!first) out += " + ";
      first = false;
      out += t.second.get_str();
      if (t.first != 0) {
        out += "*s^";
        out += std::to_string(t.first);
      }
    }
    return out;
  }

  static ZPoly parse(const std::string& text) {
    std::string body = trimString(text);
    if (body == "0") return {};
    check(!body.empty(), "ZPoly::parse: empty string");
    std::vector<Term> terms;
    for (const std::string& tok : splitString(body, " + ")) {
      check(!tok.empty(), "ZPoly::parse: empty term");
      std::size_t star = tok.find("*s^");
      long exp = 0;
      std::string coeffText = tok;
      if (star != std::string::npos) {
        coeffText = tok.substr(0, star);
        std::string expText = tok.substr(star + 3);
        check(!expText.empty() &&
                  expText.find_first_not_of("0123456789") == std::string::npos,
              "ZPoly::parse: bad exponent '" + tok + "'");
        check(expText == "0" || expText[0] != '0',
              "ZPoly::parse: non-canonical exponent '" + tok + "'");
        exp = std::stol(expText);
        check(exp != 0, "ZPoly::parse: explicit zero exponent '" + tok + "'");
      }
      terms.emplace_back(exp, parseBigInt(coeffText));
    }
    return fromTerms(std::move(terms));
  }

private:
  static ZPoly merged(const ZPoly& a, const ZPoly& b, int bsign) {
    ZPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms_.size() || j < b.terms_.size()) {
      if (j == b.terms_.size() ||
          (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
        r.terms_.push_back(a.terms_[i++]);
      } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
        const Term& t = b.terms_[j++];
        r.terms_.emplace_back(t.first, bsign > 0 ? t.second : -t.second);
      } else {
        BigInt c = a.terms_[i].second;
        if (bsign > 0) {
          c += b.terms_[j].second;
        } else {
          c -= b.terms_[j].second;
        }
        if (c != 0) r.terms_.emplace_back(a.terms_[i].first, std::move(c));
        ++i;
        ++j;
      }
    }
    return r;
  }

  std::vector<Term> terms_;
};

inline ZPoly mulConst(const ZPoly& a, const BigInt& c) { return a.scaledShift(0, c); }

// Exact division; error if remainder is nonzero.
inline ZPoly divExact(const ZPoly& a, const ZPoly& b) {
  check(!b.isZero(), "divExact: division by zero polynomial");
  if (a.isZero()) return {};
  if (b.isMonomial()) {
    long eb = b.terms()[0].first;
    const BigInt& cb = b.terms()[0].second;
    std::vector<ZPoly::Term> out;
    out.reserve(a.termCount());
    for (const auto& t : a.terms()) {
      check(t.first >= eb, "divExact: not divisible (exponent)");
      check(mpz_divisible_p(t.second.get_mpz_t(), cb.get_mpz_t()),
            "divExact: not divisible (coefficient)");
      out.emplace_back(t.first - eb, t.second / cb);
    }
    return ZPoly::fromTerms(std::move(out));
  }
  check(a.degree() >= b.degree() && a.valuation() >= b.valuation(),
        "divExact: not divisible (degree range)");
  ZPoly rem = a;
  std::vector<ZPoly::Term> qrev;
  const BigInt& lb = b.leadingCoeff();
  while (!rem.isZero() && rem.degree() >= b.degree()) {
    check(mpz_divisible_p(rem.leadingCoeff().get_mpz_t(), lb.get_mpz_t()),
          "divExact: not divisible (leading coefficient)");
    BigInt qc = rem.leadingCoeff() / lb;
    long qe = rem.degree() - b.degree();
    rem = rem - b.scaledShift(qe, qc);
    qrev.emplace_back(qe, std::move(qc));
  }
  check(rem.isZero(), "divExact: nonzero remainder");
  std::reverse(qrev.begin(), qrev.end());
  return ZPoly::fromTerms(std::move(qrev));
}

inline bool dividesExactly(const ZPoly& b, const ZPoly& a) {
  try {
    (void)divExact(a, b);
    return true;
  } catch (const Error&) {
    return false;
  }
}

// Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r. Requires deg a >= deg b.
inline ZPoly pseudoRem(const ZPoly& a, const ZPoly& b) {
  check(!b.isZero() && !a.isZero() && a.degree() >= b.degree(),
        "pseudoRem: bad arguments");
  long d = a.degree() - b.degree();
  const BigInt& lb = b.leadingCoeff();
  ZPoly r = a;
  long steps = 0;
  while (!r.isZero() && r.degree() >= b.degree()) {
    ZPoly t = b.scaledShift(r.degree() - b.degree(), r.leadingCoeff());
    r = mulConst(r, lb) - t;
    ++steps;
  }
  for (; steps <= d; ++steps) r = mulConst(r, lb);
  return r;
}

// Full gcd in Z[s] (integer content, s-power and polynomial part all included),
// normalized to positive leading coefficient; gcd(0,0) = 0.
inline ZPoly gcdPoly(const ZPoly& a0, const ZPoly& b0) {
  auto positive = [](ZPoly p) {
    if (!p.isZero() && p.leadingCoeff() < 0) return -p;
    return p;
  };
  if (a0.isZero()) return positive(b0);
  if (b0.isZero()) return positive(a0);

  long v = std::min(a0.valuation(), b0.valuation());
  BigInt ci = intGcd(a0.content(), b0.content());
  if (a0.isMonomial() || b0.isMonomial()) return ZPoly::monomial(v, ci);

  // Strip s-powers and contents; run subresultant PRS on the primitive cores.
  ZPoly A = divExact(a0.primitivePart(), ZPoly::monomial(a0.valuation(), BigInt(1)));
  ZPoly B = divExact(b0.primitivePart(), ZPoly::monomial(b0.valuation(), BigInt(1)));
  if (A.degree() < B.degree()) std::swap(A, B);
  if (B.degree() == 0) return ZPoly::monomial(v, ci);

  BigInt g(1), h(1);
  ZPoly core;
  while (true) {
    long d = A.degree() - B.degree();
    ZPoly r = pseudoRem(A, B);
    if (r.isZero()) {
      core = B.primitivePart();
      break;
    }
    if (r.degree() == 0) {
      core = ZPoly(1);
      break;
    }
    A = B;
    B = divExact(r, ZPoly(g * intPow(h, static_cast<unsigned long>(d))));
    g = A.leadingCoeff();
    if (d >= 1) {
      BigInt gd = intPow(g, static_cast<unsigned long>(d));
      if (d == 1) {
        h = gd;
      } else {
        BigInt hd = intPow(h, static_cast<unsigned long>(d - 1));
        check(mpz_divisible_p(gd.get_mpz_t(), hd.get_mpz_t()),
              "gcdPoly: subresultant invariant violated");
        h = gd / hd;
      }
    }
  }
  return positive(ZPoly::monomial(v, ci) * positive(std::move(core)));
}

}  // namespace qaffine
