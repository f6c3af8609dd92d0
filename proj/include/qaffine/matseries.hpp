#pragma once

#include <map>
#include <utility>

#include "qaffine/spmat.hpp"

namespace qaffine {

// Truncated matrix-valued power series: sum of coeff(k) z^k for 0 <= k <= trunc.
// Orders beyond trunc are unknown, not zero; binary operations shrink trunc
// to the range both operands certify.
class MatSeries {
public:
  MatSeries() = default;
  MatSeries(long rows, long cols, long trunc)
      : rows_(rows), cols_(cols), trunc_(trunc) {
    check(trunc >= 0, "MatSeries: negative truncation order");
  }

  static MatSeries identity(long n, long trunc) {
    MatSeries s(n, n, trunc);
    s.setCoeff(0, SpMat::identity(n));
    return s;
  }

  long rows() const { return rows_; }
  long cols() const { return cols_; }
  long trunc() const { return trunc_; }

  SpMat coeff(long k) const {
    check(0 <= k && k <= trunc_, "MatSeries::coeff: order out of range");
    auto it = coeff_.find(k);
    return it == coeff_.end() ? SpMat(rows_, cols_) : it->second;
  }

  void setCoeff(long k, SpMat m) {
    check(0 <= k && k <= trunc_, "MatSeries::setCoeff: order out of range");
    check(m.rows() == rows_ && m.cols() == cols_, "MatSeries::setCoeff: shape");
    if (m.isZero())
      coeff_.erase(k);
    else
      coeff_[k] = std::move(m);
  }

  bool isZero() const { return coeff_.empty(); }

  // Smallest order with nonzero coefficient; trunc+1 if none.
  long valuation() const {
    return coeff_.empty() ? trunc_ + 1 : coeff_.begin()->first;
  }

  // Drop certified orders above newTrunc.
  MatSeries truncated(long newTrunc) const {
    check(0 <= newTrunc && newTrunc <= trunc_, "MatSeries::truncated: bad order");
    MatSeries r(rows_, cols_, newTrunc);
    for (const auto& [k, m] : coeff_) {
      if (k > newTrunc) break;
      r.coeff_[k] = m;
    }
    return r;
  }

  friend bool operator==(const MatSeries& a, const MatSeries& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.trunc_ == b.trunc_ &&
           a.coeff_ == b.coeff_;
  }
  friend bool operator!=(const MatSeries& a, const MatSeries& b) { return !(a == b); }

  friend MatSeries operator+(const MatSeries& a, const MatSeries& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "MatSeries+: shape mismatch");
    MatSeries r(a.rows_, a.cols_, std::min(a.trunc_, b.trunc_));
    for (long k = 0; k <= r.trunc_; ++k) r.setCoeff(k, a.coeff(k) + b.coeff(k));
    return r;
  }
  friend MatSeries operator-(const MatSeries& a, const MatSeries& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "MatSeries-: shape mismatch");
    MatSeries r(a.rows_, a.cols_, std::min(a.trunc_, b.trunc_));
    for (long k = 0; k <= r.trunc_; ++k) r.setCoeff(k, a.coeff(k) - b.coeff(k));
    return r;
  }
  friend MatSeries operator-(const MatSeries& a) {
    MatSeries r(a.rows_, a.cols_, a.trunc_);
    for (const auto& [k, m] : a.coeff_) r.coeff_[k] = -m;
    return r;
  }

  // Cauchy product on the jointly certified range.
  friend MatSeries operator*(const MatSeries& a, const MatSeries& b) {
    check(a.cols_ == b.rows_, "MatSeries*: shape mismatch");
    MatSeries r(a.rows_, b.cols_, std::min(a.trunc_, b.trunc_));
    for (const auto& [i, am] : a.coeff_) {
      for (const auto& [j, bm] : b.coeff_) {
        if (i + j > r.trunc_) break;
        SpMat prod = am * bm;
        if (prod.isZero()) continue;
        auto it = r.coeff_.find(i + j);
        if (it == r.coeff_.end())
          r.coeff_[i + j] = std::move(prod);
        else
          it->second = it->second + prod;
      }
    }
    for (auto it = r.coeff_.begin(); it != r.coeff_.end();)
      it = it->second.isZero() ? r.coeff_.erase(it) : std::next(it);
    return r;
  }

  friend MatSeries operator*(const QScalar& c, const MatSeries& a) {
    MatSeries r(a.rows_, a.cols_, a.trunc_);
    if (c.isZero()) return r;
    for (const auto& [k, m] : a.coeff_) r.setCoeff(k, c * m);
    return r;
  }

  // Substitution z -> c z.
  MatSeries rescaled(const QScalar& c) const {
    check(!c.isZero(), "MatSeries::rescaled: zero scale");
    MatSeries r(rows_, cols_, trunc_);
    QScalar p(1L);
    long prev = 0;
    for (const auto& [k, m] : coeff_) {
      for (; prev < k; ++prev) p *= c;
      r.setCoeff(k, p * m);
    }
    return r;
  }

  // Multiplicative inverse; coefficient 0 must be invertible.
  MatSeries inverse() const {
    check(rows_ == cols_, "MatSeries::inverse: not square");
    MatSeries r(rows_, cols_, trunc_);
    SpMat y0 = coeff(0).inverse();
    r.setCoeff(0, y0);
    for (long n = 1; n <= trunc_; ++n) {
      SpMat acc(rows_, cols_);
      for (long j = 1; j <= n; ++j) {
        SpMat aj = coeff(j);
        if (aj.isZero()) continue;
        acc = acc + aj * r.coeff(n - j);
      }
      r.setCoeff(n, -(y0 * acc));
    }
    return r;
  }

  // log of a series with coefficient 0 equal to the identity.
  MatSeries logUnipotent() const {
    check(rows_ == cols_, "MatSeries::logUnipotent: not square");
    check(coeff(0) == SpMat::identity(rows_), "MatSeries::logUnipotent: coeff 0 != 1");
    MatSeries x = *this;
    x.setCoeff(0, SpMat(rows_, cols_));
    MatSeries result(rows_, cols_, trunc_);
    MatSeries power = x;
    long m = 1;
    while (!power.isZero() && m <= trunc_) {
      QScalar c = QScalar(BigRat(m % 2 == 1 ? 1 : -1, m));
      result = result + c * power;
      power = power * x;
      ++m;
    }
    return result;
  }

  // exp of a series with zero coefficient at order 0.
  MatSeries expNilpotent() const {
    check(rows_ == cols_, "MatSeries::expNilpotent: not square");
    check(coeff(0).isZero(), "MatSeries::expNilpotent: coeff 0 != 0");
    MatSeries result = MatSeries::identity(rows_, trunc_);
    MatSeries power = *this;
    BigInt fact(1);
    long m = 1;
    while (!power.isZero() && m <= trunc_) {
      result = result + QScalar(BigRat(BigInt(1), fact)) * power;
      power = power * *this;
      ++m;
      fact *= m;
    }
    return result;
  }

private:
  long rows_ = 0, cols_ = 0;
  long trunc_ = 0;
  std::map<long, SpMat> coeff_;  // order -> nonzero coefficient
};

// Laurent polynomial in two commuting variables with sparse matrix
// coefficients. Used to expand products of truncated series in several
// spectral parameters; comparison is then restricted to the exponent region
// both sides certify.
class BiPoly {
public:
  BiPoly() = default;
  BiPoly(long rows, long cols) : rows_(rows), cols_(cols) {}

  long rows() const { return rows_; }
  long cols() const { return cols_; }

  // Lift a series in one variable: var z^k -> x^(k*ex) y^(k*ey).
  // ex/ey may be negative (e.g. the ratio z/u maps to (1,-1)).
  static BiPoly fromSeries(const MatSeries& s, long ex, long ey) {
    BiPoly p(s.rows(), s.cols());
    for (long k = 0; k <= s.trunc(); ++k) {
      SpMat m = s.coeff(k);
      if (!m.isZero()) p.coeff_[{k * ex, k * ey}] = std::move(m);
    }
    return p;
  }

  SpMat coeff(long ex, long ey) const {
    auto it = coeff_.find({ex, ey});
    return it == coeff_.end() ? SpMat(rows_, cols_) : it->second;
  }

  void setCoeff(long ex, long ey, SpMat m) {
    check(m.rows() == rows_ && m.cols() == cols_, "BiPoly::setCoeff: shape");
    if (m.isZero())
      coeff_.erase({ex, ey});
    else
      coeff_[{ex, ey}] = std::move(m);
  }

  bool isZero() const { return coeff_.empty(); }

  const std::map<std::pair<long, long>, SpMat>& terms() const { return coeff_; }

  friend BiPoly operator+(const BiPoly& a, const BiPoly& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "BiPoly+: shape mismatch");
    BiPoly r = a;
    for (const auto& [e, m] : b.coeff_) {
      auto it = r.coeff_.find(e);
      if (it == r.coeff_.end()) {
        r.coeff_[e] = m;
      } else {
        it->second = it->second + m;
        if (it->second.isZero()) r.coeff_.erase(it);
      }
    }
    return r;
  }

  friend BiPoly operator-(const BiPoly& a, const BiPoly& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "BiPoly-: shape mismatch");
    BiPoly r = a;
    for (const auto& [e, m] : b.coeff_) {
      auto it = r.coeff_.find(e);
      if (it == r.coeff_.end()) {
        r.coeff_[e] = -m;
      } else {
        it->second = it->second - m;
        if (it->second.isZero()) r.coeff_.erase(it);
      }
    }
    return r;
  }

  friend BiPoly operator*(const BiPoly& a, const BiPoly& b) {
    check(a.cols_ == b.rows_, "BiPoly*: shape mismatch");
    BiPoly r(a.rows_, b.cols_);
    for (const auto& [ea, ma] : a.coeff_) {
      for (const auto& [eb, mb] : b.coeff_) {
        SpMat prod = ma * mb;
        if (prod.isZero()) continue;
        std::pair<long, long> e{ea.first + eb.first, ea.second + eb.second};
        auto it = r.coeff_.find(e);
        if (it == r.coeff_.end())
          r.coeff_[e] = std::move(prod);
        else
          it->second = it->second + prod;
      }
    }
    for (auto it = r.coeff_.begin(); it != r.coeff_.end();)
      it = it->second.isZero() ? r.coeff_.erase(it) : std::next(it);
    return r;
  }

  // Equality of a and b restricted to exponent pairs satisfying `inRegion`.
  // Exponents outside the region carry truncation artifacts and are ignored.
  static bool agreeOnRegion(const BiPoly& a, const BiPoly& b,
                            const std::function<bool(long, long)>& inRegion) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "BiPoly::agree: shape mismatch");
    for (const auto& [e, m] : a.coeff_)
      if (inRegion(e.first, e.second) && !(m == b.coeff(e.first, e.second)))
        return false;
    for (const auto& [e, m] : b.coeff_)
      if (inRegion(e.first, e.second) && a.coeff_.find(e) == a.coeff_.end() &&
          !m.isZero())
        return false;
    return true;
  }

private:
  long rows_ = 0, cols_ = 0;
  std::map<std::pair<long, long>, SpMat> coeff_;  // (ex, ey) -> nonzero coeff
};

}  // namespace qaffine
