#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "qaffine/qscalar.hpp"

namespace qaffine {

// Sparse matrix over Q(s); 1-based indices; absent entries are zero.
class SpMat {
public:
  SpMat() = default;
  SpMat(long rows, long cols) : rows_(rows), cols_(cols) {
    check(rows >= 0 && cols >= 0, "SpMat: negative dimensions");
  }

  static SpMat identity(long n) {
    SpMat m(n, n);
    for (long i = 1; i <= n; ++i) m.set(i, i, QScalar(1L));
    return m;
  }

  // E_ij scaled by v
  static SpMat unit(long rows, long cols, long i, long j,
                    QScalar v = QScalar(1L)) {
    SpMat m(rows, cols);
    m.set(i, j, std::move(v));
    return m;
  }

  long rows() const { return rows_; }
  long cols() const { return cols_; }

  QScalar get(long i, long j) const {
    checkIndex(i, j);
    auto rit = data_.find(i);
    if (rit == data_.end()) return QScalar();
    auto cit = rit->second.find(j);
    if (cit == rit->second.end()) return QScalar();
    return cit->second;
  }

  void set(long i, long j, QScalar v) {
    checkIndex(i, j);
    if (v.isZero()) {
      auto rit = data_.find(i);
      if (rit != data_.end()) {
        rit->second.erase(j);
        if (rit->second.empty()) data_.erase(rit);
      }
      return;
    }
    data_[i][j] = std::move(v);
  }

  void accumulate(long i, long j, const QScalar& v) {
    if (v.isZero()) return;
    checkIndex(i, j);
    QScalar& slot = data_[i][j];
    slot += v;
    if (slot.isZero()) {
      data_[i].erase(j);
      if (data_[i].empty()) data_.erase(i);
    }
  }

  bool isZero() const { return data_.empty(); }

  std::size_t entryCount() const {
    std::size_t n = 0;
    for (const auto& [i, row] : data_) n += row.size();
    return n;
  }

  void forEach(const std::function<void(long, long, const QScalar&)>& fn) const {
    for (const auto& [i, row] : data_)
      for (const auto& [j, v] : row) fn(i, j, v);
  }

  const std::map<long, std::map<long, QScalar>>& rowsData() const { return data_; }

  friend bool operator==(const SpMat& a, const SpMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const SpMat& a, const SpMat& b) { return !(a == b); }

  friend SpMat operator+(const SpMat& a, const SpMat& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "SpMat+: shape mismatch");
    SpMat r = a;
    b.forEach([&](long i, long j, const QScalar& v) { r.accumulate(i, j, v); });
    return r;
  }
  friend SpMat operator-(const SpMat& a, const SpMat& b) {
    check(a.rows_ == b.rows_ && a.cols_ == b.cols_, "SpMat-: shape mismatch");
    SpMat r = a;
    b.forEach([&](long i, long j, const QScalar& v) { r.accumulate(i, j, -v); });
    return r;
  }
  friend SpMat operator-(const SpMat& a) {
    SpMat r(a.rows_, a.cols_);
    a.forEach([&](long i, long j, const QScalar& v) { r.set(i, j, -v); });
    return r;
  }

  friend SpMat operator*(const SpMat& a, const SpMat& b) {
    check(a.cols_ == b.rows_, "SpMat*: shape mismatch");
    SpMat r(a.rows_, b.cols_);
    for (const auto& [i, arow] : a.data_) {
      for (const auto& [k, av] : arow) {
        auto bit = b.data_.find(k);
        if (bit == b.data_.end()) continue;
        for (const auto& [j, bv] : bit->second) r.accumulate(i, j, av * bv);
      }
    }
    return r;
  }

  friend SpMat operator*(const QScalar& c, const SpMat& a) {
    SpMat r(a.rows_, a.cols_);
    if (c.isZero()) return r;
    a.forEach([&](long i, long j, const QScalar& v) { r.set(i, j, c * v); });
    return r;
  }

  SpMat transpose() const {
    SpMat r(cols_, rows_);
    forEach([&](long i, long j, const QScalar& v) { r.set(j, i, v); });
    return r;
  }

  QScalar trace() const {
    check(rows_ == cols_, "SpMat::trace: not square");
    QScalar t;
    for (const auto& [i, row] : data_) {
      auto it = row.find(i);
      if (it != row.end()) t += it->second;
    }
    return t;
  }

  // Exact dense Gauss-Jordan inverse; error if singular.
  SpMat inverse() const {
    check(rows_ == cols_, "SpMat::inverse: not square");
    long n = rows_;
    std::vector<std::vector<QScalar>> m(static_cast<std::size_t>(n),
                                        std::vector<QScalar>(static_cast<std::size_t>(2 * n)));
    forEach([&](long i, long j, const QScalar& v) {
      m[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
    });
    for (long i = 0; i < n; ++i)
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + i)] = QScalar(1L);
    for (long col = 0; col < n; ++col) {
      long piv = col;
      while (piv < n && m[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)].isZero()) ++piv;
      check(piv < n, "SpMat::inverse: singular matrix");
      std::swap(m[static_cast<std::size_t>(piv)], m[static_cast<std::size_t>(col)]);
      QScalar inv = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)].inverse();
      for (long k = col; k < 2 * n; ++k) {
        QScalar& x = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
        if (!x.isZero()) x *= inv;
      }
      for (long r = 0; r < n; ++r) {
        if (r == col) continue;
        QScalar factor = m[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)];
        if (factor.isZero()) continue;
        for (long k = col; k < 2 * n; ++k) {
          const QScalar& src = m[static_cast<std::size_t>(col)][static_cast<std::size_t>(k)];
          if (!src.isZero())
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(k)] -= factor * src;
        }
      }
    }
    SpMat out(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        QScalar& v = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(n + j)];
        if (!v.isZero()) out.set(i + 1, j + 1, std::move(v));
      }
    return out;
  }

  std::string str() const {
    std::string out;
    forEach([&](long i, long j, const QScalar& v) {
      out += "(" + std::to_string(i) + "," + std::to_string(j) + ") " + v.str() + "\n";
    });
    return out.empty() ? "(zero)\n" : out;
  }

private:
  void checkIndex(long i, long j) const {
    check(1 <= i && i <= rows_ && 1 <= j && j <= cols_,
          "SpMat: index out of range");
  }

  long rows_ = 0, cols_ = 0;
  std::map<long, std::map<long, QScalar>> data_;
};

// Tensor product; a on the first leg: row = (i_a - 1) * b.rows + i_b.
inline SpMat kron(const SpMat& a, const SpMat& b) {
  SpMat r(a.rows() * b.rows(), a.cols() * b.cols());
  a.forEach([&](long ia, long ja, const QScalar& va) {
    b.forEach([&](long ib, long jb, const QScalar& vb) {
      r.set((ia - 1) * b.rows() + ib, (ja - 1) * b.cols() + jb, va * vb);
    });
  });
  return r;
}

// Embed a matrix acting on the tensor legs `legs` (1-based, in the order the
// matrix's own factors are listed) into the full product with leg dimensions
// `dims`. All legs square.
inline SpMat embedLegs(const SpMat& a, const std::vector<long>& dims,
                       const std::vector<long>& legs) {
  long total = 1;
  for (long d : dims) total *= d;
  long sub = 1;
  for (long leg : legs) {
    check(1 <= leg && leg <= static_cast<long>(dims.size()), "embedLegs: bad leg");
    sub *= dims[static_cast<std::size_t>(leg - 1)];
  }
  check(a.rows() == sub && a.cols() == sub, "embedLegs: shape mismatch");

  // strides in the composite index (leg 1 slowest)
  std::vector<long> stride(dims.size());
  long acc = 1;
  for (std::size_t t = dims.size(); t-- > 0;) {
    stride[t] = acc;
    acc *= dims[t];
  }
  std::vector<bool> onLegs(dims.size(), false);
  for (long leg : legs) onLegs[static_cast<std::size_t>(leg - 1)] = true;

  // spectator legs enumerated in order
  std::vector<std::size_t> spect;
  for (std::size_t t = 0; t < dims.size(); ++t)
    if (!onLegs[t]) spect.push_back(t);
  long spectTotal = 1;
  for (std::size_t t : spect) spectTotal *= dims[t];

  SpMat r(total, total);
  a.forEach([&](long ia, long ja, const QScalar& v) {
    // decompose sub-indices into per-leg digits (legs order, row-major)
    std::vector<long> rowDigit(legs.size()), colDigit(legs.size());
    long ri = ia - 1, ci = ja - 1;
    for (std::size_t t = legs.size(); t-- > 0;) {
      long d = dims[static_cast<std::size_t>(legs[t] - 1)];
      rowDigit[t] = ri % d;
      colDigit[t] = ci % d;
      ri /= d;
      ci /= d;
    }
    for (long sp = 0; sp < spectTotal; ++sp) {
      long base = 0;
      long rem = sp;
      for (std::size_t u = spect.size(); u-- > 0;) {
        long d = dims[spect[u]];
        base += (rem % d) * stride[spect[u]];
        rem /= d;
      }
      long row = base, col = base;
      for (std::size_t t = 0; t < legs.size(); ++t) {
        row += rowDigit[t] * stride[static_cast<std::size_t>(legs[t] - 1)];
        col += colDigit[t] * stride[static_cast<std::size_t>(legs[t] - 1)];
      }
      r.set(row + 1, col + 1, v);
    }
  });
  return r;
}

}  // namespace qaffine
