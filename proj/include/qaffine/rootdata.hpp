#pragma once

#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "qaffine/qscalar.hpp"

namespace qaffine {

enum class Family { A, B, C, D, A2even, A2odd, D2 };

inline std::string familyName(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
    case Family::D: return "D";
    case Family::A2even: return "A2even";
    case Family::A2odd: return "A2odd";
    case Family::D2: return "D2";
  }
  fail("familyName: bad family");
}

inline std::optional<Family> parseFamily(const std::string& name) {
  for (Family f : {Family::A, Family::B, Family::C, Family::D, Family::A2even,
                   Family::A2odd, Family::D2})
    if (familyName(f) == name) return f;
  return std::nullopt;
}

struct AffineType {
  Family family;
  long rank;
};

inline std::string typeLabel(const AffineType& t) {
  return familyName(t.family) + std::to_string(t.rank);
}

inline long minRank(Family f) {
  switch (f) {
    case Family::A: return 1;
    case Family::B: return 3;
    case Family::C: return 2;
    case Family::D: return 4;
    case Family::A2even: return 1;
    case Family::A2odd: return 3;
    case Family::D2: return 2;
  }
  fail("minRank: bad family");
}

// Rational coordinates over the basis (alpha_0, ..., alpha_l, Lambda_0).
class LatticeVec {
public:
  LatticeVec() = default;
  explicit LatticeVec(std::size_t dim) : c_(dim, BigRat(0)) {}
  explicit LatticeVec(std::vector<BigRat> coords) : c_(std::move(coords)) {}

  std::size_t dim() const { return c_.size(); }
  const BigRat& operator[](std::size_t i) const { return c_[i]; }
  BigRat& operator[](std::size_t i) { return c_[i]; }

  bool isZero() const {
    for (const BigRat& x : c_)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const LatticeVec& a, const LatticeVec& b) {
    return a.c_ == b.c_;
  }
  friend bool operator!=(const LatticeVec& a, const LatticeVec& b) {
    return !(a == b);
  }
  // total order for use as map key
  friend bool operator<(const LatticeVec& a, const LatticeVec& b) {
    check(a.dim() == b.dim(), "LatticeVec: dimension mismatch");
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      int c = cmp(a.c_[i], b.c_[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }

  friend LatticeVec operator+(const LatticeVec& a, const LatticeVec& b) {
    check(a.dim() == b.dim(), "LatticeVec: dimension mismatch");
    LatticeVec r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] += b.c_[i];
    return r;
  }
  friend LatticeVec operator-(const LatticeVec& a, const LatticeVec& b) {
    check(a.dim() == b.dim(), "LatticeVec: dimension mismatch");
    LatticeVec r = a;
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] -= b.c_[i];
    return r;
  }
  friend LatticeVec operator-(const LatticeVec& a) {
    LatticeVec r = a;
    for (BigRat& x : r.c_) x = -x;
    return r;
  }
  friend LatticeVec operator*(const BigRat& t, const LatticeVec& a) {
    LatticeVec r = a;
    for (BigRat& x : r.c_) x *= t;
    return r;
  }

  std::string str() const {
    std::string out = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (i) out += ",";
      out += toString(c_[i]);
    }
    return out + ")";
  }

private:
  std::vector<BigRat> c_;
};

namespace detail {

// Gaussian elimination over Q: solution of m x = rhs; error if singular.
inline std::vector<BigRat> ratSolve(std::vector<std::vector<BigRat>> m,
                                    std::vector<BigRat> rhs) {
  std::size_t n = m.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    while (piv < n && m[piv][col] == 0) ++piv;
    check(piv < n, "ratSolve: singular matrix");
    std::swap(m[piv], m[col]);
    std::swap(rhs[piv], rhs[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || m[r][col] == 0) continue;
      BigRat t = m[r][col] / m[col][col];
      for (std::size_t k = col; k < n; ++k) m[r][k] -= t * m[col][k];
      rhs[r] -= t * rhs[col];
    }
  }
  std::vector<BigRat> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
  return x;
}

// Null vector of an integer matrix with one-dimensional kernel,
// scaled to coprime positive integers.
inline std::vector<long> integerNullVector(const std::vector<std::vector<long>>& ml) {
  std::size_t n = ml.size();
  std::vector<std::vector<BigRat>> m(n, std::vector<BigRat>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = BigRat(ml[i][j]);

  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t piv = row;
    while (piv < n && m[piv][col] == 0) ++piv;
    if (piv == n) continue;
    std::swap(m[piv], m[row]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || m[r][col] == 0) continue;
      BigRat t = m[r][col] / m[row][col];
      for (std::size_t k = 0; k < n; ++k) m[r][k] -= t * m[row][k];
    }
    pivots.emplace_back(row, col);
    ++row;
  }
  check(pivots.size() == n - 1, "integerNullVector: kernel dimension is not 1");

  std::vector<bool> isPivot(n, false);
  for (auto& [r, c] : pivots) isPivot[c] = true;
  std::size_t freeCol = n;
  for (std::size_t c = 0; c < n; ++c)
    if (!isPivot[c]) freeCol = c;

  std::vector<BigRat> x(n, BigRat(0));
  x[freeCol] = 1;
  for (auto& [r, c] : pivots) x[c] = -m[r][freeCol] / m[r][c];

  BigInt lcmDen(1);
  for (const BigRat& v : x) {
    BigInt d = v.get_den();
    lcmDen = lcmDen / intGcd(lcmDen, d) * d;
  }
  std::vector<BigInt> vi(n);
  BigInt g(0);
  for (std::size_t i = 0; i < n; ++i) {
    BigRat scaled = x[i] * BigRat(lcmDen);
    check(scaled.get_den() == 1, "integerNullVector: scaling failed");
    vi[i] = scaled.get_num();
    g = intGcd(g, vi[i]);
  }
  check(g != 0, "integerNullVector: zero vector");
  bool anyNeg = false, anyPos = false;
  for (const BigInt& v : vi) {
    if (v < 0) anyNeg = true;
    if (v > 0) anyPos = true;
  }
  check(!(anyNeg && anyPos), "integerNullVector: mixed-sign null vector");
  std::vector<long> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    BigInt v = vi[i] / g;
    if (anyNeg) v = -v;
    check(v > 0 && v.fits_slong_p(), "integerNullVector: bad entry");
    out[i] = v.get_si();
  }
  // verify exactly
  for (std::size_t i = 0; i < n; ++i) {
    long acc = 0;
    for (std::size_t j = 0; j < n; ++j) acc += ml[i][j] * out[j];
    check(acc == 0, "integerNullVector: verification failed");
  }
  return out;
}

}  // namespace detail

// The seven affine Cartan matrices in the paper's enumeration
// (0-node first; A2even uses the reversed enumeration, making a_0 = 1).
inline std::vector<std::vector<long>> cartanMatrix(const AffineType& t) {
  check(t.rank >= minRank(t.family),
        "cartanMatrix: rank below bound for " + typeLabel(t));
  long l = t.rank;
  std::size_t n = static_cast<std::size_t>(l + 1);
  std::vector<std::vector<long>> a(n, std::vector<long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) a[i][i] = 2;
  auto edge = [&](long i, long j, long aij, long aji) {
    a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = aij;
    a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = aji;
  };
  auto simpleChain = [&](long from, long to) {
    for (long i = from; i < to; ++i) edge(i, i + 1, -1, -1);
  };
  switch (t.family) {
    case Family::A:
      if (l == 1) {
        edge(0, 1, -2, -2);
      } else {
        simpleChain(0, l);
        edge(l, 0, -1, -1);
      }
      break;
    case Family::B:
      edge(0, 2, -1, -1);
      edge(1, 2, -1, -1);
      simpleChain(2, l - 1);
      edge(l - 1, l, -1, -2);
      break;
    case Family::C:
      edge(0, 1, -1, -2);
      simpleChain(1, l - 1);
      edge(l - 1, l, -2, -1);
      break;
    case Family::D:
      edge(0, 2, -1, -1);
      edge(1, 2, -1, -1);
      simpleChain(2, l - 2);
      edge(l - 2, l - 1, -1, -1);
      edge(l - 2, l, -1, -1);
      break;
    case Family::A2even:
      if (l == 1) {
        edge(0, 1, -1, -4);
      } else {
        edge(0, 1, -1, -2);
        simpleChain(1, l - 1);
        edge(l - 1, l, -1, -2);
      }
      break;
    case Family::A2odd:
      edge(0, 2, -1, -1);
      edge(1, 2, -1, -1);
      simpleChain(2, l - 1);
      edge(l - 1, l, -2, -1);
      break;
    case Family::D2:
      edge(0, 1, -2, -1);
      simpleChain(1, l - 1);
      edge(l - 1, l, -1, -2);
      break;
  }
  return a;
}

struct RootDatum {
  AffineType type;
  long l = 0;                              // rank
  std::vector<std::vector<long>> cartan;   // (l+1) x (l+1)
  std::vector<long> marks;                 // a_i, right null vector
  std::vector<long> comarks;               // a_i^vee, left null vector
  std::vector<long> d;                     // symmetrizers
  long hDual = 0;                          // dual Coxeter number
  long p = 1;
  long sigma = 1;
  long D = 1;                              // q = s^D
  std::vector<BigRat> omega1;              // alpha_1..alpha_l coords (index 0 unused)
  long N = 0;
  std::vector<LatticeVec> eta;             // eta[1..N], index 0 unused

  std::size_t basisDim() const { return static_cast<std::size_t>(l + 2); }

  LatticeVec zeroVec() const { return LatticeVec(basisDim()); }

  LatticeVec alpha(long i) const {
    check(0 <= i && i <= l, "alpha: index out of range");
    LatticeVec v(basisDim());
    v[static_cast<std::size_t>(i)] = 1;
    return v;
  }

  LatticeVec lambda0() const {
    LatticeVec v(basisDim());
    v[static_cast<std::size_t>(l + 1)] = 1;
    return v;
  }

  LatticeVec delta() const {
    LatticeVec v(basisDim());
    for (long i = 0; i <= l; ++i) v[static_cast<std::size_t>(i)] = marks[static_cast<std::size_t>(i)];
    return v;
  }

  LatticeVec omega1Vec() const {
    LatticeVec v(basisDim());
    for (long j = 1; j <= l; ++j) v[static_cast<std::size_t>(j)] = omega1[static_cast<std::size_t>(j)];
    return v;
  }

  BigRat pair(const LatticeVec& x, const LatticeVec& y) const {
    check(x.dim() == basisDim() && y.dim() == basisDim(), "pair: dimension mismatch");
    // (alpha_i|alpha_j) = d_i a_ij, (alpha_i|Lambda_0) = d_i delta_i0, (Lambda_0|Lambda_0) = 0
    BigRat acc(0);
    std::size_t n = static_cast<std::size_t>(l + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0) continue;
      BigRat row(0);
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == 0) continue;
        row += BigRat(d[i] * cartan[i][j]) * y[j];
      }
      if (i == 0) row += BigRat(d[0]) * y[n];
      acc += x[i] * row;
    }
    if (x[n] != 0) acc += x[n] * BigRat(d[0]) * y[0];
    return acc;
  }

  bool inQ(const LatticeVec& v) const {
    std::size_t n = static_cast<std::size_t>(l + 1);
    if (v[n] != 0) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (v[i].get_den() != 1) return false;
    return true;
  }

  bool inQPlus(const LatticeVec& v) const {
    if (!inQ(v)) return false;
    for (std::size_t i = 0; i < static_cast<std::size_t>(l + 1); ++i)
      if (v[i] < 0) return false;
    return true;
  }

  // Sigma = Q + Z Lambda_0/d_0
  bool inSigma(const LatticeVec& v) const {
    std::size_t n = static_cast<std::size_t>(l + 1);
    for (std::size_t i = 0; i < n; ++i)
      if (v[i].get_den() != 1) return false;
    BigRat lam = v[n] * BigRat(d[0]);
    return lam.get_den() == 1;
  }

  // Gamma = Sigma + p Z omega_1
  bool inGamma(const LatticeVec& v) const {
    std::size_t n = static_cast<std::size_t>(l + 1);
    BigRat lam = v[n] * BigRat(d[0]);
    if (lam.get_den() != 1) return false;
    if (v[0].get_den() != 1) return false;
    // scan m over one period of the denominators of p*omega1
    BigInt period(1);
    for (long j = 1; j <= l; ++j) {
      BigRat pw = BigRat(p) * omega1[static_cast<std::size_t>(j)];
      BigInt den = pw.get_den();
      period = period / intGcd(period, den) * den;
    }
    check(period.fits_slong_p(), "inGamma: period overflow");
    for (long m = 0; m < period.get_si(); ++m) {
      bool ok = true;
      for (long j = 1; j <= l && ok; ++j) {
        BigRat r = v[static_cast<std::size_t>(j)] -
                   BigRat(m) * BigRat(p) * omega1[static_cast<std::size_t>(j)];
        ok = (r.get_den() == 1);
      }
      if (ok) return true;
    }
    return false;
  }

  // q^e as a power of s; requires D*e integral.
  QScalar qPow(const BigRat& e) const {
    BigRat se = BigRat(D) * e;
    check(se.get_den() == 1, "qPow: exponent " + toString(e) + " not D-integral");
    check(se.get_num().fits_slong_p(), "qPow: exponent overflow");
    return QScalar::sPow(se.get_num().get_si());
  }

  QScalar q() const { return QScalar::sPow(D); }
  QScalar qi(long i) const { return QScalar::sPow(D * d[static_cast<std::size_t>(i)]); }

  // [n]_i at q_i = q^{d_i}
  QScalar qInt(long n, long i) const {
    return qIntPow(n, D * d[static_cast<std::size_t>(i)]);
  }
  QScalar qFact(long n, long i) const {
    return qFactPow(n, D * d[static_cast<std::size_t>(i)]);
  }
  QScalar qBinom(long n, long k, long i) const {
    return qBinomPow(n, k, D * d[static_cast<std::size_t>(i)]);
  }

  long M() const { return type.family == Family::A ? l + 1 : 2; }

  // evaluation points a_1..a_M (index 0 = a_1)
  std::vector<QScalar> evalPoints() const {
    std::vector<QScalar> a;
    if (type.family == Family::A) {
      for (long m = 1; m <= l + 1; ++m) a.push_back(qPow(BigRat(-2 * (m - 1))));
    } else {
      a.push_back(QScalar(1L));
      BigRat e = makeRat(BigInt(-d[0] * hDual), BigInt(comarks[0]));
      QScalar a2 = qPow(e);
      if (sigma < 0) a2 = -a2;
      a.push_back(a2);
    }
    return a;
  }
};

inline RootDatum buildDatum(const AffineType& t) {
  RootDatum rd;
  rd.type = t;
  rd.l = t.rank;
  rd.cartan = cartanMatrix(t);
  std::size_t n = static_cast<std::size_t>(rd.l + 1);

  rd.marks = detail::integerNullVector(rd.cartan);
  std::vector<std::vector<long>> at(n, std::vector<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) at[i][j] = rd.cartan[j][i];
  rd.comarks = detail::integerNullVector(at);
  rd.hDual = std::accumulate(rd.comarks.begin(), rd.comarks.end(), 0L);
  check(rd.marks[0] == 1, "buildDatum: a_0 != 1");
  long expectA0v = t.family == Family::A2even ? 2 : 1;
  check(rd.comarks[0] == expectA0v, "buildDatum: a_0^vee unexpected");

  // symmetrizers from d_i a_ij = d_j a_ji, propagated over the connected diagram
  {
    std::vector<BigRat> dr(n, BigRat(0));
    dr[0] = 1;
    std::vector<std::size_t> queue = {0};
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      std::size_t i = queue[qi];
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || rd.cartan[i][j] == 0) continue;
        BigRat dj = dr[i] * makeRat(BigInt(rd.cartan[i][j]), BigInt(rd.cartan[j][i]));
        if (dr[j] == 0) {
          dr[j] = dj;
          queue.push_back(j);
        } else {
          check(dr[j] == dj, "buildDatum: inconsistent symmetrizers");
        }
      }
    }
    BigInt lcmDen(1), g(0);
    for (const BigRat& v : dr) {
      check(v > 0, "buildDatum: diagram not connected");
      BigInt den = v.get_den();
      lcmDen = lcmDen / intGcd(lcmDen, den) * den;
    }
    rd.d.resize(n);
    std::vector<BigInt> di(n);
    for (std::size_t i = 0; i < n; ++i) {
      BigRat scaled = dr[i] * BigRat(lcmDen);
      di[i] = scaled.get_num();
      g = intGcd(g, di[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      BigInt v = di[i] / g;
      check(v > 0 && v.fits_slong_p(), "buildDatum: bad symmetrizer");
      rd.d[i] = v.get_si();
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        check(rd.d[i] * rd.cartan[i][j] == rd.d[j] * rd.cartan[j][i],
              "buildDatum: symmetrizer check failed");
  }

  rd.p = (t.family == Family::A2even && rd.l == 1) ? 2 : 1;
  rd.sigma = (t.family == Family::A2even || t.family == Family::A2odd) ? -1 : 1;

  // omega_1 in the span of alpha_1..alpha_l: sum_k a_jk c_k = delta_j1 (1<=j<=l)
  {
    std::size_t m = static_cast<std::size_t>(rd.l);
    std::vector<std::vector<BigRat>> cm(m, std::vector<BigRat>(m));
    std::vector<BigRat> rhs(m, BigRat(0));
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) cm[j][k] = BigRat(rd.cartan[j + 1][k + 1]);
      rhs[j] = (j == 0) ? BigRat(1) : BigRat(0);
    }
    std::vector<BigRat> c = detail::ratSolve(cm, rhs);
    rd.omega1.assign(n, BigRat(0));
    for (std::size_t k = 0; k < m; ++k) rd.omega1[k + 1] = c[k];
  }

  // weight list (epsilon_i = p omega_1 - (alpha_1 + ... + alpha_{i-1}))
  {
    std::vector<LatticeVec> eps;  // eps[0] unused
    eps.push_back(rd.zeroVec());
    LatticeVec cur = BigRat(rd.p) * rd.omega1Vec();
    for (long i = 1; i <= rd.l; ++i) {
      eps.push_back(cur);
      cur = cur - rd.alpha(i);
    }
    std::vector<LatticeVec> etas;
    switch (t.family) {
      case Family::A: {
        LatticeVec sum = rd.zeroVec();
        for (long i = 1; i <= rd.l; ++i) {
          etas.push_back(eps[static_cast<std::size_t>(i)]);
          sum = sum + eps[static_cast<std::size_t>(i)];
        }
        etas.push_back(-sum);
        break;
      }
      case Family::B:
      case Family::A2even: {
        for (long i = 1; i <= rd.l; ++i) etas.push_back(eps[static_cast<std::size_t>(i)]);
        etas.push_back(rd.zeroVec());
        for (long i = rd.l; i >= 1; --i) etas.push_back(-eps[static_cast<std::size_t>(i)]);
        break;
      }
      case Family::C:
      case Family::A2odd:
      case Family::D: {
        for (long i = 1; i <= rd.l; ++i) etas.push_back(eps[static_cast<std::size_t>(i)]);
        for (long i = rd.l; i >= 1; --i) etas.push_back(-eps[static_cast<std::size_t>(i)]);
        break;
      }
      case Family::D2: {
        for (long i = 1; i <= rd.l; ++i) etas.push_back(eps[static_cast<std::size_t>(i)]);
        etas.push_back(rd.zeroVec());
        for (long i = rd.l; i >= 1; --i) etas.push_back(-eps[static_cast<std::size_t>(i)]);
        etas.push_back(rd.zeroVec());
        break;
      }
    }
    rd.N = static_cast<long>(etas.size());
    rd.eta.clear();
    rd.eta.push_back(rd.zeroVec());  // index 0 unused
    for (auto& e : etas) rd.eta.push_back(std::move(e));
  }

  // D = smallest positive integer with D*(eta_i|eta_j) integral for all i,j
  {
    BigInt lcmDen(1);
    for (long i = 1; i <= rd.N; ++i)
      for (long j = i; j <= rd.N; ++j) {
        BigInt den = rd.pair(rd.eta[static_cast<std::size_t>(i)],
                             rd.eta[static_cast<std::size_t>(j)])
                         .get_den();
        lcmDen = lcmDen / intGcd(lcmDen, den) * den;
      }
    check(lcmDen.fits_slong_p(), "buildDatum: D overflow");
    rd.D = lcmDen.get_si();
  }

  return rd;
}

}  // namespace qaffine
