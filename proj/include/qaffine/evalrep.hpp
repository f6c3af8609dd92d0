#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "qaffine/rootdata.hpp"
#include "qaffine/spmat.hpp"

namespace qaffine {

// N-dimensional evaluation module (rho, V) with generator matrices indexed
// 0..l. Generators split as e[i] = ePlus[i] + eMinus[i]; where no split is
// defined the full matrix sits in the plus slot and the minus slot is zero.
struct EvalRep {
  RootDatum datum;
  long N = 0;
  std::vector<SpMat> e, f, ePlus, eMinus, fPlus, fMinus;
  SpMat G;  // diag(1,...,1,-1), D2 family only; empty otherwise

  // k_lambda acts diagonally with entries q^((lambda|eta_j))
  SpMat kAction(const LatticeVec& lam) const {
    SpMat k(N, N);
    for (long j = 1; j <= N; ++j)
      k.set(j, j, datum.qPow(datum.pair(lam, datum.eta[static_cast<std::size_t>(j)])));
    return k;
  }
  SpMat kGen(long i) const { return kAction(datum.alpha(i)); }
};

namespace detail {

// Classical-node matrices shared by the orthogonal-type patterns. The
// pattern occupies indices 1..2l+1 of an ambient N-dimensional space.
// The node-l split carries x = 1 on e pieces and y on f pieces.
inline void fillPatternB(long l, long N, const QScalar& y, std::vector<SpMat>& eP,
                         std::vector<SpMat>& eM, std::vector<SpMat>& fP,
                         std::vector<SpMat>& fM) {
  long nb = 2 * l + 1;
  for (long i = 1; i < l; ++i) {
    eP[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i, i + 1);
    eM[static_cast<std::size_t>(i)] = SpMat::unit(N, N, nb - i, nb + 1 - i, QScalar(-1L));
    fP[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i + 1, i);
    fM[static_cast<std::size_t>(i)] = SpMat::unit(N, N, nb + 1 - i, nb - i, QScalar(-1L));
  }
  eP[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l, l + 1);
  eM[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l + 1, l + 2, QScalar(-1L));
  fP[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l + 1, l, y);
  fM[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l + 2, l + 1, -y);
}

// Symplectic-type pattern on indices 1..2l; node l is a single unit.
inline void fillPatternC(long l, long N, std::vector<SpMat>& eP,
                         std::vector<SpMat>& eM, std::vector<SpMat>& fP,
                         std::vector<SpMat>& fM) {
  for (long i = 1; i < l; ++i) {
    eP[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i, i + 1);
    eM[static_cast<std::size_t>(i)] = SpMat::unit(N, N, N - i, N + 1 - i, QScalar(-1L));
    fP[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i + 1, i);
    fM[static_cast<std::size_t>(i)] = SpMat::unit(N, N, N + 1 - i, N - i, QScalar(-1L));
  }
  eP[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l, l + 1);
  fP[static_cast<std::size_t>(l)] = SpMat::unit(N, N, l + 1, l);
}

inline SpMat signDiag(long N, const std::vector<long>& signs) {
  SpMat m(N, N);
  for (long j = 1; j <= N; ++j)
    m.set(j, j, QScalar(signs[static_cast<std::size_t>(j - 1)]));
  return m;
}

}  // namespace detail

inline EvalRep buildRep(const AffineType& t) {
  EvalRep rep;
  rep.datum = buildDatum(t);
  const RootDatum& rd = rep.datum;
  long l = rd.l, N = rd.N;
  rep.N = N;
  std::size_t n = static_cast<std::size_t>(l + 1);
  rep.ePlus.assign(n, SpMat(N, N));
  rep.eMinus.assign(n, SpMat(N, N));
  rep.fPlus.assign(n, SpMat(N, N));
  rep.fMinus.assign(n, SpMat(N, N));

  switch (t.family) {
    case Family::A: {
      for (long i = 1; i <= l; ++i) {
        rep.ePlus[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i, i + 1);
        rep.fPlus[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i + 1, i);
      }
      rep.ePlus[0] = SpMat::unit(N, N, N, 1);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N);
      break;
    }
    case Family::B: {
      detail::fillPatternB(l, N, rd.qInt(2, l), rep.ePlus, rep.eMinus, rep.fPlus,
                           rep.fMinus);
      rep.ePlus[0] = SpMat::unit(N, N, N - 1, 1) - SpMat::unit(N, N, N, 2);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N - 1) - SpMat::unit(N, N, 2, N);
      break;
    }
    case Family::C: {
      detail::fillPatternC(l, N, rep.ePlus, rep.eMinus, rep.fPlus, rep.fMinus);
      rep.ePlus[0] = SpMat::unit(N, N, N, 1);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N);
      break;
    }
    case Family::D: {
      for (long i = 1; i < l; ++i) {
        rep.ePlus[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i, i + 1);
        rep.eMinus[static_cast<std::size_t>(i)] =
            SpMat::unit(N, N, N - i, N + 1 - i, QScalar(-1L));
        rep.fPlus[static_cast<std::size_t>(i)] = SpMat::unit(N, N, i + 1, i);
        rep.fMinus[static_cast<std::size_t>(i)] =
            SpMat::unit(N, N, N + 1 - i, N - i, QScalar(-1L));
      }
      rep.ePlus[static_cast<std::size_t>(l)] =
          SpMat::unit(N, N, l - 1, l + 1) - SpMat::unit(N, N, l, l + 2);
      rep.fPlus[static_cast<std::size_t>(l)] =
          SpMat::unit(N, N, l + 1, l - 1) - SpMat::unit(N, N, l + 2, l);
      rep.ePlus[0] = SpMat::unit(N, N, N - 1, 1) - SpMat::unit(N, N, N, 2);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N - 1) - SpMat::unit(N, N, 2, N);
      break;
    }
    case Family::A2even: {
      detail::fillPatternB(l, N, rd.qInt(2, l), rep.ePlus, rep.eMinus, rep.fPlus,
                           rep.fMinus);
      std::vector<long> signs(static_cast<std::size_t>(N), 1);
      for (long k = 1; k <= l; ++k)
        signs[static_cast<std::size_t>(l + k)] = (k % 2 == 0) ? 1 : -1;
      SpMat m = detail::signDiag(N, signs);
      for (long i = 1; i <= l; ++i) {
        std::size_t ii = static_cast<std::size_t>(i);
        rep.ePlus[ii] = m * rep.ePlus[ii] * m;
        rep.eMinus[ii] = m * rep.eMinus[ii] * m;
        rep.fPlus[ii] = m * rep.fPlus[ii] * m;
        rep.fMinus[ii] = m * rep.fMinus[ii] * m;
      }
      rep.ePlus[0] = SpMat::unit(N, N, N, 1);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N);
      break;
    }
    case Family::A2odd: {
      detail::fillPatternC(l, N, rep.ePlus, rep.eMinus, rep.fPlus, rep.fMinus);
      std::vector<long> signs(static_cast<std::size_t>(N), 1);
      for (long k = 1; k <= l - 1; ++k)
        signs[static_cast<std::size_t>(l + k)] = (k % 2 == 0) ? 1 : -1;
      SpMat m = detail::signDiag(N, signs);
      for (long i = 1; i <= l; ++i) {
        std::size_t ii = static_cast<std::size_t>(i);
        rep.ePlus[ii] = m * rep.ePlus[ii] * m;
        rep.eMinus[ii] = m * rep.eMinus[ii] * m;
        rep.fPlus[ii] = m * rep.fPlus[ii] * m;
        rep.fMinus[ii] = m * rep.fMinus[ii] * m;
      }
      rep.ePlus[0] = SpMat::unit(N, N, N - 1, 1) + SpMat::unit(N, N, N, 2);
      rep.fPlus[0] = SpMat::unit(N, N, 1, N - 1) + SpMat::unit(N, N, 2, N);
      break;
    }
    case Family::D2: {
      detail::fillPatternB(l, N, rd.qInt(2, l), rep.ePlus, rep.eMinus, rep.fPlus,
                           rep.fMinus);
      rep.ePlus[0] = SpMat::unit(N, N, N, 1) + SpMat::unit(N, N, N - 1, N);
      rep.fPlus[0] =
          rd.qInt(2, 0) * (SpMat::unit(N, N, 1, N) + SpMat::unit(N, N, N, N - 1));
      std::vector<long> signs(static_cast<std::size_t>(N), 1);
      signs[static_cast<std::size_t>(N - 1)] = -1;
      rep.G = detail::signDiag(N, signs);
      break;
    }
  }

  rep.e.reserve(n);
  rep.f.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    rep.e.push_back(rep.ePlus[i] + rep.eMinus[i]);
    rep.f.push_back(rep.fPlus[i] + rep.fMinus[i]);
  }
  return rep;
}

// Spectral twist tau_a: scales e_0 by a and f_0 by a^-1.
inline EvalRep twist(const EvalRep& rep, const QScalar& a) {
  check(!a.isZero(), "twist: zero parameter");
  EvalRep r = rep;
  QScalar ainv = a.inverse();
  r.e[0] = a * r.e[0];
  r.ePlus[0] = a * r.ePlus[0];
  r.eMinus[0] = a * r.eMinus[0];
  r.f[0] = ainv * r.f[0];
  r.fPlus[0] = ainv * r.fPlus[0];
  r.fMinus[0] = ainv * r.fMinus[0];
  return r;
}

// Basis vector of the trivial U' subrepresentation of the M-fold twisted
// tensor product, plus the two-fold coefficient matrix J where defined.
struct InvariantVec {
  long M = 0;
  std::vector<QScalar> evalPoints;
  SpMat w;  // column vector of dimension N^M
  SpMat J;  // N x N for the two-fold types other than A; else empty
};

inline InvariantVec invariantVector(const AffineType& t) {
  RootDatum rd = buildDatum(t);
  long l = rd.l, N = rd.N;
  InvariantVec iv;
  iv.M = rd.M();
  iv.evalPoints = rd.evalPoints();
  QScalar q = rd.q();

  if (t.family == Family::A) {
    long dim = 1;
    for (long m = 0; m < iv.M; ++m) dim *= N;
    iv.w = SpMat(dim, 1);
    std::vector<long> perm(static_cast<std::size_t>(N));
    for (long i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
    do {
      long inv = 0;
      for (std::size_t a = 0; a < perm.size(); ++a)
        for (std::size_t b = a + 1; b < perm.size(); ++b)
          if (perm[a] > perm[b]) ++inv;
      long index = 0;
      for (std::size_t m = 0; m < perm.size(); ++m) index = index * N + (perm[m] - 1);
      iv.w.set(index + 1, 1, (-q).pow(inv));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return iv;
  }

  std::vector<QScalar> u(static_cast<std::size_t>(N + 1));
  auto sgn = [](long k) { return k % 2 == 0 ? 1L : -1L; };
  switch (t.family) {
    case Family::B:
      for (long i = 1; i <= l; ++i) u[static_cast<std::size_t>(i)] = q.pow(-(2 * (l - i) + 1));
      u[static_cast<std::size_t>(l + 1)] = q;
      for (long k = 1; k <= l; ++k) u[static_cast<std::size_t>(l + 1 + k)] = q.pow(2 * k - 1);
      break;
    case Family::C:
      for (long i = 1; i <= l; ++i) u[static_cast<std::size_t>(i)] = -q.pow(-(l + 1 - i));
      for (long k = 1; k <= l; ++k) u[static_cast<std::size_t>(l + k)] = q.pow(k);
      break;
    case Family::D:
      for (long i = 1; i <= l; ++i) u[static_cast<std::size_t>(i)] = q.pow(-(l - i));
      for (long k = 1; k <= l; ++k) u[static_cast<std::size_t>(l + k)] = q.pow(k - 1);
      break;
    case Family::A2even:
      for (long i = 1; i <= l; ++i)
        u[static_cast<std::size_t>(i)] = QScalar(sgn(l + 1 - i)) * q.pow(-(2 * (l - i) + 1));
      u[static_cast<std::size_t>(l + 1)] = q;
      for (long k = 1; k <= l; ++k)
        u[static_cast<std::size_t>(l + 1 + k)] = QScalar(sgn(k)) * q.pow(2 * k - 1);
      break;
    case Family::A2odd:
      for (long i = 1; i <= l; ++i)
        u[static_cast<std::size_t>(i)] = QScalar(sgn(l + 1 - i)) * q.pow(-(l + 1 - i));
      for (long k = 1; k <= l; ++k)
        u[static_cast<std::size_t>(l + k)] = QScalar(sgn(k - 1)) * q.pow(k);
      break;
    case Family::D2:
      for (long i = 1; i <= l; ++i) u[static_cast<std::size_t>(i)] = q.pow(-(2 * (l - i) + 1));
      u[static_cast<std::size_t>(l + 1)] = q;
      for (long k = 1; k <= l; ++k) u[static_cast<std::size_t>(l + 1 + k)] = q.pow(2 * k - 1);
      u[static_cast<std::size_t>(N)] = -q;
      break;
    case Family::A:
      break;
  }

  iv.J = SpMat(N, N);
  if (t.family == Family::D2) {
    for (long i = 1; i <= N - 1; ++i)
      if (N - i >= 1) iv.J.set(i, N - i, u[static_cast<std::size_t>(i)]);
    iv.J.set(N, N, u[static_cast<std::size_t>(N)]);
  } else {
    for (long i = 1; i <= N; ++i) iv.J.set(i, N + 1 - i, u[static_cast<std::size_t>(i)]);
  }
  iv.w = SpMat(N * N, 1);
  iv.J.forEach([&](long i, long j, const QScalar& v) { iv.w.set((i - 1) * N + j, 1, v); });
  return iv;
}

namespace detail {

// M-fold coproduct action on the twisted tensor product:
//   e_i -> sum_m k_i x..x k_i x a_m^{d_i0} e_i x 1 x..x 1
//   f_i -> sum_m 1 x..x 1 x a_m^{-d_i0} f_i x k_i^-1 x..x k_i^-1
inline SpMat coproductGen(const EvalRep& rep, long i, bool isE,
                          const std::vector<QScalar>& pts) {
  long N = rep.N;
  long M = static_cast<long>(pts.size());
  SpMat ki = rep.kGen(i);
  SpMat kiInv = rep.kAction(rep.datum.zeroVec() - rep.datum.alpha(i));
  long dim = 1;
  for (long m = 0; m < M; ++m) dim *= N;
  SpMat total(dim, dim);
  for (long m = 1; m <= M; ++m) {
    SpMat term = SpMat::identity(1);
    for (long slot = 1; slot <= M; ++slot) {
      const std::size_t gi = static_cast<std::size_t>(i);
      SpMat factor;
      if (slot < m)
        factor = isE ? ki : SpMat::identity(N);
      else if (slot == m) {
        QScalar a = pts[static_cast<std::size_t>(slot - 1)];
        factor = isE ? (i == 0 ? a : QScalar(1L)) * rep.e[gi]
                     : (i == 0 ? a.inverse() : QScalar(1L)) * rep.f[gi];
      } else
        factor = isE ? SpMat::identity(N) : kiInv;
      term = kron(term, factor);
    }
    total = total + term;
  }
  return total;
}

}  // namespace detail

struct SelfcheckResult {
  bool ok = true;
  bool wCheckRun = false;
  std::vector<std::string> failures;

  void flag(const std::string& what) {
    ok = false;
    failures.push_back(what);
  }
};

// Exact identity checks on a built representation: transpose duality,
// weight conjugation, e-f commutators, both q-Serre families, k_delta = 1,
// the D2 block structure, and annihilation of w in the twisted M-fold
// tensor product.
inline SelfcheckResult selfcheck(const EvalRep& rep) {
  SelfcheckResult res;
  const RootDatum& rd = rep.datum;
  long l = rd.l, N = rep.N;

  // duality f_i = c ^t e_i; c = [2] at the split node of the orthogonal
  // patterns and at the affine node of D2, otherwise 1
  for (long i = 0; i <= l; ++i) {
    QScalar c(1L);
    bool patternBNode =
        (rd.type.family == Family::B || rd.type.family == Family::A2even ||
         rd.type.family == Family::D2) && i == l;
    if (patternBNode) c = rd.qInt(2, l);
    if (rd.type.family == Family::D2 && i == 0) c = rd.qInt(2, 0);
    if (!(rep.f[static_cast<std::size_t>(i)] ==
          c * rep.e[static_cast<std::size_t>(i)].transpose()))
      res.flag("duality i=" + std::to_string(i));
  }

  // weight conjugation k_lambda e_i k_lambda^-1 = q^((lambda|alpha_i)) e_i
  std::vector<std::pair<std::string, LatticeVec>> lams;
  for (long j = 0; j <= l; ++j) lams.push_back({"alpha_" + std::to_string(j), rd.alpha(j)});
  lams.push_back({"p*omega_1", BigRat(rd.p) * rd.omega1Vec()});
  for (const auto& [name, lam] : lams) {
    SpMat k = rep.kAction(lam);
    SpMat kInv = rep.kAction(rd.zeroVec() - lam);
    for (long i = 0; i <= l; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      QScalar c = rd.qPow(rd.pair(lam, rd.alpha(i)));
      if (!(k * rep.e[ii] * kInv == c * rep.e[ii]))
        res.flag("weight e i=" + std::to_string(i) + " lambda=" + name);
      if (!(k * rep.f[ii] * kInv == c.inverse() * rep.f[ii]))
        res.flag("weight f i=" + std::to_string(i) + " lambda=" + name);
    }
  }

  // [e_i, f_j] = delta_ij (k_i - k_i^-1) / (q_i - q_i^-1)
  for (long i = 0; i <= l; ++i) {
    for (long j = 0; j <= l; ++j) {
      std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      SpMat lhs = rep.e[ii] * rep.f[jj] - rep.f[jj] * rep.e[ii];
      SpMat rhs(N, N);
      if (i == j) {
        QScalar qi = rd.qi(i);
        QScalar denom = (qi - qi.inverse()).inverse();
        rhs = denom * (rep.kGen(i) - rep.kAction(rd.zeroVec() - rd.alpha(i)));
      }
      if (!(lhs == rhs))
        res.flag("commutator (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  // q-Serre: sum_r (-1)^r x_i^(r) x_j x_i^(1-a_ij-r) = 0 for i != j
  auto dividedPowers = [&](const SpMat& x, long i, long top) {
    std::vector<SpMat> pows{SpMat::identity(N)};
    for (long r = 1; r <= top; ++r) pows.push_back(pows.back() * x);
    for (long r = 2; r <= top; ++r)
      pows[static_cast<std::size_t>(r)] =
          rd.qFact(r, i).inverse() * pows[static_cast<std::size_t>(r)];
    return pows;
  };
  for (long i = 0; i <= l; ++i) {
    for (long j = 0; j <= l; ++j) {
      if (i == j) continue;
      long top = 1 - rd.cartan[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      std::size_t ii = static_cast<std::size_t>(i), jj = static_cast<std::size_t>(j);
      auto ePows = dividedPowers(rep.e[ii], i, top);
      auto fPows = dividedPowers(rep.f[ii], i, top);
      SpMat accE(N, N), accF(N, N);
      for (long r = 0; r <= top; ++r) {
        QScalar sign(r % 2 == 0 ? 1L : -1L);
        accE = accE + sign * (ePows[static_cast<std::size_t>(r)] * rep.e[jj] *
                              ePows[static_cast<std::size_t>(top - r)]);
        accF = accF + sign * (fPows[static_cast<std::size_t>(r)] * rep.f[jj] *
                              fPows[static_cast<std::size_t>(top - r)]);
      }
      if (!accE.isZero())
        res.flag("serre e (" + std::to_string(i) + "," + std::to_string(j) + ")");
      if (!accF.isZero())
        res.flag("serre f (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }

  if (!(rep.kAction(rd.delta()) == SpMat::identity(N))) res.flag("k_delta");

  if (rd.type.family == Family::D2) {
    for (long i = 1; i <= l; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      bool clean = true;
      for (const SpMat* m : {&rep.e[ii], &rep.f[ii]})
        m->forEach([&](long r, long c, const QScalar&) {
          if (r == N || c == N) clean = false;
        });
      if (!clean) res.flag("block i=" + std::to_string(i));
    }
    if (rep.G.get(N, N) != QScalar(-1L) || rep.G.get(1, 1) != QScalar(1L))
      res.flag("sign matrix");
  }

  // trivial subrepresentation: the coproduct action of every generator
  // kills w and every k_lambda fixes it
  InvariantVec iv = invariantVector(rd.type);
  double sizeEst = 1;
  for (long m = 0; m < iv.M; ++m) sizeEst *= static_cast<double>(N);
  if (sizeEst <= 100000.0) {
    res.wCheckRun = true;
    if (iv.w.isZero()) res.flag("w zero");
    for (long i = 0; i <= l; ++i) {
      if (!(detail::coproductGen(rep, i, true, iv.evalPoints) * iv.w).isZero())
        res.flag("w-ann e i=" + std::to_string(i));
      if (!(detail::coproductGen(rep, i, false, iv.evalPoints) * iv.w).isZero())
        res.flag("w-ann f i=" + std::to_string(i));
    }
    for (long j = 0; j <= l; ++j) {
      SpMat k1 = rep.kAction(rd.alpha(j));
      SpMat kt = SpMat::identity(1);
      for (long m = 0; m < iv.M; ++m) kt = kron(kt, k1);
      if (!(kt * iv.w == iv.w)) res.flag("w-eig alpha_" + std::to_string(j));
    }
  }
  return res;
}

// Audit fixture: one line per stored nonzero entry, canonical scalars.
inline std::string repFixture(const EvalRep& rep) {
  std::string out = "repfixture " + familyName(rep.datum.type.family) + " " +
                    std::to_string(rep.datum.type.rank) + "\n";
  auto dump = [&out](const std::string& tag, long i, const SpMat& m) {
    m.forEach([&](long r, long c, const QScalar& v) {
      out += tag + " " + std::to_string(i) + " " + std::to_string(r) + " " +
             std::to_string(c) + " " + v.str() + "\n";
    });
  };
  for (long i = 0; i < static_cast<long>(rep.e.size()); ++i) {
    dump("e", i, rep.e[static_cast<std::size_t>(i)]);
    dump("f", i, rep.f[static_cast<std::size_t>(i)]);
  }
  return out;
}

}  // namespace qaffine
