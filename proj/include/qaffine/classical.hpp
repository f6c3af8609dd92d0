#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qaffine/rsolver.hpp"

namespace qaffine {

// Weight-graded coefficients of the classical r matrix on V x V, built by an
// independent recursion over the rationals. Serves as the oracle for the
// first-order behaviour of the solved R matrix at s = 1.
struct ClassicalR {
  AffineType type{Family::A, 1};
  long K = 0;
  long N = 0;
  std::map<MuCoords, SpMat> r;  // mu > 0, constant rational entries
  SpMat r0;
};

namespace detail {

inline SpMat specializeMat(const SpMat& m, const BigRat& s0) {
  SpMat out(m.rows(), m.cols());
  m.forEach([&](long i, long j, const QScalar& v) {
    BigRat val = v.specialize(s0);
    if (val != 0) out.set(i, j, QScalar(val));
  });
  return out;
}

class ClassicalSolver {
 public:
  ClassicalSolver(const AffineType& t, long K)
      : type_(t), K_(K), rep_(buildRep(t)), inv_(invariantVector(t)), N_(rep_.N) {
    const RootDatum& rd = rep_.datum;
    for (long i = 0; i <= rd.l; ++i) {
      eDot_.push_back(specializeMat(rep_.e[static_cast<std::size_t>(i)], BigRat(1)));
      fDot_.push_back(specializeMat(rep_.f[static_cast<std::size_t>(i)], BigRat(1)));
    }
    wDot_ = specializeMat(inv_.w, BigRat(1));
    twisted_ = t.family == Family::A2even || t.family == Family::A2odd;
    for (long a = 1; a <= N_; ++a)
      for (long b = 1; b <= N_; ++b) {
        LatticeVec diff = rd.eta[static_cast<std::size_t>(a)] -
                          rd.eta[static_cast<std::size_t>(b)];
        diffPairs_[lift(diff)].emplace_back(a, b);
      }
  }

  ClassicalR run() {
    ClassicalR out;
    out.type = type_;
    out.K = K_;
    out.N = N_;
    out.r0 = buildR0();
    for (long n = 0; n <= K_; ++n)
      for (const ClassWork& w : classesAtOrder(n)) solveClass(w, out);
    return out;
  }

 private:
  struct ClassWork {
    MuCoords mu;
    std::vector<std::pair<long, long>> first, second;
  };

  AffineType type_;
  long K_;
  EvalRep rep_;
  InvariantVec inv_;
  long N_;
  bool twisted_ = false;
  std::vector<SpMat> eDot_, fDot_;
  SpMat wDot_;
  std::map<std::vector<BigRat>, std::vector<std::pair<long, long>>> diffPairs_;

  std::vector<BigRat> lift(const LatticeVec& v) const {
    const RootDatum& rd = rep_.datum;
    check(v[0] == 0 && v[rd.basisDim() - 1] == 0,
          "classical_oracle: weight outside classical span");
    std::vector<BigRat> k;
    for (long i = 1; i <= rd.l; ++i) k.push_back(v[static_cast<std::size_t>(i)]);
    return k;
  }

  SpMat buildR0() const {
    const RootDatum& rd = rep_.datum;
    SpMat m(N_ * N_, N_ * N_);
    for (long i = 1; i <= N_; ++i)
      for (long j = 1; j <= N_; ++j) {
        BigRat v = rd.pair(rd.eta[static_cast<std::size_t>(i)],
                           rd.eta[static_cast<std::size_t>(j)]) /
                   BigRat(2);
        if (v != 0) m.set((i - 1) * N_ + j, (i - 1) * N_ + j, QScalar(v));
      }
    return m;
  }

  std::vector<ClassWork> classesAtOrder(long n) const {
    const RootDatum& rd = rep_.datum;
    std::map<MuCoords, ClassWork> found;
    for (const auto& [kvec, pairs] : diffPairs_) {
      MuCoords mu(static_cast<std::size_t>(rd.l + 1));
      mu[0] = n;
      bool ok = true;
      for (long i = 1; i <= rd.l; ++i) {
        BigRat c = BigRat(n * rd.marks[static_cast<std::size_t>(i)]) +
                   kvec[static_cast<std::size_t>(i - 1)];
        check(c.get_den() == 1, "classical_oracle: non-integral lift");
        if (c.get_num() < 0) {
          ok = false;
          break;
        }
        mu[static_cast<std::size_t>(i)] = c.get_num().get_si();
      }
      if (!ok || muHeight(mu) == 0) continue;
      ClassWork w;
      w.mu = mu;
      w.first = pairs;
      std::vector<BigRat> neg;
      for (const BigRat& x : kvec) neg.push_back(-x);
      w.second = diffPairs_.at(neg);
      found.emplace(std::move(mu), std::move(w));
    }
    std::vector<ClassWork> out;
    for (auto& [mu, w] : found) out.push_back(std::move(w));
    std::stable_sort(out.begin(), out.end(),
                     [](const ClassWork& a, const ClassWork& b) {
                       long ha = muHeight(a.mu), hb = muHeight(b.mu);
                       return ha != hb ? ha < hb : a.mu < b.mu;
                     });
    return out;
  }

  SpMat resolvedR(const ClassicalR& out, const MuCoords& mu) const {
    long nn = N_ * N_;
    for (long c : mu)
      if (c < 0) return SpMat(nn, nn);
    check(muHeight(mu) > 0, "classical_oracle: recursion reached r_0");
    auto it = out.r.find(mu);
    return it == out.r.end() ? SpMat(nn, nn) : it->second;
  }

  void solveClass(const ClassWork& w, ClassicalR& out) {
    const RootDatum& rd = rep_.datum;
    long nn = N_ * N_;

    if (muHeight(w.mu) == 1) {
      long i = 0;
      for (std::size_t j = 0; j < w.mu.size(); ++j)
        if (w.mu[j] == 1) i = static_cast<long>(j);
      SpMat anchor = QScalar(rd.d[static_cast<std::size_t>(i)]) *
                     kron(eDot_[static_cast<std::size_t>(i)],
                          fDot_[static_cast<std::size_t>(i)]);
      verifyAnchor(w, anchor, i);
      if (!anchor.isZero()) out.r.emplace(w.mu, std::move(anchor));
      return;
    }

    auto unknownIndex = [&](std::size_t fi, std::size_t si) {
      return static_cast<long>(fi * w.second.size() + si);
    };
    long nu = static_cast<long>(w.first.size() * w.second.size());
    std::map<std::pair<long, long>, std::map<long, QScalar>> rows;
    std::map<std::pair<long, long>, QScalar> rhsVal;
    long eqTag = 0;

    auto addEquations = [&](bool eFamily, long i, const SpMat& rhsMat) {
      const SpMat& gen = eFamily ? eDot_[static_cast<std::size_t>(i)]
                                 : fDot_[static_cast<std::size_t>(i)];
      long tag = eqTag++;
      auto pos = [&](long r1, long r2, long c1, long c2) {
        return std::make_pair(tag * nn * nn + ((r1 - 1) * N_ + r2 - 1) * nn +
                                  (c1 - 1) * N_ + c2,
                              0L);
      };
      for (std::size_t fi = 0; fi < w.first.size(); ++fi)
        for (std::size_t si = 0; si < w.second.size(); ++si) {
          long s = unknownIndex(fi, si);
          long a = w.first[fi].first, b = w.first[fi].second;
          long c = w.second[si].first, d = w.second[si].second;
          if (eFamily) {
            gen.forEach([&](long x, long y, const QScalar& v) {
              if (y == c) rows[pos(a, x, b, d)][s] += v;
              if (x == d) rows[pos(a, c, b, y)][s] -= v;
            });
          } else {
            gen.forEach([&](long x, long y, const QScalar& v) {
              if (y == a) rows[pos(x, c, b, d)][s] += v;
              if (x == b) rows[pos(a, c, y, d)][s] -= v;
            });
          }
        }
      rhsMat.forEach([&](long r, long c, const QScalar& v) {
        long r1 = (r - 1) / N_ + 1, r2 = (r - 1) % N_ + 1;
        long c1 = (c - 1) / N_ + 1, c2 = (c - 1) % N_ + 1;
        auto key = pos(r1, r2, c1, c2);
        (void)rows[key];
        rhsVal[key] += v;
      });
    };

    for (long i = 0; i <= rd.l; ++i) {
      MuCoords prev = w.mu;
      prev[static_cast<std::size_t>(i)] -= 1;
      SpMat rm = resolvedR(out, prev);
      // [1 x e_i, r_mu] = -[e_i x 1, r_prev];  [f_i x 1, r_mu] = -[1 x f_i, r_prev]
      SpMat ei = kron(eDot_[static_cast<std::size_t>(i)], SpMat::identity(N_));
      SpMat fi = kron(SpMat::identity(N_), fDot_[static_cast<std::size_t>(i)]);
      addEquations(true, i, rm * ei - ei * rm);
      addEquations(false, i, rm * fi - fi * rm);
    }
    addNormalizationRows(w, rows, rhsVal, eqTag);

    LinearSystem sys(nu, 1);
    for (auto& [key, lhsRow] : rows) {
      QScalar rv = rhsVal.count(key) ? rhsVal[key] : QScalar();
      sys.addRow(lhsRow, {rv});
    }
    LinearSolution sol = solveLinear(sys);
    if (!sol.consistent || !sol.kernel.empty())
      fail("classical_oracle: class at mu=" + muLabel(w.mu) +
           (sol.consistent ? " underdetermined" : " inconsistent"));
    SpMat m(nn, nn);
    for (std::size_t fi = 0; fi < w.first.size(); ++fi)
      for (std::size_t si = 0; si < w.second.size(); ++si) {
        const QScalar& v =
            sol.particular[0][static_cast<std::size_t>(unknownIndex(fi, si))];
        if (!v.isZero())
          m.set((w.first[fi].first - 1) * N_ + w.second[si].first,
                (w.first[fi].second - 1) * N_ + w.second[si].second, v);
      }
    if (!m.isZero()) out.r.emplace(w.mu, std::move(m));
  }

  // Stack the trace condition for the twisted families, and the contracted
  // invariant-vector condition otherwise.
  void addNormalizationRows(
      const ClassWork& w,
      std::map<std::pair<long, long>, std::map<long, QScalar>>& rows,
      std::map<std::pair<long, long>, QScalar>& rhsVal, long eqTag) const {
    auto unknownIndex = [&](std::size_t fi, std::size_t si) {
      return static_cast<long>(fi * w.second.size() + si);
    };
    if (twisted_) {
      for (std::size_t fi = 0; fi < w.first.size(); ++fi) {
        if (w.first[fi].first != w.first[fi].second) continue;
        for (std::size_t si = 0; si < w.second.size(); ++si) {
          long c = w.second[si].first, d = w.second[si].second;
          rows[{eqTag * 1000000L + (c - 1) * N_ + d, 0L}]
              [unknownIndex(fi, si)] += QScalar(1L);
        }
      }
      return;
    }
    long M = inv_.M;
    long total = 1;
    for (long m = 0; m <= M; ++m) total *= N_;
    std::vector<long> dims(static_cast<std::size_t>(M + 1), N_);
    SpMat w0(total, N_);
    wDot_.forEach([&](long iw, long one, const QScalar& v) {
      (void)one;
      for (long c = 1; c <= N_; ++c) w0.set((iw - 1) * N_ + c, c, v);
    });
    for (std::size_t fi = 0; fi < w.first.size(); ++fi)
      for (std::size_t si = 0; si < w.second.size(); ++si) {
        SpMat unit = SpMat::unit(N_ * N_, N_ * N_,
                                 (w.first[fi].first - 1) * N_ + w.second[si].first,
                                 (w.first[fi].second - 1) * N_ + w.second[si].second,
                                 QScalar(1L));
        for (long k = 1; k <= M; ++k) {
          SpMat applied = embedLegs(unit, dims, {k, M + 1}) * w0;
          applied.forEach([&](long r, long c, const QScalar& v) {
            rows[{eqTag * 1000000L + (r - 1) * N_ + c, 1L}]
                [unknownIndex(fi, si)] += v;
          });
        }
      }
  }

  // the height-one values must satisfy every recursion equation and the
  // normalization once the lower class is zero or r_0 independent
  void verifyAnchor(const ClassWork& w, const SpMat& anchor, long node) const {
    const RootDatum& rd = rep_.datum;
    for (long i = 0; i <= rd.l; ++i) {
      if (i == node) continue;
      SpMat ei1 = kron(SpMat::identity(N_), eDot_[static_cast<std::size_t>(i)]);
      SpMat fi1 = kron(fDot_[static_cast<std::size_t>(i)], SpMat::identity(N_));
      check((ei1 * anchor - anchor * ei1).isZero(),
            "classical_oracle: anchor fails commutation at mu=" + muLabel(w.mu));
      check((fi1 * anchor - anchor * fi1).isZero(),
            "classical_oracle: anchor fails commutation at mu=" + muLabel(w.mu));
    }
    if (twisted_) {
      SpMat tr(N_, N_);
      anchor.forEach([&](long r, long c, const QScalar& v) {
        long r1 = (r - 1) / N_ + 1, r2 = (r - 1) % N_ + 1;
        long c1 = (c - 1) / N_ + 1, c2 = (c - 1) % N_ + 1;
        if (r1 == c1) tr.accumulate(r2, c2, v);
      });
      check(tr.isZero(), "classical_oracle: anchor fails trace condition");
      return;
    }
    long M = inv_.M;
    long total = 1;
    for (long m = 0; m <= M; ++m) total *= N_;
    std::vector<long> dims(static_cast<std::size_t>(M + 1), N_);
    SpMat w0(total, N_);
    wDot_.forEach([&](long iw, long one, const QScalar& v) {
      (void)one;
      for (long c = 1; c <= N_; ++c) w0.set((iw - 1) * N_ + c, c, v);
    });
    SpMat sum(total, N_);
    for (long k = 1; k <= M; ++k)
      sum = sum + embedLegs(anchor, dims, {k, M + 1}) * w0;
    check(sum.isZero(),
          "classical_oracle: anchor fails invariant contraction at mu=" +
              muLabel(w.mu));
  }
};

}  // namespace detail

inline ClassicalR classicalOracle(const AffineType& t, long K) {
  return detail::ClassicalSolver(t, K).run();
}

// r(z) = r_0 + sum_{mu > 0} r_mu z^{ord(mu)}, truncated at K
inline MatSeries classicalSeries(const ClassicalR& cl) {
  long nn = cl.N * cl.N;
  MatSeries s(nn, nn, cl.K);
  s.setCoeff(0, cl.r0);
  for (const auto& [mu, m] : cl.r) {
    long n = muOrder(mu);
    check(n <= cl.K, "classicalSeries: class beyond truncation");
    s.setCoeff(n, s.coeff(n) + m);
  }
  return s;
}

struct ClassicalLimitReport {
  bool pass = true;
  std::vector<std::string> failures;
};

// (1 x 1 - Rcal(z)) / (q - q^{-1}) specialized at s = 1 must equal
// r(z) - r_0 order by order; entries are checked pole-free before
// specialization.
inline ClassicalLimitReport checkClassicalLimit(const ThetaArtifact& art,
                                                const ClassicalR& cl) {
  ClassicalLimitReport rep;
  check(art.K == cl.K && art.rep.N == cl.N,
        "classical limit: mismatched artifacts");
  long nn = cl.N * cl.N;
  MatSeries th = thetaSeries(art);
  MatSeries target = classicalSeries(cl);
  QScalar q = art.rep.datum.q();
  QScalar denom = q - q.inverse();
  for (long n = 0; n <= art.K; ++n) {
    SpMat lhs = (n == 0 ? SpMat::identity(nn) : SpMat(nn, nn)) - th.coeff(n);
    SpMat want = target.coeff(n) - (n == 0 ? cl.r0 : SpMat(nn, nn));
    SpMat got(nn, nn);
    bool bad = false;
    lhs.forEach([&](long i, long j, const QScalar& v) {
      QScalar d = v / denom;
      if (d.den().evalAt(BigRat(1)) == 0) {
        rep.pass = false;
        bad = true;
        rep.failures.push_back("pole at s=1, order " + std::to_string(n));
        return;
      }
      BigRat val = d.specialize(BigRat(1));
      if (val != 0) got.set(i, j, QScalar(val));
    });
    if (bad) continue;
    if (!(got == want)) {
      rep.pass = false;
      rep.failures.push_back("order " + std::to_string(n) + " mismatch");
    }
  }
  return rep;
}

}  // namespace qaffine
