#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "qaffine/rootdata.hpp"

using namespace qaffine;

namespace {

const std::vector<AffineType> kAllTypes = {
    {Family::A, 1},      {Family::A, 2},     {Family::A, 3},
    {Family::B, 3},      {Family::B, 4},     {Family::C, 2},
    {Family::C, 3},      {Family::D, 4},     {Family::D, 5},
    {Family::A2even, 1}, {Family::A2even, 2}, {Family::A2odd, 3},
    {Family::A2odd, 4},  {Family::D2, 2},    {Family::D2, 3}};

const std::vector<AffineType> kMinimalTypes = {
    {Family::A, 1},      {Family::B, 3},    {Family::C, 2},  {Family::D, 4},
    {Family::A2even, 1}, {Family::A2odd, 3}, {Family::D2, 2}};

// Brute-force integer null vector oracle: smallest positive coprime vector
// with entries <= 6 satisfying M v = 0.
std::vector<long> bruteNull(const std::vector<std::vector<long>>& m) {
  std::size_t n = m.size();
  std::vector<long> v(n, 1);
  auto ok = [&]() {
    for (std::size_t i = 0; i < n; ++i) {
      long acc = 0;
      for (std::size_t j = 0; j < n; ++j) acc += m[i][j] * v[j];
      if (acc != 0) return false;
    }
    long g = 0;
    for (long x : v) g = std::gcd(g, x);
    return g == 1;
  };
  while (true) {
    if (ok()) return v;
    std::size_t i = 0;
    while (i < n && v[i] == 6) v[i++] = 1;
    REQUIRE(i < n);
    ++v[i];
  }
}

}  // namespace

TEST_CASE("marks and comarks match brute-force null vectors") {
  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    auto at = rd.cartan;
    for (std::size_t i = 0; i < at.size(); ++i)
      for (std::size_t j = 0; j < at.size(); ++j) at[i][j] = rd.cartan[j][i];
    CHECK(rd.marks == bruteNull(rd.cartan));
    CHECK(rd.comarks == bruteNull(at));
  }
}

TEST_CASE("datum invariants for all types") {
  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    std::size_t n = static_cast<std::size_t>(rd.l + 1);
    // null-vector identities
    for (std::size_t i = 0; i < n; ++i) {
      long row = 0, col = 0;
      for (std::size_t j = 0; j < n; ++j) {
        row += rd.cartan[i][j] * rd.marks[j];
        col += rd.comarks[j] * rd.cartan[j][i];
      }
      CHECK(row == 0);
      CHECK(col == 0);
    }
    // symmetrizability, coprimality, special entries
    long gm = 0, gc = 0, gd = 0;
    for (std::size_t i = 0; i < n; ++i) {
      gm = std::gcd(gm, rd.marks[i]);
      gc = std::gcd(gc, rd.comarks[i]);
      gd = std::gcd(gd, rd.d[i]);
      for (std::size_t j = 0; j < n; ++j)
        CHECK(rd.d[i] * rd.cartan[i][j] == rd.d[j] * rd.cartan[j][i]);
    }
    CHECK(gm == 1);
    CHECK(gc == 1);
    CHECK(gd == 1);
    CHECK(rd.marks[0] == 1);
    CHECK(rd.comarks[0] == (t.family == Family::A2even ? 2 : 1));
    CHECK(rd.hDual == std::accumulate(rd.comarks.begin(), rd.comarks.end(), 0L));
  }
}

TEST_CASE("frozen dual Coxeter numbers and substrate exponents") {
  auto h = [](Family f, long l) { return buildDatum({f, l}).hDual; };
  CHECK(h(Family::A, 1) == 2);
  CHECK(h(Family::A, 2) == 3);
  CHECK(h(Family::A, 3) == 4);
  CHECK(h(Family::B, 3) == 5);
  CHECK(h(Family::B, 4) == 7);
  CHECK(h(Family::C, 2) == 3);
  CHECK(h(Family::C, 3) == 4);
  CHECK(h(Family::D, 4) == 6);
  CHECK(h(Family::D, 5) == 8);
  CHECK(h(Family::A2even, 1) == 3);
  CHECK(h(Family::A2even, 2) == 5);
  CHECK(h(Family::A2odd, 3) == 6);
  CHECK(h(Family::A2odd, 4) == 8);
  CHECK(h(Family::D2, 2) == 4);
  CHECK(h(Family::D2, 3) == 6);

  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    if (t.family == Family::A) {
      CHECK(rd.D == t.rank + 1);
    } else {
      CHECK(rd.D == 1);
    }
  }
}

TEST_CASE("rank bounds rejected") {
  CHECK_THROWS_AS(buildDatum({Family::A, 0}), Error);
  CHECK_THROWS_AS(buildDatum({Family::B, 2}), Error);
  CHECK_THROWS_AS(buildDatum({Family::C, 1}), Error);
  CHECK_THROWS_AS(buildDatum({Family::D, 3}), Error);
  CHECK_THROWS_AS(buildDatum({Family::A2even, 0}), Error);
  CHECK_THROWS_AS(buildDatum({Family::A2odd, 2}), Error);
  CHECK_THROWS_AS(buildDatum({Family::D2, 1}), Error);
}

TEST_CASE("pairing examples and bilinear form properties") {
  RootDatum a1 = buildDatum({Family::A, 1});
  CHECK(a1.pair(a1.alpha(1), a1.alpha(1)) == BigRat(2));
  CHECK(a1.pair(a1.omega1Vec(), a1.omega1Vec()) == makeRat(BigInt(1), BigInt(2)));
  CHECK(a1.pair(a1.lambda0(), a1.lambda0()) == BigRat(0));
  CHECK(a1.pair(a1.alpha(0), a1.lambda0()) == BigRat(1));

  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    LatticeVec del = rd.delta();
    // delta is in the radical of the form restricted to the alpha span
    for (long i = 0; i <= rd.l; ++i) CHECK(rd.pair(del, rd.alpha(i)) == BigRat(0));
    CHECK(rd.pair(del, rd.omega1Vec()) == BigRat(0));
    CHECK(rd.pair(del, rd.lambda0()) == BigRat(rd.d[0] * rd.marks[0]));
    // omega_1 defining properties
    for (long j = 1; j <= rd.l; ++j) {
      BigRat expect = (j == 1) ? BigRat(rd.d[static_cast<std::size_t>(j)]) : BigRat(0);
      CHECK(rd.pair(rd.alpha(j), rd.omega1Vec()) == expect);
    }
    CHECK(rd.pair(rd.lambda0(), rd.omega1Vec()) == BigRat(0));
    // symmetry on a basis sample
    for (long i = 0; i <= rd.l + 1; ++i)
      for (long j = 0; j <= rd.l + 1; ++j) {
        LatticeVec x = i <= rd.l ? rd.alpha(i) : rd.lambda0();
        LatticeVec y = j <= rd.l ? rd.alpha(j) : rd.lambda0();
        CHECK(rd.pair(x, y) == rd.pair(y, x));
      }
  }
}

TEST_CASE("weight lists") {
  RootDatum a1 = buildDatum({Family::A, 1});
  CHECK(a1.N == 2);
  CHECK(a1.eta[1] == a1.omega1Vec());
  CHECK(a1.eta[2] == -a1.omega1Vec());

  RootDatum c2 = buildDatum({Family::C, 2});
  CHECK(c2.N == 4);
  LatticeVec e1 = c2.omega1Vec();
  LatticeVec e2 = e1 - c2.alpha(1);
  CHECK(c2.eta[1] == e1);
  CHECK(c2.eta[2] == e2);
  CHECK(c2.eta[3] == -e2);
  CHECK(c2.eta[4] == -e1);

  RootDatum d2 = buildDatum({Family::D2, 2});
  CHECK(d2.N == 6);
  CHECK(d2.eta[1] == d2.omega1Vec());
  CHECK(d2.eta[3].isZero());
  CHECK(d2.eta[6].isZero());
  CHECK(d2.eta[5] == -d2.omega1Vec());

  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    // eta_1 = p omega_1; consecutive differences are simple roots
    CHECK(rd.eta[1] == BigRat(rd.p) * rd.omega1Vec());
    for (long i = 1; i <= rd.l - 1; ++i)
      CHECK(rd.eta[static_cast<std::size_t>(i)] -
                rd.eta[static_cast<std::size_t>(i + 1)] ==
            rd.alpha(i));
    // expected N
    long expectN = 0;
    switch (t.family) {
      case Family::A: expectN = rd.l + 1; break;
      case Family::B:
      case Family::A2even: expectN = 2 * rd.l + 1; break;
      case Family::C:
      case Family::A2odd:
      case Family::D: expectN = 2 * rd.l; break;
      case Family::D2: expectN = 2 * rd.l + 2; break;
    }
    CHECK(rd.N == expectN);
    // palindromic symmetry (D2: on the first 2l+1 entries, with trailing zero)
    if (t.family == Family::D2) {
      long core = 2 * rd.l + 1;
      for (long i = 1; i <= core; ++i)
        CHECK(rd.eta[static_cast<std::size_t>(core + 1 - i)] ==
              -rd.eta[static_cast<std::size_t>(i)]);
      CHECK(rd.eta[static_cast<std::size_t>(rd.N)].isZero());
    } else if (t.family != Family::A) {
      for (long i = 1; i <= rd.N; ++i)
        CHECK(rd.eta[static_cast<std::size_t>(rd.N + 1 - i)] ==
              -rd.eta[static_cast<std::size_t>(i)]);
    }
    // sortedness: i < j whenever eta_i > eta_j, i.e. no pair i > j with
    // eta_i - eta_j in Q_+ \ {0}; applies within the irreducible part
    // (for D2 the final basis vector spans the appended trivial summand)
    long sortedN = t.family == Family::D2 ? rd.N - 1 : rd.N;
    for (long i = 1; i <= sortedN; ++i)
      for (long j = 1; j < i; ++j) {
        LatticeVec diff = rd.eta[static_cast<std::size_t>(i)] -
                          rd.eta[static_cast<std::size_t>(j)];
        CHECK(!(rd.inQPlus(diff) && !diff.isZero()));
      }
    // integrality needed by the T matrix and the substrate
    BigRat e11 = rd.pair(rd.eta[1], rd.eta[1]);
    for (long i = 1; i <= rd.N; ++i)
      for (long j = 1; j <= rd.N; ++j) {
        BigRat pij = rd.pair(rd.eta[static_cast<std::size_t>(i)],
                             rd.eta[static_cast<std::size_t>(j)]);
        BigRat diff = pij - e11;
        BigRat scaled = BigRat(rd.D) * pij;
        CHECK(diff.get_den() == 1);
        CHECK(scaled.get_den() == 1);
      }
  }
}

TEST_CASE("lattice memberships") {
  for (const AffineType& t : kAllTypes) {
    INFO(typeLabel(t));
    RootDatum rd = buildDatum(t);
    for (long i = 0; i <= rd.l; ++i) {
      CHECK(rd.inQ(rd.alpha(i)));
      CHECK(rd.inQPlus(rd.alpha(i)));
      CHECK(!rd.inQPlus(-rd.alpha(i)));
      CHECK(rd.inGamma(rd.alpha(i)));
    }
    CHECK(rd.inQPlus(rd.delta()));
    CHECK(!rd.inQ(rd.lambda0()));
    LatticeVec lamOverD0 = makeRat(BigInt(1), BigInt(rd.d[0])) * rd.lambda0();
    CHECK(rd.inSigma(lamOverD0));
    CHECK(rd.inGamma(lamOverD0));
    CHECK(!rd.inSigma(makeRat(BigInt(1), BigInt(2 * rd.d[0])) * rd.lambda0()));
    // eta_i = p omega_1 - (roots) lies in Gamma
    for (long i = 1; i <= rd.N; ++i)
      CHECK(rd.inGamma(rd.eta[static_cast<std::size_t>(i)]));
    LatticeVec pw = BigRat(rd.p) * rd.omega1Vec();
    CHECK(rd.inGamma(pw));
  }
  // A_1: omega_1 = alpha_1/2 is in Gamma (p=1) via m=1
  RootDatum a1 = buildDatum({Family::A, 1});
  CHECK(a1.inGamma(a1.omega1Vec()));
  CHECK(!a1.inSigma(a1.omega1Vec()));
  // A_2^(2): p=2, so omega_1 itself is not in Gamma
  RootDatum a22 = buildDatum({Family::A2even, 1});
  CHECK(a22.p == 2);
  CHECK(!a22.inGamma(a22.omega1Vec()));
  CHECK(a22.inGamma(BigRat(2) * a22.omega1Vec()));
}

TEST_CASE("sigma and evaluation points") {
  for (const AffineType& t : kMinimalTypes) {
    RootDatum rd = buildDatum(t);
    if (t.family == Family::A2even || t.family == Family::A2odd) {
      CHECK(rd.sigma == -1);
    } else {
      CHECK(rd.sigma == 1);
    }
    std::vector<QScalar> a = rd.evalPoints();
    if (t.family == Family::A) {
      CHECK(a.size() == static_cast<std::size_t>(rd.l + 1));
      CHECK(a[0].isOne());
      for (std::size_t m = 1; m < a.size(); ++m)
        CHECK(a[m] == rd.q().pow(-2 * static_cast<long>(m)));
    } else {
      CHECK(a.size() == 2);
      CHECK(a[0].isOne());
    }
  }
  // frozen values
  CHECK(buildDatum({Family::B, 3}).evalPoints()[1] == QScalar::sPow(-10));
  CHECK(buildDatum({Family::C, 2}).evalPoints()[1] == QScalar::sPow(-6));
  CHECK(buildDatum({Family::D, 4}).evalPoints()[1] == QScalar::sPow(-6));
  CHECK(buildDatum({Family::A2even, 1}).evalPoints()[1] == -QScalar::sPow(-6));
  CHECK(buildDatum({Family::A2odd, 3}).evalPoints()[1] == -QScalar::sPow(-6));
  CHECK(buildDatum({Family::D2, 2}).evalPoints()[1] == QScalar::sPow(-4));
  CHECK(buildDatum({Family::A, 1}).evalPoints()[1] == QScalar::sPow(-4));
}

TEST_CASE("q-power helpers") {
  RootDatum a1 = buildDatum({Family::A, 1});
  CHECK(a1.D == 2);
  CHECK(a1.q() == QScalar::sPow(2));
  CHECK(a1.qPow(makeRat(BigInt(1), BigInt(2))) == QScalar::sPow(1));
  CHECK_THROWS_AS(a1.qPow(makeRat(BigInt(1), BigInt(3))), Error);
  RootDatum b3 = buildDatum({Family::B, 3});
  CHECK(b3.qi(0) == QScalar::sPow(2));
  CHECK(b3.qi(3) == QScalar::sPow(1));
  CHECK(b3.qInt(2, 3) == qIntPow(2, 1));
  CHECK(b3.qInt(2, 0) == qIntPow(2, 2));
}
