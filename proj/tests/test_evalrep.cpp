#include <catch2/catch_amalgamated.hpp>

#include "qaffine/evalrep.hpp"

using namespace qaffine;

namespace {

SpMat E(long N, long i, long j) { return SpMat::unit(N, N, i, j); }

const std::vector<AffineType> kSelfcheckTypes = {
    {Family::A, 1},      {Family::A, 2},      {Family::A, 3},
    {Family::B, 3},      {Family::B, 4},      {Family::C, 2},
    {Family::C, 3},      {Family::D, 4},      {Family::D, 5},
    {Family::A2even, 1}, {Family::A2even, 2}, {Family::A2odd, 3},
    {Family::A2odd, 4},  {Family::D2, 2},     {Family::D2, 3},
};

}  // namespace

TEST_CASE("generator matrices match the tabulated patterns") {
  SECTION("A_1") {
    EvalRep r = buildRep({Family::A, 1});
    REQUIRE(r.N == 2);
    REQUIRE(r.e[1] == E(2, 1, 2));
    REQUIRE(r.f[1] == E(2, 2, 1));
    REQUIRE(r.e[0] == E(2, 2, 1));
    REQUIRE(r.f[0] == E(2, 1, 2));
  }
  SECTION("C_2") {
    EvalRep r = buildRep({Family::C, 2});
    REQUIRE(r.N == 4);
    REQUIRE(r.e[1] == E(4, 1, 2) - E(4, 3, 4));
    REQUIRE(r.e[2] == E(4, 2, 3));
    REQUIRE(r.e[0] == E(4, 4, 1));
    REQUIRE(r.ePlus[1] == E(4, 1, 2));
    REQUIRE(r.eMinus[1] == -E(4, 3, 4));
    REQUIRE(r.fPlus[1] == E(4, 2, 1));
    REQUIRE(r.fMinus[1] == -E(4, 4, 3));
  }
  SECTION("B_3 node-l split carries the quantum integer on the f side") {
    EvalRep r = buildRep({Family::B, 3});
    REQUIRE(r.N == 7);
    QScalar two = r.datum.qInt(2, 3);
    REQUIRE(r.e[3] == E(7, 3, 4) - E(7, 4, 5));
    REQUIRE(r.f[3] == two * (E(7, 4, 3) - E(7, 5, 4)));
    REQUIRE(r.e[0] == E(7, 6, 1) - E(7, 7, 2));
    REQUIRE(r.f[0] == E(7, 1, 6) - E(7, 2, 7));
    REQUIRE(r.e[1] == E(7, 1, 2) - E(7, 6, 7));
  }
  SECTION("D_4 node l pairs rows l-1, l with columns l+1, l+2") {
    EvalRep r = buildRep({Family::D, 4});
    REQUIRE(r.N == 8);
    REQUIRE(r.e[4] == E(8, 3, 5) - E(8, 4, 6));
    REQUIRE(r.f[4] == E(8, 5, 3) - E(8, 6, 4));
    REQUIRE(r.e[0] == E(8, 7, 1) - E(8, 8, 2));
  }
  SECTION("A_2^(2) conjugation flips the lower-block signs") {
    EvalRep r = buildRep({Family::A2even, 1});
    REQUIRE(r.N == 3);
    QScalar two = r.datum.qInt(2, 1);
    REQUIRE(r.e[1] == E(3, 1, 2) + E(3, 2, 3));
    REQUIRE(r.f[1] == two * (E(3, 2, 1) + E(3, 3, 2)));
    REQUIRE(r.e[0] == E(3, 3, 1));
    REQUIRE(r.f[0] == E(3, 1, 3));
  }
  SECTION("A_5^(2) affine node uses the plus pattern") {
    EvalRep r = buildRep({Family::A2odd, 3});
    REQUIRE(r.N == 6);
    REQUIRE(r.e[0] == E(6, 5, 1) + E(6, 6, 2));
    REQUIRE(r.f[0] == E(6, 1, 5) + E(6, 2, 6));
  }
  SECTION("D_3^(2) affine node and sign matrix") {
    EvalRep r = buildRep({Family::D2, 2});
    REQUIRE(r.N == 6);
    QScalar two0 = r.datum.qInt(2, 0);
    REQUIRE(r.e[0] == E(6, 6, 1) + E(6, 5, 6));
    REQUIRE(r.f[0] == two0 * (E(6, 1, 6) + E(6, 6, 5)));
    REQUIRE(r.e[2] == E(6, 2, 3) - E(6, 3, 4));
    REQUIRE(r.G.get(6, 6) == QScalar(-1L));
    REQUIRE(r.G.get(5, 5) == QScalar(1L));
    // classical generators act inside the first 2l+1 coordinates
    for (long i = 1; i <= 2; ++i) {
      r.e[static_cast<std::size_t>(i)].forEach(
          [&](long a, long b, const QScalar&) { REQUIRE((a < 6 && b < 6)); });
    }
  }
}

TEST_CASE("plus and minus pieces sum to the generator") {
  for (const AffineType& t : kSelfcheckTypes) {
    EvalRep r = buildRep(t);
    for (long i = 0; i <= r.datum.l; ++i) {
      std::size_t ii = static_cast<std::size_t>(i);
      REQUIRE(r.e[ii] == r.ePlus[ii] + r.eMinus[ii]);
      REQUIRE(r.f[ii] == r.fPlus[ii] + r.fMinus[ii]);
      REQUIRE(!r.e[ii].isZero());
      REQUIRE(!r.f[ii].isZero());
    }
  }
}

TEST_CASE("selfcheck passes on built representations") {
  for (const AffineType& t : kSelfcheckTypes) {
    INFO(typeLabel(t));
    SelfcheckResult res = selfcheck(buildRep(t));
    for (const std::string& f : res.failures) INFO(f);
    REQUIRE(res.ok);
    REQUIRE(res.wCheckRun);
  }
}

TEST_CASE("corrupted affine generator is reported by relation and indices") {
  EvalRep r = buildRep({Family::A, 1});
  r.e[0] = r.e[0] + E(2, 1, 2);
  SelfcheckResult res = selfcheck(r);
  REQUIRE(!res.ok);
  bool serreNamed = false;
  for (const std::string& f : res.failures)
    if (f == "serre e (0,1)") serreNamed = true;
  REQUIRE(serreNamed);
}

TEST_CASE("twist scales only the affine generators") {
  EvalRep r = buildRep({Family::A, 1});
  QScalar a = r.datum.qPow(BigRat(-2));
  EvalRep rt = twist(r, a);
  REQUIRE(rt.e[0] == a * E(2, 2, 1));
  REQUIRE(rt.f[0] == a.inverse() * E(2, 1, 2));
  REQUIRE(rt.e[1] == r.e[1]);
  REQUIRE(rt.f[1] == r.f[1]);

  EvalRep round = twist(rt, a.inverse());
  REQUIRE(round.e[0] == r.e[0]);
  REQUIRE(round.f[0] == r.f[0]);

  EvalRep same = twist(r, QScalar(1L));
  REQUIRE(same.e[0] == r.e[0]);
  REQUIRE_THROWS_AS(twist(r, QScalar(0L)), Error);
}

TEST_CASE("invariant vector data") {
  SECTION("A_1 alternating sum") {
    InvariantVec iv = invariantVector({Family::A, 1});
    RootDatum rd = buildDatum({Family::A, 1});
    REQUIRE(iv.M == 2);
    REQUIRE(iv.w.rows() == 4);
    REQUIRE(iv.w.get(2, 1) == QScalar(1L));       // v_1 x v_2
    REQUIRE(iv.w.get(3, 1) == -rd.q());           // v_2 x v_1
    REQUIRE(iv.w.get(1, 1).isZero());
    REQUIRE(iv.w.get(4, 1).isZero());
    REQUIRE(iv.J.rows() == 0);
  }
  SECTION("C_2 u-list") {
    InvariantVec iv = invariantVector({Family::C, 2});
    RootDatum rd = buildDatum({Family::C, 2});
    QScalar q = rd.q();
    REQUIRE(iv.J.get(1, 4) == -q.pow(-2));
    REQUIRE(iv.J.get(2, 3) == -q.pow(-1));
    REQUIRE(iv.J.get(3, 2) == q);
    REQUIRE(iv.J.get(4, 1) == q.pow(2));
    REQUIRE(iv.J.entryCount() == 4);
    // w is the flattened J
    iv.J.forEach([&](long i, long j, const QScalar& v) {
      REQUIRE(iv.w.get((i - 1) * 4 + j, 1) == v);
    });
  }
  SECTION("B_3 u-list and evaluation point") {
    InvariantVec iv = invariantVector({Family::B, 3});
    RootDatum rd = buildDatum({Family::B, 3});
    QScalar q = rd.q();
    REQUIRE(iv.evalPoints.size() == 2);
    REQUIRE(iv.evalPoints[0] == QScalar(1L));
    REQUIRE(iv.evalPoints[1] == QScalar::sPow(-10));
    REQUIRE(iv.J.get(1, 7) == q.pow(-5));
    REQUIRE(iv.J.get(3, 5) == q.pow(-1));
    REQUIRE(iv.J.get(4, 4) == q);
    REQUIRE(iv.J.get(5, 3) == q);
    REQUIRE(iv.J.get(7, 1) == q.pow(5));
  }
  SECTION("A_2^(2) signs and twisted evaluation point") {
    InvariantVec iv = invariantVector({Family::A2even, 1});
    RootDatum rd = buildDatum({Family::A2even, 1});
    QScalar q = rd.q();
    REQUIRE(iv.evalPoints[1] == -QScalar::sPow(-6));
    REQUIRE(iv.J.get(1, 3) == -q.pow(-1));
    REQUIRE(iv.J.get(2, 2) == q);
    REQUIRE(iv.J.get(3, 1) == -q);
  }
  SECTION("D_3^(2) shifted antidiagonal plus corner") {
    InvariantVec iv = invariantVector({Family::D2, 2});
    RootDatum rd = buildDatum({Family::D2, 2});
    QScalar q = rd.q();
    REQUIRE(iv.J.get(1, 5) == q.pow(-3));
    REQUIRE(iv.J.get(2, 4) == q.pow(-1));
    REQUIRE(iv.J.get(3, 3) == q);
    REQUIRE(iv.J.get(4, 2) == q);
    REQUIRE(iv.J.get(5, 1) == q.pow(3));
    REQUIRE(iv.J.get(6, 6) == -q);
    REQUIRE(iv.J.entryCount() == 6);
  }
  SECTION("A_2 three-fold alternating sum") {
    InvariantVec iv = invariantVector({Family::A, 2});
    RootDatum rd = buildDatum({Family::A, 2});
    QScalar q = rd.q();
    REQUIRE(iv.M == 3);
    REQUIRE(iv.w.rows() == 27);
    // identity permutation: index (1,2,3) -> 0*9+1*3+2 +1 = 6
    REQUIRE(iv.w.get(6, 1) == QScalar(1L));
    // transposition (2,1,3): 1*9+0*3+2 +1 = 12, one inversion
    REQUIRE(iv.w.get(12, 1) == -q);
    // cycle (3,1,2): 2*9+0*3+1 +1 = 20, two inversions
    REQUIRE(iv.w.get(20, 1) == q * q);
    // reversal (3,2,1): 2*9+1*3+0 +1 = 22, three inversions
    REQUIRE(iv.w.get(22, 1) == -(q * q * q));
    REQUIRE(iv.evalPoints[1] == rd.qPow(BigRat(-2)));
  }
}

TEST_CASE("level zero breaks the Lambda_0 conjugation only at the affine node") {
  EvalRep r = buildRep({Family::C, 2});
  const RootDatum& rd = r.datum;
  SpMat k = r.kAction(rd.lambda0());
  REQUIRE(k == SpMat::identity(4));
  // conjugation by k_Lambda0 is trivial, but the pairing exponent is not
  REQUIRE(rd.pair(rd.lambda0(), rd.alpha(0)) != BigRat(0));
}

TEST_CASE("fixture serialization carries every generator entry") {
  EvalRep r = buildRep({Family::A, 1});
  std::string fx = repFixture(r);
  REQUIRE(fx.rfind("repfixture A 1\n", 0) == 0);
  REQUIRE(fx.find("e 0 2 1 ") != std::string::npos);
  REQUIRE(fx.find("f 1 2 1 ") != std::string::npos);
  long lines = 0;
  for (char c : fx)
    if (c == '\n') ++lines;
  REQUIRE(lines == 5);  // header + 4 generator entries
}
