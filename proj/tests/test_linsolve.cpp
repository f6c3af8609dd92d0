#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "qaffine/linsolve.hpp"

using namespace qaffine;

namespace {

QScalar randScalar(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> expo(0, 2);
  std::uniform_int_distribution<int> shape(0, 3);
  int kind = shape(rng);
  if (kind == 0) return QScalar(static_cast<long>(coef(rng)));
  ZPoly num = ZPoly::monomial(expo(rng), BigInt(coef(rng)));
  if (kind == 2) num = num + ZPoly(BigInt(coef(rng)));
  ZPoly den = kind == 3 ? ZPoly::monomial(expo(rng), BigInt(1)) + ZPoly(1)
                        : ZPoly(BigInt(1));
  return QScalar(num, den);
}

using Row = std::map<long, QScalar>;
using Vec = std::vector<QScalar>;

Vec matVec(const std::vector<Row>& rows, const Vec& x) {
  Vec out;
  out.reserve(rows.size());
  for (const Row& r : rows) {
    QScalar acc;
    for (const auto& [c, v] : r) acc += v * x[static_cast<std::size_t>(c)];
    out.push_back(acc);
  }
  return out;
}

LinearSystem systemFrom(const std::vector<Row>& rows,
                        const std::vector<Vec>& rhsCols, long cols) {
  LinearSystem sys(cols, static_cast<long>(rhsCols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<QScalar> rhs;
    for (const Vec& col : rhsCols) rhs.push_back(col[r]);
    sys.addRow(rows[r], std::move(rhs));
  }
  return sys;
}

std::vector<Row> randRows(std::mt19937_64& rng, long m, long n, int fillPct) {
  std::uniform_int_distribution<int> pct(0, 99);
  std::vector<Row> rows(static_cast<std::size_t>(m));
  for (auto& r : rows)
    for (long c = 0; c < n; ++c)
      if (pct(rng) < fillPct) {
        QScalar v = randScalar(rng);
        if (!v.isZero()) r[c] = v;
      }
  return rows;
}

Vec randVec(std::mt19937_64& rng, long n) {
  Vec v(static_cast<std::size_t>(n));
  for (auto& e : v) e = randScalar(rng);
  return v;
}

bool annihilates(const std::vector<Row>& rows, const Vec& k) {
  for (const QScalar& e : matVec(rows, k))
    if (!e.isZero()) return false;
  return true;
}

}  // namespace

TEST_CASE("single equation over the rational function field") {
  LinearSystem sys(1, 1);
  QScalar a(ZPoly::parse("2 + 1*s^1"), ZPoly(1));
  QScalar b(ZPoly::parse("1*s^2"), ZPoly(1));
  sys.addRow({{0, a}}, {b});
  LinearSolution sol = solveLinear(sys);
  REQUIRE(sol.consistent);
  REQUIRE(sol.kernel.empty());
  REQUIRE(sol.particular[0][0] == b / a);
  REQUIRE(verifyLinear(sys, sol.particular[0], 0));
}

TEST_CASE("constructed solutions are reproduced on random systems") {
  std::mt19937_64 rng(0x5eed0301);
  for (int trial = 0; trial < 40; ++trial) {
    long n = 2 + static_cast<long>(trial % 5);
    long m = n + static_cast<long>(trial % 3);
    auto rows = randRows(rng, m, n, 60);
    Vec x1 = randVec(rng, n), x2 = randVec(rng, n);
    std::vector<Vec> rhs = {matVec(rows, x1), matVec(rows, x2)};
    LinearSystem sys = systemFrom(rows, rhs, n);
    LinearSolution sol = solveLinear(sys);
    REQUIRE(sol.consistent);
    REQUIRE(verifyLinear(sys, sol.particular[0], 0));
    REQUIRE(verifyLinear(sys, sol.particular[1], 1));
    for (const Vec& k : sol.kernel) REQUIRE(annihilates(rows, k));
  }
}

TEST_CASE("unique solution recovered when columns are independent") {
  std::mt19937_64 rng(0x5eed0302);
  for (int trial = 0; trial < 25; ++trial) {
    long n = 2 + static_cast<long>(trial % 4);
    // unit lower times upper with nonzero diagonal is invertible
    std::vector<Row> lo(static_cast<std::size_t>(n)), up(lo);
    for (long i = 0; i < n; ++i) {
      lo[static_cast<std::size_t>(i)][i] = QScalar(1L);
      up[static_cast<std::size_t>(i)][i] =
          QScalar(ZPoly::monomial(static_cast<long>(trial % 2), BigInt(1)), ZPoly(1)) +
          QScalar(static_cast<long>(1 + i));
      for (long j = 0; j < i; ++j) {
        QScalar v = randScalar(rng);
        if (!v.isZero()) lo[static_cast<std::size_t>(i)][j] = v;
      }
      for (long j = i + 1; j < n; ++j) {
        QScalar v = randScalar(rng);
        if (!v.isZero()) up[static_cast<std::size_t>(i)][j] = v;
      }
    }
    std::vector<Row> rows(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
      for (const auto& [k, lv] : lo[static_cast<std::size_t>(i)])
        for (const auto& [j, uv] : up[static_cast<std::size_t>(k)]) {
          QScalar& slot = rows[static_cast<std::size_t>(i)][j];
          slot += lv * uv;
          if (slot.isZero()) rows[static_cast<std::size_t>(i)].erase(j);
        }
    Vec x = randVec(rng, n);
    LinearSystem sys = systemFrom(rows, {matVec(rows, x)}, n);
    LinearSolution sol = solveLinear(sys);
    REQUIRE(sol.consistent);
    REQUIRE(sol.kernel.empty());
    for (long c = 0; c < n; ++c)
      REQUIRE(sol.particular[0][static_cast<std::size_t>(c)] ==
              x[static_cast<std::size_t>(c)]);
  }
}

TEST_CASE("kernel captures a planted column dependency") {
  std::mt19937_64 rng(0x5eed0303);
  for (int trial = 0; trial < 20; ++trial) {
    long n = 4 + static_cast<long>(trial % 3);
    auto rows = randRows(rng, n + 2, n, 70);
    // make column n-1 equal to col0 + s*col1
    QScalar sPow(ZPoly::monomial(1, BigInt(1)), ZPoly(1));
    for (auto& r : rows) {
      QScalar v;
      auto i0 = r.find(0);
      auto i1 = r.find(1);
      if (i0 != r.end()) v += i0->second;
      if (i1 != r.end()) v += sPow * i1->second;
      if (v.isZero())
        r.erase(n - 1);
      else
        r[n - 1] = v;
    }
    Vec x = randVec(rng, n);
    LinearSystem sys = systemFrom(rows, {matVec(rows, x)}, n);
    LinearSolution sol = solveLinear(sys);
    REQUIRE(sol.consistent);
    REQUIRE(!sol.kernel.empty());
    for (const Vec& k : sol.kernel) REQUIRE(annihilates(rows, k));
    // the planted direction (1, s, 0, ..., 0, -1) must lie in the kernel,
    // which for a rank-deficiency of one pins the basis vector up to scale
    Vec planted(static_cast<std::size_t>(n));
    planted[0] = QScalar(1L);
    planted[1] = sPow;
    planted[static_cast<std::size_t>(n - 1)] = -QScalar(1L);
    REQUIRE(annihilates(rows, planted));
    REQUIRE(verifyLinear(sys, sol.particular[0], 0));
  }
}

TEST_CASE("inconsistent rows are detected and named") {
  std::mt19937_64 rng(0x5eed0304);
  auto rows = randRows(rng, 3, 3, 90);
  rows.push_back(rows[0]);
  Vec x = randVec(rng, 3);
  Vec rhs = matVec(rows, x);
  rhs[3] += QScalar(1L);
  LinearSystem sys = systemFrom(rows, {rhs}, 3);
  LinearSolution sol = solveLinear(sys);
  REQUIRE(!sol.consistent);
  REQUIRE(sol.firstBadRow >= 0);

  SECTION("zero row with nonzero rhs") {
    LinearSystem bad(2, 1);
    bad.addRow({{0, QScalar(1L)}}, {QScalar(2L)});
    bad.addRow({}, {QScalar(1L)});
    LinearSolution s2 = solveLinear(bad);
    REQUIRE(!s2.consistent);
    REQUIRE(s2.firstBadRow == 1);
  }
}

TEST_CASE("particular solutions are linear in the rhs block") {
  std::mt19937_64 rng(0x5eed0305);
  for (int trial = 0; trial < 15; ++trial) {
    long n = 3 + static_cast<long>(trial % 3);
    auto rows = randRows(rng, n + 1, n, 65);
    Vec x1 = randVec(rng, n), x2 = randVec(rng, n);
    Vec b1 = matVec(rows, x1), b2 = matVec(rows, x2);
    Vec bsum(b1.size());
    for (std::size_t i = 0; i < b1.size(); ++i) bsum[i] = b1[i] + b2[i];
    LinearSystem sys = systemFrom(rows, {b1, b2, bsum}, n);
    LinearSolution sol = solveLinear(sys);
    REQUIRE(sol.consistent);
    for (long c = 0; c < n; ++c) {
      std::size_t cc = static_cast<std::size_t>(c);
      REQUIRE(sol.particular[0][cc] + sol.particular[1][cc] ==
              sol.particular[2][cc]);
    }
  }
}

TEST_CASE("zero-width and empty systems") {
  LinearSystem sys(0, 1);
  sys.addRow({}, {QScalar()});
  LinearSolution sol = solveLinear(sys);
  REQUIRE(sol.consistent);
  REQUIRE(sol.kernel.empty());
  REQUIRE(sol.particular.size() == 1);
  REQUIRE(sol.particular[0].empty());

  LinearSystem none(3, 0);
  LinearSolution s2 = solveLinear(none);
  REQUIRE(s2.consistent);
  REQUIRE(s2.kernel.size() == 3);
}
