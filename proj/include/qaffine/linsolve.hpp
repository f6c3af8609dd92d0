#pragma once

#include <map>
#include <utility>
#include <vector>

#include "qaffine/qscalar.hpp"

namespace qaffine {

// Sparse linear system over Q(s) with shared left-hand sides and any number
// of right-hand-side columns.
struct LinearSystem {
  long cols = 0;
  long nrhs = 0;
  std::vector<std::map<long, QScalar>> lhs;    // per row: column -> coefficient
  std::vector<std::vector<QScalar>> rhs;       // per row: one value per rhs column

  LinearSystem(long cols_, long nrhs_) : cols(cols_), nrhs(nrhs_) {
    check(cols_ >= 0 && nrhs_ >= 0, "LinearSystem: negative sizes");
  }

  void addRow(std::map<long, QScalar> row, std::vector<QScalar> rhsVals) {
    check(static_cast<long>(rhsVals.size()) == nrhs, "LinearSystem: rhs width");
    for (auto it = row.begin(); it != row.end();) {
      check(0 <= it->first && it->first < cols, "LinearSystem: column range");
      it = it->second.isZero() ? row.erase(it) : std::next(it);
    }
    lhs.push_back(std::move(row));
    rhs.push_back(std::move(rhsVals));
  }
};

struct LinearSolution {
  bool consistent = true;
  long firstBadRow = -1;                          // original row index on failure
  std::vector<std::vector<QScalar>> particular;   // [nrhs][cols], free vars = 0
  std::vector<std::vector<QScalar>> kernel;       // null-space basis vectors [*][cols]
};

namespace detail {

// One row in cleared-denominator form: sorted sparse polynomial entries
// plus the scaled rhs block.
struct PolyRow {
  std::vector<std::pair<long, ZPoly>> lhs;  // ascending columns
  std::vector<ZPoly> rhs;
  long origin = -1;

  bool lhsEmpty() const { return lhs.empty(); }
  long leadCol() const { return lhs.front().first; }
  const ZPoly* find(long col) const {
    auto it = std::lower_bound(lhs.begin(), lhs.end(), col,
                               [](const auto& p, long c) { return p.first < c; });
    return (it != lhs.end() && it->first == col) ? &it->second : nullptr;
  }
};

inline ZPoly lcmPoly(const ZPoly& a, const ZPoly& b) {
  return divExact(a * b, gcdPoly(a, b));
}

// Divide the whole row by the gcd of its entries.
inline void reduceRowContent(PolyRow& row) {
  ZPoly g;
  bool unit = false;
  auto fold = [&](const ZPoly& p) {
    if (p.isZero() || unit) return;
    g = g.isZero() ? p : gcdPoly(g, p);
    if (g.isOne()) unit = true;
  };
  for (const auto& [c, p] : row.lhs) fold(p);
  for (const ZPoly& p : row.rhs) fold(p);
  if (g.isZero() || g.isOne()) return;
  for (auto& [c, p] : row.lhs) p = divExact(p, g);
  for (ZPoly& p : row.rhs) {
    if (!p.isZero()) p = divExact(p, g);
  }
}

// row := pivCoeff * row - rowCoeff * piv, restricted to lhs and rhs blocks.
// Coefficients are taken by value: callers pass references into row.lhs,
// which this function replaces.
inline void eliminate(PolyRow& row, const PolyRow& piv, const ZPoly pivCoeff,
                      const ZPoly rowCoeff) {
  std::vector<std::pair<long, ZPoly>> merged;
  merged.reserve(row.lhs.size() + piv.lhs.size());
  std::size_t a = 0, b = 0;
  while (a < row.lhs.size() || b < piv.lhs.size()) {
    bool takeA = b >= piv.lhs.size() ||
                 (a < row.lhs.size() && row.lhs[a].first < piv.lhs[b].first);
    bool takeB = a >= row.lhs.size() ||
                 (b < piv.lhs.size() && piv.lhs[b].first < row.lhs[a].first);
    if (takeA) {
      merged.emplace_back(row.lhs[a].first, pivCoeff * row.lhs[a].second);
      ++a;
    } else if (takeB) {
      merged.emplace_back(piv.lhs[b].first, -(rowCoeff * piv.lhs[b].second));
      ++b;
    } else {
      ZPoly v = pivCoeff * row.lhs[a].second - rowCoeff * piv.lhs[b].second;
      if (!v.isZero()) merged.emplace_back(row.lhs[a].first, std::move(v));
      ++a;
      ++b;
    }
  }
  row.lhs = std::move(merged);
  for (std::size_t k = 0; k < row.rhs.size(); ++k)
    row.rhs[k] = pivCoeff * row.rhs[k] - rowCoeff * piv.rhs[k];
  reduceRowContent(row);
}

}  // namespace detail

// Exact fraction-free elimination. Returns particular solutions for every
// rhs column (free variables set to zero) and a kernel basis; flags the
// first inconsistent row otherwise.
inline LinearSolution solveLinear(const LinearSystem& sys) {
  using detail::PolyRow;
  std::vector<PolyRow> rows;
  rows.reserve(sys.lhs.size());
  for (std::size_t r = 0; r < sys.lhs.size(); ++r) {
    PolyRow row;
    row.origin = static_cast<long>(r);
    // clear denominators across the row
    ZPoly common(BigInt(1));
    for (const auto& [c, v] : sys.lhs[r])
      common = detail::lcmPoly(common, v.den());
    for (const QScalar& v : sys.rhs[r])
      if (!v.isZero()) common = detail::lcmPoly(common, v.den());
    for (const auto& [c, v] : sys.lhs[r])
      row.lhs.emplace_back(c, v.num() * divExact(common, v.den()));
    row.rhs.reserve(sys.rhs[r].size());
    for (const QScalar& v : sys.rhs[r])
      row.rhs.push_back(v.isZero() ? ZPoly() : v.num() * divExact(common, v.den()));
    detail::reduceRowContent(row);
    rows.push_back(std::move(row));
  }

  LinearSolution sol;
  std::vector<PolyRow> echelon;           // pivot rows in pivot order
  std::vector<long> pivotCol;             // parallel to echelon
  std::vector<bool> isPivotCol(static_cast<std::size_t>(sys.cols), false);

  std::vector<PolyRow> active = std::move(rows);
  while (true) {
    long best = -1;
    long bestCol = sys.cols;
    for (std::size_t r = 0; r < active.size(); ++r) {
      if (active[r].lhsEmpty()) continue;
      long c = active[r].leadCol();
      if (c < bestCol) {
        bestCol = c;
        best = static_cast<long>(r);
      } else if (c == bestCol && best >= 0) {
        const PolyRow& a = active[r];
        const PolyRow& b = active[static_cast<std::size_t>(best)];
        if (a.lhs.size() < b.lhs.size() ||
            (a.lhs.size() == b.lhs.size() &&
             a.lhs.front().second.degree() < b.lhs.front().second.degree()))
          best = static_cast<long>(r);
      }
    }
    if (best < 0) break;
    PolyRow piv = std::move(active[static_cast<std::size_t>(best)]);
    active.erase(active.begin() + best);
    const ZPoly pivCoeff = piv.lhs.front().second;
    for (PolyRow& row : active) {
      if (!row.lhsEmpty() && row.leadCol() == bestCol)
        detail::eliminate(row, piv, pivCoeff, row.lhs.front().second);
    }
    isPivotCol[static_cast<std::size_t>(bestCol)] = true;
    pivotCol.push_back(bestCol);
    echelon.push_back(std::move(piv));
  }

  for (const PolyRow& row : active) {
    for (const ZPoly& v : row.rhs) {
      if (!v.isZero()) {
        sol.consistent = false;
        sol.firstBadRow = row.origin;
        return sol;
      }
    }
  }

  // back-substitution; free variables zero in particular solutions
  auto backSolve = [&](const std::vector<QScalar>& free,
                       bool homogeneous, long rhsIdx) {
    std::vector<QScalar> x(static_cast<std::size_t>(sys.cols));
    for (long c = 0; c < sys.cols; ++c)
      if (!isPivotCol[static_cast<std::size_t>(c)])
        x[static_cast<std::size_t>(c)] = free[static_cast<std::size_t>(c)];
    for (std::size_t k = echelon.size(); k-- > 0;) {
      const PolyRow& row = echelon[k];
      long pc = pivotCol[k];
      QScalar acc = homogeneous ? QScalar()
                                : QScalar(row.rhs[static_cast<std::size_t>(rhsIdx)],
                                          ZPoly(BigInt(1)));
      for (const auto& [c, v] : row.lhs) {
        if (c == pc) continue;
        const QScalar& xv = x[static_cast<std::size_t>(c)];
        if (!xv.isZero()) acc -= QScalar(v, ZPoly(BigInt(1))) * xv;
      }
      // the leading entry of a pivot row is the pivot coefficient
      x[static_cast<std::size_t>(pc)] =
          acc * QScalar(ZPoly(BigInt(1)), row.lhs.front().second);
    }
    return x;
  };

  std::vector<QScalar> zeros(static_cast<std::size_t>(sys.cols));
  for (long k = 0; k < sys.nrhs; ++k)
    sol.particular.push_back(backSolve(zeros, false, k));

  for (long c = 0; c < sys.cols; ++c) {
    if (isPivotCol[static_cast<std::size_t>(c)]) continue;
    std::vector<QScalar> free(static_cast<std::size_t>(sys.cols));
    free[static_cast<std::size_t>(c)] = QScalar(1L);
    sol.kernel.push_back(backSolve(free, true, 0));
  }
  return sol;
}

// Exact residual check of a candidate solution against the original system.
inline bool verifyLinear(const LinearSystem& sys, const std::vector<QScalar>& x,
                         long rhsIdx) {
  for (std::size_t r = 0; r < sys.lhs.size(); ++r) {
    QScalar acc;
    for (const auto& [c, v] : sys.lhs[r]) acc += v * x[static_cast<std::size_t>(c)];
    if (!(acc == sys.rhs[r][static_cast<std::size_t>(rhsIdx)])) return false;
  }
  return true;
}

}  // namespace qaffine
