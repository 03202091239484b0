#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "extremal/numeric.hpp"

namespace extremal {

struct LatticeBasis {
  int ambient_dim = 0;
  std::vector<RationalVector> rows;
};

// Validates shape and full rank.
LatticeBasis make_lattice_basis(std::vector<RationalVector> rows);
Rational determinant(const std::vector<RationalVector>& square);

struct ShortestVector {
  Rational norm;                // exact, only meaningful when `exact` is true
  HighReal norm_real;           // always set
  bool exact = true;
  IntVector coefficients;       // in terms of the input rows
  RationalVector vector;        // unscaled integer combination of the input rows
  long max_coefficient_bound = 0;  // largest enumeration radius used
  long long candidates = 0;
};

// Shortest nonzero vector of the lattice spanned by `rows` (d rows of length k,
// rank d, d <= k <= 6) in the sup norm. With `scales` nonempty, coordinate i is
// multiplied by scales[i] (a positive real); the result is then a certified
// high-precision value. Coefficient radii above `search_bound` raise
// ErrorCode::kCertification.
ShortestVector shortest_vector(const std::vector<RationalVector>& rows, long search_bound,
                               const std::vector<HighReal>& scales = {});

Rational shortest_vector_norm(const LatticeBasis& basis, long search_bound);

namespace detail {

// Textbook LLL (delta = 0.99) over a real type, tracking the unimodular
// transform in `transform` (rows are integer coefficient vectors). `b` holds the
// real vectors; `rebuild(i)` must recompute b[i] from transform[i] (callers keep
// coordinates exact that way), or may be a no-op if b[i] is updated in place.
template <class Real, class Int, class Rebuild>
void lll_reduce(std::vector<std::vector<Real>>& b, std::vector<std::vector<Int>>& transform, Rebuild rebuild) {
  const int d = static_cast<int>(b.size());
  if (d <= 1) return;
  const int k = static_cast<int>(b[0].size());
  auto dot = [&](const std::vector<Real>& x, const std::vector<Real>& y) {
    Real s = 0;
    for (int i = 0; i < k; ++i) s += x[i] * y[i];
    return s;
  };
  std::vector<std::vector<Real>> bstar(d, std::vector<Real>(k));
  std::vector<std::vector<Real>> mu(d, std::vector<Real>(d));
  std::vector<Real> norms(d);
  auto gram_schmidt = [&]() {
    for (int i = 0; i < d; ++i) {
      bstar[i] = b[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = norms[j] == 0 ? Real(0) : Real(dot(b[i], bstar[j]) / norms[j]);
        for (int t = 0; t < k; ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
      }
      norms[i] = dot(bstar[i], bstar[i]);
    }
  };
  gram_schmidt();
  int i = 1;
  int guard = 0;
  while (i < d) {
    if (++guard > 100000) break;
    bool changed = false;
    for (int j = i - 1; j >= 0; --j) {
      using std::floor;
      Real r = floor(mu[i][j] + Real(0.5));
      if (r != 0) {
        Int ri = static_cast<Int>(r);
        for (int t = 0; t < d; ++t) transform[i][t] -= ri * transform[j][t];
        if (!rebuild(i)) {
          for (int t = 0; t < k; ++t) b[i][t] -= r * b[j][t];
        }
        changed = true;
        gram_schmidt();
      }
    }
    (void)changed;
    if (norms[i] < (Real(0.99) - mu[i][i - 1] * mu[i][i - 1]) * norms[i - 1]) {
      std::swap(b[i], b[i - 1]);
      std::swap(transform[i], transform[i - 1]);
      gram_schmidt();
      i = std::max(i - 1, 1);
    } else {
      ++i;
    }
  }
}

// Solves for P = B^T (B B^T)^{-1} (k x d) and returns, for each of the d
// coefficients, sum_j |P_{j,i}|: any v in the row space has |c_i| <= ||v||_inf * bound_i.
template <class Real>
std::vector<Real> coefficient_bounds(const std::vector<std::vector<Real>>& B) {
  const int d = static_cast<int>(B.size());
  const int k = static_cast<int>(B[0].size());
  std::vector<std::vector<Real>> G(d, std::vector<Real>(2 * d, Real(0)));
  for (int a = 0; a < d; ++a) {
    for (int c = 0; c < d; ++c) {
      Real s = 0;
      for (int t = 0; t < k; ++t) s += B[a][t] * B[c][t];
      G[a][c] = s;
    }
    G[a][d + a] = 1;
  }
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r) {
      using std::abs;
      if (abs(G[r][col]) > abs(G[piv][col])) piv = r;
    }
    std::swap(G[col], G[piv]);
    Real p = G[col][col];
    if (p == 0) throw Error(ErrorCode::kDependent, "singular Gram matrix");
    for (int c = 0; c < 2 * d; ++c) G[col][c] /= p;
    for (int r = 0; r < d; ++r) {
      if (r == col || G[r][col] == 0) continue;
      Real f = G[r][col];
      for (int c = 0; c < 2 * d; ++c) G[r][c] -= f * G[col][c];
    }
  }
  std::vector<Real> bounds(d, Real(0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < k; ++j) {
      Real p = 0;
      for (int a = 0; a < d; ++a) p += B[a][j] * G[a][d + i];
      using std::abs;
      bounds[i] += abs(p);
    }
  }
  return bounds;
}

}  // namespace detail
}  // namespace extremal
