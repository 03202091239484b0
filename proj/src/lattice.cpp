#include "extremal/lattice.hpp"

#include <functional>

namespace extremal {

namespace {

constexpr long long kMaxCandidates = 20'000'000;

RationalVector combine(const std::vector<BigInt>& coeffs, const std::vector<RationalVector>& rows) {
  RationalVector v(rows[0].size(), Rational(0));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (coeffs[i] == 0) continue;
    for (size_t t = 0; t < v.size(); ++t) v[t] += Rational(coeffs[i]) * rows[i][t];
  }
  return v;
}

HighReal scaled_norm(const RationalVector& v, const std::vector<HighReal>& scales) {
  HighReal m = 0;
  for (size_t t = 0; t < v.size(); ++t) {
    HighReal x = abs(to_real(v[t]) * scales[t]);
    if (x > m) m = x;
  }
  return m;
}

}  // namespace

Rational determinant(const std::vector<RationalVector>& square) {
  std::vector<RationalVector> m = square;
  const int n = static_cast<int>(m.size());
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r) {
      if (m[r][c] != 0) {
        piv = r;
        break;
      }
    }
    if (piv < 0) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (int r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      Rational f = m[r][c] / m[c][c];
      for (int t = c; t < n; ++t) m[r][t] -= f * m[c][t];
    }
  }
  return det;
}

LatticeBasis make_lattice_basis(std::vector<RationalVector> rows) {
  require(!rows.empty(), ErrorCode::kInvalidArgument, "empty lattice basis");
  const int k = static_cast<int>(rows.size());
  for (const auto& r : rows) {
    require(static_cast<int>(r.size()) == k, ErrorCode::kDimensionMismatch, "lattice basis must be square");
  }
  require(determinant(rows) != 0, ErrorCode::kDependent, "singular lattice basis");
  return LatticeBasis{k, std::move(rows)};
}

ShortestVector shortest_vector(const std::vector<RationalVector>& rows, long search_bound,
                               const std::vector<HighReal>& scales) {
  require(!rows.empty(), ErrorCode::kInvalidArgument, "shortest_vector: empty basis");
  const int d = static_cast<int>(rows.size());
  const int k = static_cast<int>(rows[0].size());
  require(k <= 6, ErrorCode::kInvalidArgument, "shortest_vector: ambient dimension capped at 6");
  require(d <= k, ErrorCode::kDependent, "shortest_vector: more rows than coordinates");
  const bool exact = scales.empty();
  require(exact || static_cast<int>(scales.size()) == k, ErrorCode::kDimensionMismatch, "scales length");
  for (const auto& s : scales) require(s > 0, ErrorCode::kInvalidArgument, "scales must be positive");
  {
    // rank check in exact arithmetic
    std::vector<RationalVector> m = rows;
    int rank = 0;
    for (int c = 0; c < k && rank < d; ++c) {
      int piv = -1;
      for (int r = rank; r < d; ++r) {
        if (m[r][c] != 0) {
          piv = r;
          break;
        }
      }
      if (piv < 0) continue;
      std::swap(m[piv], m[rank]);
      for (int r = rank + 1; r < d; ++r) {
        Rational f = m[r][c] / m[rank][c];
        for (int t = c; t < k; ++t) m[r][t] -= f * m[rank][t];
      }
      ++rank;
    }
    require(rank == d, ErrorCode::kDependent, "shortest_vector: basis is singular");
  }

  auto real_vector = [&](const RationalVector& v) {
    std::vector<HighReal> out(k);
    for (int t = 0; t < k; ++t) out[t] = to_real(v[t]) * (exact ? HighReal(1) : scales[t]);
    return out;
  };

  // LLL on the (scaled) real vectors, keeping the transform integral and the
  // coordinates recomputed from exact data after every update.
  std::vector<std::vector<BigInt>> transform(d, std::vector<BigInt>(d, 0));
  for (int i = 0; i < d; ++i) transform[i][i] = 1;
  std::vector<RationalVector> reduced = rows;
  std::vector<std::vector<HighReal>> b(d);
  for (int i = 0; i < d; ++i) b[i] = real_vector(rows[i]);
  detail::lll_reduce<HighReal, BigInt>(b, transform, [&](int i) {
    reduced[i] = combine(transform[i], rows);
    b[i] = real_vector(reduced[i]);
    return true;
  });
  for (int i = 0; i < d; ++i) reduced[i] = combine(transform[i], rows);

  // Coefficient bounds relative to the reduced basis.
  std::vector<HighReal> bound_real;
  std::vector<Rational> bound_exact;
  if (exact) {
    bound_exact = detail::coefficient_bounds<Rational>(reduced);
  } else {
    bound_real = detail::coefficient_bounds<HighReal>(b);
  }

  ShortestVector best;
  best.exact = exact;
  int best_row = -1;
  for (int i = 0; i < d; ++i) {
    if (exact) {
      Rational nv = sup_norm(reduced[i]);
      if (best_row < 0 || nv < best.norm) {
        best.norm = nv;
        best_row = i;
      }
    } else {
      HighReal nv = scaled_norm(reduced[i], scales);
      if (best_row < 0 || nv < best.norm_real) {
        best.norm_real = nv;
        best_row = i;
      }
    }
  }
  std::vector<BigInt> best_c(d, 0);
  best_c[best_row] = 1;

  auto radii = [&]() {
    std::vector<long> r(d);
    for (int i = 0; i < d; ++i) {
      BigInt ri;
      if (exact) {
        ri = floor_of(best.norm * bound_exact[i]);
      } else {
        HighReal x = best.norm_real * bound_real[i] * (1 + HighReal("1e-30")) + HighReal("1e-30");
        ri = BigInt(floor(x));
      }
      if (ri > search_bound) {
        fail(ErrorCode::kCertification, "shortest_vector: certified enumeration radius " + ri.str() +
                                            " exceeds search bound " + std::to_string(search_bound));
      }
      r[i] = ri.convert_to<long>();
      best.max_coefficient_bound = std::max(best.max_coefficient_bound, r[i]);
    }
    return r;
  };
  std::vector<long> R = radii();
  {
    long double count = 1;
    for (long r : R) count *= (2.0L * r + 1);
    if (count > kMaxCandidates) {
      fail(ErrorCode::kCertification, "shortest_vector: enumeration box too large at this precision");
    }
  }

  // Depth-first enumeration over c in the box, first nonzero coordinate positive.
  std::vector<long> c(d, 0);
  std::vector<RationalVector> partial_exact(d + 1, RationalVector(k, Rational(0)));
  std::vector<std::vector<HighReal>> partial_real(d + 1, std::vector<HighReal>(k, HighReal(0)));
  std::function<void(int, bool)> recurse = [&](int level, bool nonzero_seen) {
    if (level == d) {
      if (!nonzero_seen) return;
      ++best.candidates;
      if (exact) {
        Rational nv = sup_norm(partial_exact[d]);
        if (nv < best.norm) {
          best.norm = nv;
          for (int i = 0; i < d; ++i) best_c[i] = c[i];
          R = radii();
        }
      } else {
        HighReal nv = 0;
        for (int t = 0; t < k; ++t) nv = std::max(nv, HighReal(abs(partial_real[d][t])));
        if (nv < best.norm_real) {
          best.norm_real = nv;
          for (int i = 0; i < d; ++i) best_c[i] = c[i];
          R = radii();
        }
      }
      return;
    }
    long lo = nonzero_seen ? -R[level] : 0;
    for (long x = lo; x <= R[level]; ++x) {
      if (x > R[level]) break;
      c[level] = x;
      if (exact) {
        for (int t = 0; t < k; ++t) partial_exact[level + 1][t] = partial_exact[level][t] + Rational(x) * reduced[level][t];
      } else {
        for (int t = 0; t < k; ++t) partial_real[level + 1][t] = partial_real[level][t] + HighReal(x) * b[level][t];
      }
      recurse(level + 1, nonzero_seen || x != 0);
      if (best.candidates > kMaxCandidates) fail(ErrorCode::kCertification, "shortest_vector: too many candidates");
    }
    c[level] = 0;
  };
  recurse(0, false);

  // Express the minimizer in the input basis and recompute its norm from exact data.
  std::vector<BigInt> coeffs(d, 0);
  for (int i = 0; i < d; ++i) {
    for (int t = 0; t < d; ++t) coeffs[t] += best_c[i] * transform[i][t];
  }
  best.coefficients = IntVector(coeffs.begin(), coeffs.end());
  best.vector = combine(coeffs, rows);
  if (exact) {
    best.norm = sup_norm(best.vector);
    best.norm_real = to_real(best.norm);
  } else {
    best.norm_real = scaled_norm(best.vector, scales);
  }
  return best;
}

Rational shortest_vector_norm(const LatticeBasis& basis, long search_bound) {
  return shortest_vector(basis.rows, search_bound).norm;
}

}  // namespace extremal
