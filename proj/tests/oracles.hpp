#pragma once

// Brute-force reference computations kept independent of the library's
// optimized paths. Everything here materializes spheres explicitly and goes
// through plain algebra arithmetic.

#include <map>
#include <vector>

#include "gvna/algebra.hpp"
#include "gvna/ball.hpp"
#include "gvna/expectations.hpp"

namespace gvna::oracles {

/// sum of all words of the exact given length, materialized by enumeration.
inline AlgebraElement sphere_sum(const ContextPtr& ctx, int level) {
  const auto shells = spheres(ctx, level);
  std::vector<std::pair<GroupElement, Rational>> terms;
  for (const GroupElement& g : shells[static_cast<std::size_t>(level)])
    terms.emplace_back(g, Rational(1));
  return AlgebraElement::from_terms(ctx, terms);
}

/// Orthogonal projection of x onto span{w_0, ..., w_max_level}, computed
/// with materialized sphere sums and generic inner products.
inline AlgebraElement gram_projection(const AlgebraElement& x, int max_level) {
  const ContextPtr ctx = x.context();
  AlgebraElement out = AlgebraElement::zero(ctx);
  for (int level = 0; level <= max_level; ++level) {
    const AlgebraElement w = sphere_sum(ctx, level);
    const Rational coeff = inner_product(x, w) / w.norm_sq();
    out = out + coeff * w;
  }
  return out;
}

/// PSD by checking every principal minor; exponential, for small matrices.
inline bool psd_all_minors(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  for (std::size_t mask = 1; mask < (1u << n); ++mask) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    // determinant by fraction-free-ish Gaussian elimination on rationals
    const std::size_t k = idx.size();
    std::vector<std::vector<Rational>> sub(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub[i][j] = m[idx[i]][idx[j]];
    Rational det(1);
    bool singular = false;
    for (std::size_t col = 0; col < k && !singular; ++col) {
      std::size_t pivot = col;
      while (pivot < k && sub[pivot][col] == 0) ++pivot;
      if (pivot == k) {
        singular = true;
        break;
      }
      if (pivot != col) {
        std::swap(sub[pivot], sub[col]);
        det = -det;
      }
      det *= sub[col][col];
      for (std::size_t row = col + 1; row < k; ++row) {
        if (sub[row][col] == 0) continue;
        const Rational f = sub[row][col] / sub[col][col];
        for (std::size_t j = col; j < k; ++j) sub[row][j] -= f * sub[col][j];
      }
    }
    if (singular) continue;  // zero minor is fine for PSD
    if (det < 0) return false;
  }
  return true;
}

}  // namespace gvna::oracles
