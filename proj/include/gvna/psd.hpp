#pragma once

#include <vector>

#include "gvna/error.hpp"
#include "gvna/rational.hpp"

namespace gvna {

/// Outcome of an exact positive-semidefiniteness decision. On failure,
/// `witness_indices` names a principal submatrix whose determinant
/// `witness_minor` is negative.
struct PsdVerdict {
  bool psd = false;
  std::vector<std::size_t> witness_indices;
  Rational witness_minor;
};

/// Decides PSD for a symmetric rational matrix by pivoted Schur
/// elimination: pick a positive diagonal pivot, eliminate, recurse. A
/// negative diagonal entry or a zero diagonal with nonzero off-diagonal
/// residue yields an explicit negative principal minor. No floating point
/// anywhere in the verdict path.
inline PsdVerdict psd_check(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  for (const auto& row : m)
    if (row.size() != n) throw input_error("psd_check needs a square matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (m[i][j] != m[j][i]) throw input_error("psd_check needs a symmetric matrix");

  std::vector<std::size_t> pivots;
  std::vector<bool> used(n, false);
  Rational pivot_product(1);

  while (true) {
    // negative diagonal: principal minor over pivots + {i} is negative
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (m[i][i] < 0) {
        PsdVerdict v;
        v.psd = false;
        v.witness_indices = pivots;
        v.witness_indices.push_back(i);
        v.witness_minor = pivot_product * m[i][i];
        return v;
      }
    }
    std::size_t pivot = n;
    for (std::size_t i = 0; i < n; ++i) {
      if (!used[i] && m[i][i] > 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) {
      // all remaining diagonals are zero; any nonzero off-diagonal entry
      // closes a negative 2x2 principal minor
      for (std::size_t i = 0; i < n; ++i) {
        if (used[i]) continue;
        for (std::size_t j = i + 1; j < n; ++j) {
          if (used[j]) continue;
          if (m[i][j] != 0) {
            PsdVerdict v;
            v.psd = false;
            v.witness_indices = pivots;
            v.witness_indices.push_back(i);
            v.witness_indices.push_back(j);
            v.witness_minor = pivot_product * (-(m[i][j] * m[i][j]));
            return v;
          }
        }
      }
      PsdVerdict v;
      v.psd = true;
      return v;
    }
    used[pivot] = true;
    pivots.push_back(pivot);
    const Rational d = m[pivot][pivot];
    pivot_product *= d;
    for (std::size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      if (m[i][pivot] == 0) continue;
      const Rational factor = m[i][pivot] / d;
      for (std::size_t j = 0; j < n; ++j) {
        if (used[j]) continue;
        m[i][j] -= factor * m[pivot][j];
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      m[pivot][j] = 0;
      m[j][pivot] = 0;
    }
  }
}

}  // namespace gvna
