#pragma once

#include <utility>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/rational.hpp"

namespace gvna {

/// Dense square matrix over the exact integers. Small dimensions only
/// (the determinant and adjugate use cofactor expansion).
struct IntMatrix {
  int dim = 0;
  std::vector<Integer> a;  // row-major, dim*dim entries

  IntMatrix() = default;
  IntMatrix(int d, std::vector<Integer> entries) : dim(d), a(std::move(entries)) {
    if (d <= 0 || a.size() != static_cast<std::size_t>(d) * d)
      throw input_error("matrix entry count does not match dimension");
  }

  static IntMatrix identity(int d) {
    IntMatrix m(d, std::vector<Integer>(static_cast<std::size_t>(d) * d, Integer(0)));
    for (int i = 0; i < d; ++i) m.at(i, i) = 1;
    return m;
  }

  const Integer& at(int i, int j) const { return a[static_cast<std::size_t>(i) * dim + j]; }
  Integer& at(int i, int j) { return a[static_cast<std::size_t>(i) * dim + j]; }

  bool is_identity() const {
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  IntMatrix transposed() const {
    IntMatrix t = *this;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) t.at(i, j) = at(j, i);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& x, const IntMatrix& y) {
    if (x.dim != y.dim) throw input_error("matrix dimension mismatch");
    IntMatrix r(x.dim, std::vector<Integer>(x.a.size(), Integer(0)));
    for (int i = 0; i < x.dim; ++i)
      for (int k = 0; k < x.dim; ++k) {
        const Integer& xik = x.at(i, k);
        if (xik == 0) continue;
        for (int j = 0; j < x.dim; ++j) r.at(i, j) += xik * y.at(k, j);
      }
    return r;
  }

  friend bool operator==(const IntMatrix& x, const IntMatrix& y) {
    return x.dim == y.dim && x.a == y.a;
  }
};

inline int compare(const IntMatrix& x, const IntMatrix& y) {
  if (x.dim != y.dim) return x.dim < y.dim ? -1 : 1;
  for (std::size_t i = 0; i < x.a.size(); ++i) {
    if (x.a[i] != y.a[i]) return x.a[i] < y.a[i] ? -1 : 1;
  }
  return 0;
}

namespace detail {

inline IntMatrix minor_matrix(const IntMatrix& m, int row, int col) {
  IntMatrix r(m.dim - 1, std::vector<Integer>(static_cast<std::size_t>(m.dim - 1) * (m.dim - 1)));
  int ri = 0;
  for (int i = 0; i < m.dim; ++i) {
    if (i == row) continue;
    int rj = 0;
    for (int j = 0; j < m.dim; ++j) {
      if (j == col) continue;
      r.at(ri, rj) = m.at(i, j);
      ++rj;
    }
    ++ri;
  }
  return r;
}

}  // namespace detail

inline Integer determinant(const IntMatrix& m) {
  if (m.dim == 1) return m.at(0, 0);
  if (m.dim == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  Integer det = 0;
  for (int j = 0; j < m.dim; ++j) {
    if (m.at(0, j) == 0) continue;
    const Integer sub = determinant(detail::minor_matrix(m, 0, j));
    det += (j % 2 == 0 ? 1 : -1) * m.at(0, j) * sub;
  }
  return det;
}

/// Inverse of a determinant-one matrix via the adjugate; exact integers.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  if (determinant(m) != 1) throw input_error("unimodular_inverse requires determinant 1");
  IntMatrix r(m.dim, std::vector<Integer>(m.a.size()));
  if (m.dim == 1) {
    r.at(0, 0) = 1;
    return r;
  }
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      const Integer cof = determinant(detail::minor_matrix(m, j, i));
      r.at(i, j) = ((i + j) % 2 == 0 ? 1 : -1) * cof;
    }
  return r;
}

namespace detail {

using Poly = std::vector<Integer>;  // coefficient of x^k at index k

inline Poly poly_sub(const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), Integer(0));
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] -= y[i];
  return r;
}

inline Poly poly_add(const Poly& x, const Poly& y) {
  Poly r(std::max(x.size(), y.size()), Integer(0));
  for (std::size_t i = 0; i < x.size(); ++i) r[i] += x[i];
  for (std::size_t i = 0; i < y.size(); ++i) r[i] += y[i];
  return r;
}

inline Poly poly_mul(const Poly& x, const Poly& y) {
  if (x.empty() || y.empty()) return {};
  Poly r(x.size() + y.size() - 1, Integer(0));
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) r[i + j] += x[i] * y[j];
  return r;
}

inline Poly poly_det(const std::vector<Poly>& m, int d) {
  if (d == 1) return m[0];
  std::vector<Poly> sub(static_cast<std::size_t>(d - 1) * (d - 1));
  Poly det;
  for (int j = 0; j < d; ++j) {
    for (int i = 1; i < d; ++i) {
      int rj = 0;
      for (int k = 0; k < d; ++k) {
        if (k == j) continue;
        sub[static_cast<std::size_t>(i - 1) * (d - 1) + rj] = m[static_cast<std::size_t>(i) * d + k];
        ++rj;
      }
    }
    Poly term = poly_mul(m[j], poly_det(sub, d - 1));
    det = (j % 2 == 0) ? poly_add(det, term) : poly_sub(det, term);
  }
  return det;
}

}  // namespace detail

/// Coefficients of det(xI - A), lowest degree first; size dim+1, monic.
inline std::vector<Integer> char_poly(const IntMatrix& m) {
  std::vector<detail::Poly> entries(static_cast<std::size_t>(m.dim) * m.dim);
  for (int i = 0; i < m.dim; ++i)
    for (int j = 0; j < m.dim; ++j) {
      detail::Poly p{-m.at(i, j)};
      if (i == j) p.push_back(Integer(1));
      entries[static_cast<std::size_t>(i) * m.dim + j] = std::move(p);
    }
  detail::Poly det = detail::poly_det(entries, m.dim);
  det.resize(m.dim + 1, Integer(0));
  return det;
}

inline std::string poly_to_string(const std::vector<Integer>& p) {
  std::string out;
  for (int k = static_cast<int>(p.size()) - 1; k >= 0; --k) {
    const Integer& c = p[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (!out.empty()) out += (c > 0) ? " + " : " - ";
    else if (c < 0) out += "-";
    const Integer abs_c = boost::multiprecision::abs(c);
    const bool unit = (abs_c == 1) && k != 0;
    if (!unit) out += abs_c.str();
    if (k > 0) {
      if (!unit) out += "*";
      out += "x";
      if (k > 1) out += "^" + std::to_string(k);
    }
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace gvna
