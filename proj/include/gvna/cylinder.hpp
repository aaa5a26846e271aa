#pragma once

#include <algorithm>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/rational.hpp"

namespace gvna {

/// A cylinder function on {0,1}^N with the fair-coin product measure: a
/// table of 2^depth rational values indexed by the first `depth`
/// coordinates (coordinate j is bit j-1 of the index). Stored at the
/// canonical minimal depth, so equality is decidable tablewise.
class CylinderFunction {
 public:
  CylinderFunction() : depth_(0), values_{Rational(0)} {}

  static CylinderFunction constant(const Rational& c) {
    CylinderFunction f;
    f.values_[0] = c;
    return f;
  }

  /// chi_{F_n} with F_n = {x : x_n = 1}, n >= 1.
  static CylinderFunction coordinate_indicator(int n) {
    if (n < 1) throw input_error("coordinate index must be >= 1");
    CylinderFunction f;
    f.depth_ = n;
    f.values_.assign(static_cast<std::size_t>(1) << n, Rational(0));
    for (std::size_t i = 0; i < f.values_.size(); ++i)
      if (i & (static_cast<std::size_t>(1) << (n - 1))) f.values_[i] = 1;
    return f;
  }

  static CylinderFunction from_values(int depth, std::vector<Rational> values) {
    if (depth < 0 || values.size() != (static_cast<std::size_t>(1) << depth))
      throw input_error("cylinder table size must be 2^depth");
    CylinderFunction f;
    f.depth_ = depth;
    f.values_ = std::move(values);
    f.compress();
    return f;
  }

  int depth() const { return depth_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Integral against the fair-coin measure: the average of the table.
  Rational trace() const {
    Rational s(0);
    for (const Rational& v : values_) s += v;
    return s / Rational(static_cast<long long>(values_.size()));
  }

  bool is_projection() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](const Rational& v) { return v == 0 || v == 1; });
  }

  friend CylinderFunction operator+(const CylinderFunction& f, const CylinderFunction& g) {
    return pointwise(f, g, [](const Rational& a, const Rational& b) { return a + b; });
  }
  friend CylinderFunction operator-(const CylinderFunction& f, const CylinderFunction& g) {
    return pointwise(f, g, [](const Rational& a, const Rational& b) { return a - b; });
  }
  friend CylinderFunction operator*(const CylinderFunction& f, const CylinderFunction& g) {
    return pointwise(f, g, [](const Rational& a, const Rational& b) { return a * b; });
  }
  friend CylinderFunction operator*(const Rational& c, const CylinderFunction& f) {
    CylinderFunction r = f;
    for (Rational& v : r.values_) v *= c;
    r.compress();
    return r;
  }
  friend CylinderFunction operator-(const CylinderFunction& f) { return Rational(-1) * f; }

  friend bool operator==(const CylinderFunction& f, const CylinderFunction& g) {
    return f.depth_ == g.depth_ && f.values_ == g.values_;
  }
  friend bool operator!=(const CylinderFunction& f, const CylinderFunction& g) {
    return !(f == g);
  }

  std::vector<std::string> value_strings() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const Rational& v : values_) out.push_back(to_fraction_string(v));
    return out;
  }

 private:
  template <typename Op>
  static CylinderFunction pointwise(const CylinderFunction& f, const CylinderFunction& g, Op op) {
    const int d = std::max(f.depth_, g.depth_);
    CylinderFunction r;
    r.depth_ = d;
    r.values_.resize(static_cast<std::size_t>(1) << d);
    const std::size_t fm = f.values_.size() - 1;
    const std::size_t gm = g.values_.size() - 1;
    for (std::size_t i = 0; i < r.values_.size(); ++i)
      r.values_[i] = op(f.values_[i & fm], g.values_[i & gm]);
    r.compress();
    return r;
  }

  // drop the last coordinate while the table does not depend on it
  void compress() {
    while (depth_ > 0) {
      const std::size_t half = values_.size() / 2;
      bool constant = true;
      for (std::size_t i = 0; i < half && constant; ++i)
        constant = (values_[i] == values_[i + half]);
      if (!constant) break;
      values_.resize(half);
      --depth_;
    }
  }

  int depth_;
  std::vector<Rational> values_;
};

/// The canonical conditional expectation onto span{p, 1-p} for a
/// non-degenerate projection p: E(f) = tau(fp)/tau(p) p + tau(fq)/tau(q) q.
inline CylinderFunction two_projection_expect(const CylinderFunction& f,
                                              const CylinderFunction& p) {
  if (!p.is_projection()) throw input_error("two_projection_expect needs a 0/1-valued function");
  const Rational tp = p.trace();
  if (tp == 0 || tp == 1)
    throw input_error("degenerate projection: tau(p) must lie strictly between 0 and 1");
  const CylinderFunction q = CylinderFunction::constant(Rational(1)) - p;
  const Rational tq = q.trace();
  return ((f * p).trace() / tp) * p + ((f * q).trace() / tq) * q;
}

/// The same two-term pairing formula for an arbitrary self-adjoint a with
/// b = 1 - a. For a genuine projection this coincides with
/// two_projection_expect; for the scaled weak limit a = p/2 it is the
/// would-be expectation whose failure of idempotence the non-compactness
/// argument exploits.
struct SpanPairProjection {
  Rational coeff_a;
  Rational coeff_b;
  CylinderFunction value;
};

inline SpanPairProjection span_pair_project(const CylinderFunction& f, const CylinderFunction& a) {
  const Rational ta = a.trace();
  const CylinderFunction b = CylinderFunction::constant(Rational(1)) - a;
  const Rational tb = b.trace();
  if (ta == 0 || tb == 0) throw input_error("span pair projection needs tau(a), tau(1-a) nonzero");
  SpanPairProjection r;
  r.coeff_a = (f * a).trace() / ta;
  r.coeff_b = (f * b).trace() / tb;
  r.value = r.coeff_a * a + r.coeff_b * b;
  return r;
}

/// tau(p_n f g) for p_n = chi_{F_1} chi_{F_n}. Once n exceeds the depth of
/// f*g the value is exactly tau((1/2) p_1 f g) by independence; the report
/// carries each computed pairing and the index from which they stabilize.
struct PairingLimit {
  std::vector<Rational> values;  // values[i] = tau(p_{i+1} f g)
  Rational limit;
  int stabilization_index;
};

inline PairingLimit wot_pairing_limit(const CylinderFunction& f, const CylinderFunction& g,
                                      int extra_steps = 2) {
  if (extra_steps < 1) throw input_error("need at least one step beyond the depth");
  const CylinderFunction fg = f * g;
  const CylinderFunction p1 = CylinderFunction::coordinate_indicator(1);
  const int depth = std::max(fg.depth(), 1);
  PairingLimit out;
  out.limit = (Rational(1, 2) * p1 * fg).trace();
  for (int n = 1; n <= depth + extra_steps; ++n) {
    const CylinderFunction pn = p1 * CylinderFunction::coordinate_indicator(n);
    out.values.push_back((pn * fg).trace());
  }
  int idx = static_cast<int>(out.values.size()) + 1;
  for (int n = static_cast<int>(out.values.size()); n >= 1; --n) {
    if (out.values[static_cast<std::size_t>(n - 1)] != out.limit) break;
    idx = n;
  }
  out.stabilization_index = idx;
  return out;
}

}  // namespace gvna
