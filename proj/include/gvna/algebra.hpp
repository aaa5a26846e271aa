#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/group.hpp"
#include "gvna/rational.hpp"
#include "gvna/words.hpp"

namespace gvna {

/// A finitely supported rational combination of group elements: an element
/// of the dense *-subalgebra Q[G] of the group von Neumann algebra. Zero
/// coefficients are never stored; the support map iterates in the canonical
/// element order, so serialization is deterministic.
class AlgebraElement {
 public:
  using Terms = std::map<GroupElement, Rational>;

  explicit AlgebraElement(ContextPtr ctx) : ctx_(std::move(ctx)) {
    if (!ctx_) throw input_error("null context");
  }

  static AlgebraElement zero(const ContextPtr& ctx) { return AlgebraElement(ctx); }
  static AlgebraElement unit(const ContextPtr& ctx) { return basis(identity(ctx)); }
  /// lambda_g
  static AlgebraElement basis(const GroupElement& g) {
    AlgebraElement x(g.context());
    x.terms_.emplace(g, Rational(1));
    return x;
  }
  static AlgebraElement from_terms(const ContextPtr& ctx,
                                   const std::vector<std::pair<GroupElement, Rational>>& terms) {
    AlgebraElement x(ctx);
    for (const auto& [g, c] : terms) {
      if (!g.context()->same_as(*ctx)) throw input_error("term context mismatch");
      x.add_term(g, c);
    }
    return x;
  }

  const ContextPtr& context() const { return ctx_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t support_size() const { return terms_.size(); }

  Rational coefficient(const GroupElement& g) const {
    const auto it = terms_.find(g);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  /// tau_0: the coefficient of the identity.
  Rational trace() const {
    for (const auto& [g, c] : terms_) {
      if (g.is_identity()) return c;
    }
    return Rational(0);
  }

  Rational norm_sq() const {
    Rational s(0);
    for (const auto& [g, c] : terms_) s += c * c;
    return s;
  }

  /// sum of conj(c_g) lambda_{g^-1}; coefficients are rational, so
  /// conjugation is the identity.
  AlgebraElement adjoint() const {
    AlgebraElement r(ctx_);
    for (const auto& [g, c] : terms_) r.add_term(inv(g), c);
    return r;
  }

  /// Relabels the support along a context automorphism.
  AlgebraElement mapped(const Automorphism& phi) const {
    AlgebraElement r(ctx_);
    for (const auto& [g, c] : terms_) r.add_term(phi.apply(g), c);
    return r;
  }

  friend AlgebraElement operator+(const AlgebraElement& x, const AlgebraElement& y) {
    check_contexts(x, y);
    AlgebraElement r = x;
    for (const auto& [g, c] : y.terms_) r.add_term(g, c);
    return r;
  }
  friend AlgebraElement operator-(const AlgebraElement& x, const AlgebraElement& y) {
    check_contexts(x, y);
    AlgebraElement r = x;
    for (const auto& [g, c] : y.terms_) r.add_term(g, -c);
    return r;
  }
  friend AlgebraElement operator-(const AlgebraElement& x) {
    AlgebraElement r(x.ctx_);
    for (const auto& [g, c] : x.terms_) r.terms_.emplace(g, -c);
    return r;
  }
  /// Convolution: lambda_g * lambda_h = lambda_{gh}, extended bilinearly.
  friend AlgebraElement operator*(const AlgebraElement& x, const AlgebraElement& y) {
    check_contexts(x, y);
    AlgebraElement r(x.ctx_);
    for (const auto& [g, c] : x.terms_)
      for (const auto& [h, d] : y.terms_) r.add_term(mul(g, h), c * d);
    return r;
  }
  friend AlgebraElement operator*(const Rational& c, const AlgebraElement& x) {
    AlgebraElement r(x.ctx_);
    if (c != 0)
      for (const auto& [g, v] : x.terms_) r.terms_.emplace(g, c * v);
    return r;
  }
  friend AlgebraElement operator*(const AlgebraElement& x, const Rational& c) { return c * x; }

  friend bool operator==(const AlgebraElement& x, const AlgebraElement& y) {
    return x.terms_ == y.terms_;
  }
  friend bool operator!=(const AlgebraElement& x, const AlgebraElement& y) { return !(x == y); }

  /// Sorted (word syntax, "num/den") pairs.
  std::vector<std::pair<std::string, std::string>> term_strings() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.reserve(terms_.size());
    for (const auto& [g, c] : terms_) out.emplace_back(format_element(g), to_fraction_string(c));
    return out;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [g, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + to_fraction_string(c) + ")*" + format_element(g);
    }
    return out;
  }

 private:
  static void check_contexts(const AlgebraElement& x, const AlgebraElement& y) {
    if (x.ctx_ == y.ctx_) return;
    if (!x.ctx_->same_as(*y.ctx_)) throw input_error("algebra context mismatch");
  }

  void add_term(const GroupElement& g, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(g, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  ContextPtr ctx_;
  Terms terms_;
};

/// <x, y> = tau_0(y* x). For rational coefficients this is the sum of
/// coordinatewise products over the common support.
inline Rational inner_product(const AlgebraElement& x, const AlgebraElement& y) {
  if (x.context() != y.context() && !x.context()->same_as(*y.context()))
    throw input_error("algebra context mismatch");
  const auto& a = x.terms();
  const auto& b = y.terms();
  Rational s(0);
  if (a.size() <= b.size()) {
    for (const auto& [g, c] : a) {
      const auto it = b.find(g);
      if (it != b.end()) s += c * it->second;
    }
  } else {
    for (const auto& [g, c] : b) {
      const auto it = a.find(g);
      if (it != a.end()) s += c * it->second;
    }
  }
  return s;
}

inline Rational norm_sq(const AlgebraElement& x) { return x.norm_sq(); }

}  // namespace gvna
