#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gvna/algebra.hpp"
#include "gvna/ball.hpp"
#include "gvna/error.hpp"
#include "gvna/group.hpp"
#include "gvna/subgroups.hpp"

namespace gvna {

/// |{g in F_n : word length = level}| = ||w_level||_2^2. This is the
/// enumerated count 2n(2n-1)^(level-1); tests cross-check it against ball
/// enumeration.
inline Integer sphere_size(int rank, long long level) {
  if (rank < 2) throw input_error("spheres of the radial algebra need rank >= 2");
  if (level < 0) throw input_error("negative sphere level");
  if (level == 0) return Integer(1);
  return Integer(2 * rank) *
         boost::multiprecision::pow(Integer(2 * rank - 1), static_cast<unsigned>(level - 1));
}

/// The expansion of an element of the radial subalgebra of L(F_n) in the
/// orthogonal basis {w_level}: stores the plain coefficient r of each
/// w_level, so norm_sq = sum r^2 * ||w_level||_2^2. Spheres are never
/// materialized.
struct SphericalVector {
  int rank = 2;
  std::map<long long, Rational> levels;  // level -> coefficient of w_level

  bool is_zero() const { return levels.empty(); }

  Rational norm_sq() const {
    Rational s(0);
    for (const auto& [level, r] : levels) s += r * r * Rational(sphere_size(rank, level));
    return s;
  }

  /// tau of the represented element: the coefficient of w_0 = lambda_e.
  Rational trace() const {
    const auto it = levels.find(0);
    return it == levels.end() ? Rational(0) : it->second;
  }

  friend bool operator==(const SphericalVector&, const SphericalVector&) = default;
};

/// E_B(x) for the radial subalgebra B of L(F_n): bucket the coefficients
/// of x by word length and divide by the sphere size.
inline SphericalVector radial_spherical(int rank, const AlgebraElement& x) {
  if (!x.context() || x.context()->kind() != GroupContext::Kind::FreeGroup ||
      x.context()->rank() != rank)
    throw input_error("radial_spherical needs an element of the matching free group");
  std::map<long long, Rational> sums;
  for (const auto& [g, c] : x.terms()) sums[word_length(g)] += c;
  SphericalVector v;
  v.rank = rank;
  for (auto& [level, s] : sums) {
    if (s == 0) continue;
    v.levels.emplace(level, s / Rational(sphere_size(rank, level)));
  }
  return v;
}

/// Writes out sum r_level * w_level as a plain algebra element by
/// enumerating the needed spheres. Intended for small levels.
inline AlgebraElement materialize_spherical(const ContextPtr& ctx, const SphericalVector& v,
                                            const BallBudget& budget = {}) {
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup || ctx->rank() != v.rank)
    throw input_error("materialize_spherical context mismatch");
  AlgebraElement out = AlgebraElement::zero(ctx);
  if (v.levels.empty()) return out;
  const long long top = v.levels.rbegin()->first;
  const auto shells = spheres(ctx, static_cast<int>(top), budget);
  std::vector<std::pair<GroupElement, Rational>> terms;
  for (const auto& [level, r] : v.levels)
    for (const GroupElement& g : shells[static_cast<std::size_t>(level)]) terms.emplace_back(g, r);
  return AlgebraElement::from_terms(ctx, terms);
}

/// One matrix-unit block of a finite-dimensional subalgebra:
/// units[s*size + t] = e_{s,t}. Relations are validated at construction of
/// the descriptor.
struct MatrixUnitBlock {
  int size = 1;
  std::vector<AlgebraElement> units;

  const AlgebraElement& unit(int s, int t) const {
    return units[static_cast<std::size_t>(s) * size + static_cast<std::size_t>(t)];
  }
};

/// A finite description of a von Neumann subalgebra M of L(G) together
/// with its canonical trace-preserving conditional expectation.
class SubalgebraDescriptor {
 public:
  enum class Kind {
    Trivial,            // the scalars
    SubgroupAlgebra,    // L(H) for a subgroup oracle H
    RadialAlgebra,      // {sum of generators + inverses}'' in L(F_n)
    FixedPointAlgebra,  // L(G)^phi for a finite-order automorphism
    FiniteDimensional,  // a direct sum of matrix-unit blocks
    RadialTensorFinite  // radial tensor L(Z/k) inside L(F_n x| Z/k)
  };

  static SubalgebraDescriptor trivial(const ContextPtr& ctx) {
    SubalgebraDescriptor d(Kind::Trivial, ctx, "trivial");
    return d;
  }

  static SubalgebraDescriptor subgroup_algebra(const ContextPtr& ctx, SubgroupPredicate pred) {
    if (!pred.contains) throw input_error("subgroup predicate missing");
    if (!pred.contains(identity(ctx)))
      throw input_error("subgroup predicate rejects the identity");
    SubalgebraDescriptor d(Kind::SubgroupAlgebra, ctx, "L(" + pred.name + ")");
    d.pred_ = std::move(pred);
    return d;
  }

  static SubalgebraDescriptor radial(const ContextPtr& ctx) {
    if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup || ctx->rank() < 2)
      throw input_error("radial subalgebra needs a free group of rank >= 2");
    SubalgebraDescriptor d(Kind::RadialAlgebra, ctx, "radial(" + std::to_string(ctx->rank()) + ")");
    d.rank_ = ctx->rank();
    return d;
  }

  static SubalgebraDescriptor fixed_point(const Automorphism& phi) {
    SubalgebraDescriptor d(Kind::FixedPointAlgebra, phi.context(),
                           "fixed_point(" + phi.name() + ")");
    d.aut_ = phi;
    return d;
  }

  static SubalgebraDescriptor finite_dimensional(const ContextPtr& ctx,
                                                 std::vector<MatrixUnitBlock> blocks,
                                                 const std::string& label = "") {
    SubalgebraDescriptor d(Kind::FiniteDimensional, ctx,
                           label.empty() ? "finite_dimensional" : label);
    d.blocks_ = std::move(blocks);
    d.validate_blocks();
    return d;
  }

  /// B = A tensor L(Z/k) inside L(F_n x| Z/k), A the radial subalgebra of
  /// the base. The base automorphism must preserve word length (every
  /// generator permutation does), which keeps A invariant.
  static SubalgebraDescriptor radial_tensor_finite(const ContextPtr& ctx) {
    if (!ctx || ctx->kind() != GroupContext::Kind::Semidirect ||
        ctx->base()->kind() != GroupContext::Kind::FreeGroup || ctx->base()->rank() < 2)
      throw input_error("radial_tensor_finite needs a semidirect context over a free group");
    for (int i = 0; i < ctx->base()->rank(); ++i) {
      const GroupElement g = generator(ctx->base(), i);
      if (word_length(ctx->twist().apply(g)) != 1)
        throw input_error("semidirect twist must preserve word length");
    }
    SubalgebraDescriptor d(Kind::RadialTensorFinite, ctx,
                           "radial(" + std::to_string(ctx->base()->rank()) + ")xL(Z/" +
                               std::to_string(ctx->twist_order()) + ")");
    d.rank_ = ctx->base()->rank();
    return d;
  }

  Kind kind() const { return kind_; }
  const ContextPtr& context() const { return ctx_; }
  const std::string& name() const { return name_; }
  const SubgroupPredicate& predicate() const { return *pred_; }
  const Automorphism& automorphism() const { return *aut_; }
  const std::vector<MatrixUnitBlock>& blocks() const { return blocks_; }
  int radial_rank() const { return rank_; }

  /// Whether expect() applies; radial variants go through the spherical
  /// representation instead because their expectations have exponentially
  /// large supports.
  bool supports_expect() const {
    return kind_ != Kind::RadialAlgebra && kind_ != Kind::RadialTensorFinite;
  }

  bool supports_conjugation() const {
    return kind_ != Kind::RadialAlgebra && kind_ != Kind::RadialTensorFinite;
  }

  /// The descriptor of lambda_s M lambda_s^*.
  SubalgebraDescriptor conjugated_by(const GroupElement& s) const;

 private:
  SubalgebraDescriptor(Kind kind, ContextPtr ctx, std::string name)
      : kind_(kind), ctx_(std::move(ctx)), name_(std::move(name)) {
    if (!ctx_) throw input_error("null context");
  }

  void validate_blocks() const;

  Kind kind_;
  ContextPtr ctx_;
  std::string name_;
  std::optional<SubgroupPredicate> pred_;
  std::optional<Automorphism> aut_;
  std::vector<MatrixUnitBlock> blocks_;
  int rank_ = 0;
};

inline void SubalgebraDescriptor::validate_blocks() const {
  if (blocks_.empty()) throw input_error("finite-dimensional descriptor needs blocks");
  AlgebraElement sum = AlgebraElement::zero(ctx_);
  const AlgebraElement zero = AlgebraElement::zero(ctx_);
  for (const auto& b : blocks_) {
    if (b.size < 1 || b.units.size() != static_cast<std::size_t>(b.size) * b.size)
      throw input_error("matrix-unit block has the wrong unit count");
    for (const auto& u : b.units)
      if (!u.context()->same_as(*ctx_)) throw input_error("matrix-unit context mismatch");
    for (int s = 0; s < b.size; ++s)
      for (int t = 0; t < b.size; ++t) {
        if (b.unit(s, t).adjoint() != b.unit(t, s))
          throw input_error("matrix units are not adjoint-symmetric");
        for (int u = 0; u < b.size; ++u)
          for (int v = 0; v < b.size; ++v) {
            const AlgebraElement prod = b.unit(s, t) * b.unit(u, v);
            if (t == u) {
              if (prod != b.unit(s, v)) throw input_error("matrix-unit relation e_st e_tv = e_sv fails");
            } else if (prod != zero) {
              throw input_error("matrix-unit relation e_st e_uv = 0 fails");
            }
          }
        if (s == t && b.unit(s, s).trace() <= 0)
          throw input_error("diagonal matrix unit must have positive trace");
      }
    AlgebraElement p = AlgebraElement::zero(ctx_);
    for (int s = 0; s < b.size; ++s) p = p + b.unit(s, s);
    sum = sum + p;
  }
  for (std::size_t i = 0; i < blocks_.size(); ++i)
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      if (i == j) continue;
      for (const auto& u : blocks_[i].units)
        for (const auto& v : blocks_[j].units)
          if (!(u * v).is_zero()) throw input_error("matrix-unit blocks are not orthogonal");
    }
  if (sum != AlgebraElement::unit(ctx_))
    throw input_error("block projections must sum to the unit");
}

// ---------------------------------------------------------------------------
// conditional expectations

/// The canonical trace-preserving conditional expectation E_M(x). For the
/// radial variants use radial_spherical / radial_tensor_spherical.
inline AlgebraElement expect(const SubalgebraDescriptor& M, const AlgebraElement& x) {
  if (!x.context()->same_as(*M.context()))
    throw input_error("descriptor/element context mismatch");
  switch (M.kind()) {
    case SubalgebraDescriptor::Kind::Trivial:
      return x.trace() * AlgebraElement::unit(x.context());
    case SubalgebraDescriptor::Kind::SubgroupAlgebra: {
      std::vector<std::pair<GroupElement, Rational>> kept;
      for (const auto& [g, c] : x.terms())
        if (M.predicate().contains(g)) kept.emplace_back(g, c);
      return AlgebraElement::from_terms(x.context(), kept);
    }
    case SubalgebraDescriptor::Kind::FixedPointAlgebra: {
      const int k = M.automorphism().order();
      AlgebraElement acc = x;
      AlgebraElement image = x;
      for (int i = 1; i < k; ++i) {
        image = image.mapped(M.automorphism());
        acc = acc + image;
      }
      return Rational(1, k) * acc;
    }
    case SubalgebraDescriptor::Kind::FiniteDimensional: {
      // E(y) = sum_i sum_{s,t} tau(e^i_{t,s} y) / tau(e^i_{t,t}) e^i_{s,t}
      AlgebraElement out = AlgebraElement::zero(x.context());
      for (const auto& b : M.blocks())
        for (int s = 0; s < b.size; ++s)
          for (int t = 0; t < b.size; ++t) {
            const Rational num = (b.unit(t, s) * x).trace();
            if (num == 0) continue;
            out = out + (num / b.unit(t, t).trace()) * b.unit(s, t);
          }
      return out;
    }
    case SubalgebraDescriptor::Kind::RadialAlgebra:
    case SubalgebraDescriptor::Kind::RadialTensorFinite:
      throw input_error(
          "radial expectations have exponentially large supports; use radial_spherical");
  }
  throw input_error("unreachable descriptor kind");
}

/// E_B for B = A tensor L(Z/k): the base radial expectation applied per
/// twist component, E_{A (x) id}. Keyed by twist.
inline std::map<long long, SphericalVector> radial_tensor_spherical(const SubalgebraDescriptor& M,
                                                                    const AlgebraElement& x) {
  if (M.kind() != SubalgebraDescriptor::Kind::RadialTensorFinite)
    throw input_error("radial_tensor_spherical needs a RadialTensorFinite descriptor");
  if (!x.context()->same_as(*M.context()))
    throw input_error("descriptor/element context mismatch");
  std::map<long long, AlgebraElement> components;
  const ContextPtr base = M.context()->base();
  for (const auto& [g, c] : x.terms()) {
    auto [it, fresh] = components.try_emplace(g.twist(), AlgebraElement::zero(base));
    it->second = it->second + c * AlgebraElement::basis(g.twisted_base());
  }
  std::map<long long, SphericalVector> out;
  for (const auto& [twist, xe] : components) {
    SphericalVector v = radial_spherical(M.radial_rank(), xe);
    if (!v.is_zero()) out.emplace(twist, std::move(v));
  }
  return out;
}

/// ||E_M(x)||_2^2 without materializing radial expectations.
inline Rational expectation_norm_sq(const SubalgebraDescriptor& M, const AlgebraElement& x) {
  switch (M.kind()) {
    case SubalgebraDescriptor::Kind::RadialAlgebra:
      return radial_spherical(M.radial_rank(), x).norm_sq();
    case SubalgebraDescriptor::Kind::RadialTensorFinite: {
      Rational s(0);
      for (const auto& [twist, v] : radial_tensor_spherical(M, x)) s += v.norm_sq();
      return s;
    }
    default:
      return expect(M, x).norm_sq();
  }
}

/// phi_M(g) = tau_0(E_M(lambda_g) lambda_g^*) = ||E_M(lambda_g)||_2^2.
/// Values are exact rationals in [0, 1].
inline Rational phi_value(const SubalgebraDescriptor& M, const GroupElement& g) {
  if (!g.context()->same_as(*M.context()))
    throw input_error("descriptor/element context mismatch");
  switch (M.kind()) {
    case SubalgebraDescriptor::Kind::Trivial:
      return g.is_identity() ? Rational(1) : Rational(0);
    case SubalgebraDescriptor::Kind::SubgroupAlgebra:
      return M.predicate().contains(g) ? Rational(1) : Rational(0);
    case SubalgebraDescriptor::Kind::RadialAlgebra:
      return g.is_identity() ? Rational(1)
                             : Rational(1) / Rational(sphere_size(M.radial_rank(), word_length(g)));
    case SubalgebraDescriptor::Kind::FixedPointAlgebra:
      return Rational(1, static_cast<long long>(orbit_of(M.automorphism(), g).size()));
    case SubalgebraDescriptor::Kind::FiniteDimensional:
      return expect(M, AlgebraElement::basis(g)).norm_sq();
    case SubalgebraDescriptor::Kind::RadialTensorFinite: {
      const GroupElement& base = g.twisted_base();
      return base.is_identity()
                 ? Rational(1)
                 : Rational(1) / Rational(sphere_size(M.radial_rank(), word_length(base)));
    }
  }
  throw input_error("unreachable descriptor kind");
}

/// E_{M^s}(x) = lambda_s E_M(lambda_s^* x lambda_s) lambda_s^*, the
/// canonical expectation onto the conjugated subalgebra.
inline AlgebraElement conjugated_expect(const SubalgebraDescriptor& M, const GroupElement& s,
                                        const AlgebraElement& x) {
  if (!s.context()->same_as(*M.context()))
    throw input_error("conjugator/descriptor context mismatch");
  const AlgebraElement us = AlgebraElement::basis(s);
  const AlgebraElement usi = AlgebraElement::basis(inv(s));
  return us * expect(M, usi * x * us) * usi;
}

/// Spherical form of E_{B^s}(x) for the radial subalgebra: the expansion of
/// E_B(lambda_s^* x lambda_s); conjugation by a unitary leaves the norm and
/// trace unchanged.
inline SphericalVector conjugated_radial_spherical(int rank, const GroupElement& s,
                                                   const AlgebraElement& x) {
  const AlgebraElement us = AlgebraElement::basis(s);
  const AlgebraElement usi = AlgebraElement::basis(inv(s));
  return radial_spherical(rank, usi * x * us);
}

inline SubalgebraDescriptor SubalgebraDescriptor::conjugated_by(const GroupElement& s) const {
  if (!s.context()->same_as(*ctx_)) throw input_error("conjugator context mismatch");
  switch (kind_) {
    case Kind::Trivial:
      return *this;
    case Kind::SubgroupAlgebra:
      return subgroup_algebra(ctx_, conjugated_subgroup(*pred_, s));
    case Kind::FixedPointAlgebra:
      return fixed_point(Automorphism::conjugated_by(s, *aut_));
    case Kind::FiniteDimensional: {
      const AlgebraElement us = AlgebraElement::basis(s);
      const AlgebraElement usi = AlgebraElement::basis(inv(s));
      std::vector<MatrixUnitBlock> conj_blocks;
      for (const auto& b : blocks_) {
        MatrixUnitBlock nb;
        nb.size = b.size;
        for (const auto& u : b.units) nb.units.push_back(us * u * usi);
        conj_blocks.push_back(std::move(nb));
      }
      return finite_dimensional(ctx_, std::move(conj_blocks), name_ + "^s");
    }
    case Kind::RadialAlgebra:
    case Kind::RadialTensorFinite:
      throw input_error("conjugated radial algebras are handled through conjugated_radial_spherical");
  }
  throw input_error("unreachable descriptor kind");
}

// ---------------------------------------------------------------------------
// the index-4 corner obstruction in Q[Z * Z/2]

/// e_11 lambda_{s^-k} e_22 lambda_{s^k} e_11 with e_11 = (1+t)/2 and
/// e_22 = (1-t)/2, computed by convolution. Nonzero for every k >= 1,
/// which certifies that s^k stays outside the index-4 corner subalgebra.
inline AlgebraElement matrix_unit_obstruction(const ContextPtr& ctx, long long k) {
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeProductOfCyclics ||
      ctx->orders() != std::vector<long long>{0, 2})
    throw input_error("matrix_unit_obstruction needs the free product Z * Z/2 (orders 0, 2)");
  if (k <= 0) throw input_error("matrix_unit_obstruction needs k >= 1");
  const Rational half(1, 2);
  const AlgebraElement one = AlgebraElement::unit(ctx);
  const AlgebraElement t = AlgebraElement::basis(generator(ctx, 1));
  const AlgebraElement e11 = half * (one + t);
  const AlgebraElement e22 = half * (one - t);
  const AlgebraElement sk = AlgebraElement::basis(generator(ctx, 0, k));
  const AlgebraElement smk = AlgebraElement::basis(generator(ctx, 0, -k));
  return e11 * smk * e22 * sk * e11;
}

}  // namespace gvna
