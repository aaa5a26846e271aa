#pragma once

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/intmatrix.hpp"

namespace gvna {

class GroupContext;
class GroupElement;
class Automorphism;
using ContextPtr = std::shared_ptr<const GroupContext>;

/// One block of a normal-form word: generator index and nonzero exponent.
/// In a free product the exponent of a finite-order generator is reduced
/// into [1, order).
struct Syllable {
  int gen = 0;
  long long exp = 0;
  friend bool operator==(const Syllable&, const Syllable&) = default;
  friend bool operator<(const Syllable& a, const Syllable& b) {
    if (a.gen != b.gen) return a.gen < b.gen;
    return a.exp < b.exp;
  }
};

/// Finite-order automorphism of a group context. Applying it `order()`
/// times is the identity; this is validated at construction wherever a
/// generating set is available.
class Automorphism {
 public:
  /// Images of the generators of a free or free-product context.
  static Automorphism from_generator_images(ContextPtr ctx, std::vector<GroupElement> images,
                                            int declared_order, std::string name = "table");
  /// a <-> b on a rank-2 free group.
  static Automorphism generator_swap(const ContextPtr& free_rank2);
  /// a_i -> a_{i+1} (indices mod rank) on a free group; order = rank.
  static Automorphism cyclic_generator_shift(const ContextPtr& free_ctx);
  /// (x_1,...,x_k) -> (x_k, x_1, ..., x_{k-1}) on a direct power; order = k.
  static Automorphism coordinate_cycle(const ContextPtr& direct_power);
  /// (x, y) -> (y, x); coordinate_cycle on two factors.
  static Automorphism coordinate_flip(const ContextPtr& direct_square);
  /// A -> (A^T)^{-1} on an integer matrix group; order 2.
  static Automorphism inverse_transpose(const ContextPtr& matrix_ctx);
  /// g -> s phi(s^{-1} g s) s^{-1}; the automorphism fixing the conjugated
  /// fixed-point algebra. Same order as phi.
  static Automorphism conjugated_by(const GroupElement& s, const Automorphism& phi);

  GroupElement apply(const GroupElement& g) const;
  GroupElement apply_power(const GroupElement& g, long long times) const;
  int order() const;
  const std::string& name() const;
  const ContextPtr& context() const;

 private:
  struct Impl;
  explicit Automorphism(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// A supported group: free, free product of cyclics, direct product,
/// semidirect extension by a finite-order automorphism, or SL(d, Z).
class GroupContext : public std::enable_shared_from_this<GroupContext> {
 public:
  enum class Kind { FreeGroup, FreeProductOfCyclics, DirectProduct, Semidirect, MatrixGroup };

  static ContextPtr free_group(int rank, std::string_view names = {});
  /// Orders: 0 for an infinite factor, otherwise >= 2.
  static ContextPtr free_product_of_cyclics(std::vector<long long> orders,
                                            std::string_view names = {});
  static ContextPtr direct_product(std::vector<ContextPtr> factors);
  static ContextPtr direct_power(const ContextPtr& factor, int count);
  static ContextPtr semidirect_by_finite_aut(ContextPtr base, Automorphism twist);
  /// SL(dim, Z): integer matrices with determinant exactly 1.
  static ContextPtr special_linear(int dim);

  Kind kind() const { return kind_; }
  int rank() const { return rank_; }
  const std::vector<long long>& orders() const { return orders_; }
  const std::vector<ContextPtr>& factors() const { return factors_; }
  const ContextPtr& base() const { return base_; }
  const Automorphism& twist() const { return *twist_; }
  int twist_order() const { return twist_order_; }
  int dim() const { return dim_; }

  int num_generators() const {
    if (kind_ == Kind::FreeGroup) return rank_;
    if (kind_ == Kind::FreeProductOfCyclics) return static_cast<int>(orders_.size());
    return 0;
  }
  /// 0 means infinite order.
  long long generator_order(int i) const {
    return kind_ == Kind::FreeGroup ? 0 : orders_.at(static_cast<std::size_t>(i));
  }
  std::string generator_name(int i) const {
    if (i >= 0 && static_cast<std::size_t>(i) < gen_names_.size())
      return std::string(1, gen_names_[static_cast<std::size_t>(i)]);
    return "g" + std::to_string(i + 1);
  }
  /// Index of the single-character generator name, or -1.
  int generator_by_name(char c) const {
    for (std::size_t i = 0; i < gen_names_.size(); ++i)
      if (gen_names_[i] == c) return static_cast<int>(i);
    return -1;
  }

  bool same_as(const GroupContext& other) const;

 private:
  GroupContext() = default;
  Kind kind_ = Kind::FreeGroup;
  int rank_ = 0;
  std::vector<long long> orders_;
  std::vector<ContextPtr> factors_;
  ContextPtr base_;
  std::optional<Automorphism> twist_;
  int twist_order_ = 0;
  int dim_ = 0;
  std::vector<char> gen_names_;

  static std::shared_ptr<GroupContext> blank() {
    return std::shared_ptr<GroupContext>(new GroupContext());
  }
};

/// An element in reduced normal form. Normal forms are unique, so equality
/// is representational and every operation returns a reduced value.
class GroupElement {
 public:
  using Word = std::vector<Syllable>;
  using Tuple = std::vector<GroupElement>;
  struct TwistedRep {
    std::vector<GroupElement> base;  // exactly one entry
    long long twist = 0;
    friend bool operator==(const TwistedRep&, const TwistedRep&) = default;
  };
  using Rep = std::variant<Word, Tuple, TwistedRep, IntMatrix>;

  GroupElement() = default;

  const ContextPtr& context() const { return ctx_; }
  const Rep& rep() const { return rep_; }
  const Word& word() const { return std::get<Word>(rep_); }
  const Tuple& parts() const { return std::get<Tuple>(rep_); }
  const GroupElement& twisted_base() const { return std::get<TwistedRep>(rep_).base.front(); }
  long long twist() const { return std::get<TwistedRep>(rep_).twist; }
  const IntMatrix& matrix() const { return std::get<IntMatrix>(rep_); }

  bool is_identity() const;

  friend bool operator==(const GroupElement& x, const GroupElement& y) {
    return x.rep_ == y.rep_;
  }
  friend bool operator!=(const GroupElement& x, const GroupElement& y) { return !(x == y); }

 private:
  GroupElement(ContextPtr ctx, Rep rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {}
  ContextPtr ctx_;
  Rep rep_;

  friend GroupElement identity(const ContextPtr&);
  friend GroupElement reduce(const ContextPtr&, const std::vector<Syllable>&);
  friend GroupElement direct_element(const ContextPtr&, std::vector<GroupElement>);
  friend GroupElement semidirect_element(const ContextPtr&, GroupElement, long long);
  friend GroupElement matrix_element(const ContextPtr&, IntMatrix);
  friend GroupElement mul(const GroupElement&, const GroupElement&);
  friend GroupElement inv(const GroupElement&);
};

// ---------------------------------------------------------------------------
// context construction

inline ContextPtr GroupContext::free_group(int rank, std::string_view names) {
  if (rank < 1) throw input_error("free group rank must be >= 1");
  auto ctx = blank();
  ctx->kind_ = Kind::FreeGroup;
  ctx->rank_ = rank;
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != rank)
      throw input_error("generator name count does not match rank");
    ctx->gen_names_.assign(names.begin(), names.end());
  } else if (rank <= 26) {
    for (int i = 0; i < rank; ++i) ctx->gen_names_.push_back(static_cast<char>('a' + i));
  }
  return ctx;
}

inline ContextPtr GroupContext::free_product_of_cyclics(std::vector<long long> orders,
                                                        std::string_view names) {
  if (orders.empty()) throw input_error("free product needs at least one factor");
  for (long long m : orders)
    if (m != 0 && m < 2) throw input_error("cyclic factor order must be 0 (infinite) or >= 2");
  auto ctx = blank();
  ctx->kind_ = Kind::FreeProductOfCyclics;
  ctx->orders_ = std::move(orders);
  const int n = static_cast<int>(ctx->orders_.size());
  if (!names.empty()) {
    if (static_cast<int>(names.size()) != n)
      throw input_error("generator name count does not match factor count");
    ctx->gen_names_.assign(names.begin(), names.end());
  } else if (n <= 26) {
    for (int i = 0; i < n; ++i) ctx->gen_names_.push_back(static_cast<char>('a' + i));
  }
  return ctx;
}

inline ContextPtr GroupContext::direct_product(std::vector<ContextPtr> factors) {
  if (factors.size() < 2) throw input_error("direct product needs at least two factors");
  for (const auto& f : factors)
    if (!f) throw input_error("null factor context");
  auto ctx = blank();
  ctx->kind_ = Kind::DirectProduct;
  ctx->factors_ = std::move(factors);
  return ctx;
}

inline ContextPtr GroupContext::direct_power(const ContextPtr& factor, int count) {
  if (count < 2) throw input_error("direct power needs at least two factors");
  return direct_product(std::vector<ContextPtr>(static_cast<std::size_t>(count), factor));
}

inline ContextPtr GroupContext::special_linear(int dim) {
  if (dim < 2) throw input_error("matrix group dimension must be >= 2");
  auto ctx = blank();
  ctx->kind_ = Kind::MatrixGroup;
  ctx->dim_ = dim;
  return ctx;
}

// ---------------------------------------------------------------------------
// element construction and arithmetic

inline GroupElement identity(const ContextPtr& ctx) {
  if (!ctx) throw input_error("null context");
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics:
      return GroupElement(ctx, GroupElement::Word{});
    case GroupContext::Kind::DirectProduct: {
      GroupElement::Tuple parts;
      parts.reserve(ctx->factors().size());
      for (const auto& f : ctx->factors()) parts.push_back(identity(f));
      return GroupElement(ctx, std::move(parts));
    }
    case GroupContext::Kind::Semidirect: {
      GroupElement::TwistedRep rep;
      rep.base.push_back(identity(ctx->base()));
      rep.twist = 0;
      return GroupElement(ctx, std::move(rep));
    }
    case GroupContext::Kind::MatrixGroup:
      return GroupElement(ctx, IntMatrix::identity(ctx->dim()));
  }
  throw input_error("unreachable context kind");
}

namespace detail {

// Appends one syllable to a reduced word, merging and dropping as needed.
inline void push_syllable(const GroupContext& ctx, GroupElement::Word& w, int gen, long long exp) {
  if (gen < 0 || gen >= ctx.num_generators())
    throw input_error("unknown generator index " + std::to_string(gen));
  const long long order = ctx.generator_order(gen);
  if (order != 0) exp = ((exp % order) + order) % order;
  if (exp == 0) return;
  if (!w.empty() && w.back().gen == gen) {
    long long combined = w.back().exp + exp;
    if (order != 0) combined = ((combined % order) + order) % order;
    w.pop_back();
    if (combined != 0) w.push_back({gen, combined});
    return;
  }
  w.push_back({gen, exp});
}

}  // namespace detail

/// Reduces a raw symbol sequence to the unique normal form. Free and
/// free-product contexts only.
inline GroupElement reduce(const ContextPtr& ctx, const std::vector<Syllable>& raw) {
  if (!ctx) throw input_error("null context");
  if (ctx->kind() != GroupContext::Kind::FreeGroup &&
      ctx->kind() != GroupContext::Kind::FreeProductOfCyclics)
    throw input_error("reduce applies to free and free-product contexts");
  GroupElement::Word w;
  for (const Syllable& s : raw) detail::push_syllable(*ctx, w, s.gen, s.exp);
  return GroupElement(ctx, std::move(w));
}

inline GroupElement generator(const ContextPtr& ctx, int index, long long exp = 1) {
  return reduce(ctx, {Syllable{index, exp}});
}

inline GroupElement direct_element(const ContextPtr& ctx, std::vector<GroupElement> parts) {
  if (!ctx || ctx->kind() != GroupContext::Kind::DirectProduct)
    throw input_error("direct_element needs a direct-product context");
  if (parts.size() != ctx->factors().size())
    throw input_error("component count does not match direct product arity");
  for (std::size_t i = 0; i < parts.size(); ++i)
    if (!parts[i].context() || !parts[i].context()->same_as(*ctx->factors()[i]))
      throw input_error("component context mismatch in direct product");
  return GroupElement(ctx, std::move(parts));
}

inline GroupElement semidirect_element(const ContextPtr& ctx, GroupElement base, long long twist) {
  if (!ctx || ctx->kind() != GroupContext::Kind::Semidirect)
    throw input_error("semidirect_element needs a semidirect context");
  if (!base.context() || !base.context()->same_as(*ctx->base()))
    throw input_error("base context mismatch in semidirect element");
  const int k = ctx->twist_order();
  twist = ((twist % k) + k) % k;
  GroupElement::TwistedRep rep;
  rep.base.push_back(std::move(base));
  rep.twist = twist;
  return GroupElement(ctx, std::move(rep));
}

inline GroupElement matrix_element(const ContextPtr& ctx, IntMatrix m) {
  if (!ctx || ctx->kind() != GroupContext::Kind::MatrixGroup)
    throw input_error("matrix_element needs a matrix-group context");
  if (m.dim != ctx->dim()) throw input_error("matrix dimension mismatch");
  if (determinant(m) != 1) throw input_error("matrix determinant must be exactly 1");
  return GroupElement(ctx, std::move(m));
}

inline bool GroupElement::is_identity() const {
  return std::visit(
      [](const auto& r) -> bool {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Word>) {
          return r.empty();
        } else if constexpr (std::is_same_v<T, Tuple>) {
          for (const auto& p : r)
            if (!p.is_identity()) return false;
          return true;
        } else if constexpr (std::is_same_v<T, TwistedRep>) {
          return r.twist == 0 && r.base.front().is_identity();
        } else {
          return r.is_identity();
        }
      },
      rep_);
}

inline GroupElement mul(const GroupElement& x, const GroupElement& y);
inline GroupElement inv(const GroupElement& x);

namespace detail {

inline void check_same_context(const GroupElement& x, const GroupElement& y) {
  if (!x.context() || !y.context()) throw input_error("element without context");
  if (x.context() == y.context()) return;
  if (!x.context()->same_as(*y.context())) throw input_error("group context mismatch");
}

}  // namespace detail

inline GroupElement mul(const GroupElement& x, const GroupElement& y) {
  detail::check_same_context(x, y);
  const ContextPtr& ctx = x.context();
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      GroupElement::Word w = x.word();
      for (const Syllable& s : y.word()) detail::push_syllable(*ctx, w, s.gen, s.exp);
      return GroupElement(ctx, std::move(w));
    }
    case GroupContext::Kind::DirectProduct: {
      GroupElement::Tuple parts;
      parts.reserve(x.parts().size());
      for (std::size_t i = 0; i < x.parts().size(); ++i)
        parts.push_back(mul(x.parts()[i], y.parts()[i]));
      return GroupElement(ctx, std::move(parts));
    }
    case GroupContext::Kind::Semidirect: {
      // (w1, e1)(w2, e2) = (w1 * sigma^{e1}(w2), e1 + e2 mod k)
      const GroupElement twisted = ctx->twist().apply_power(y.twisted_base(), x.twist());
      GroupElement base = mul(x.twisted_base(), twisted);
      return semidirect_element(ctx, std::move(base), x.twist() + y.twist());
    }
    case GroupContext::Kind::MatrixGroup:
      return GroupElement(ctx, x.matrix() * y.matrix());
  }
  throw input_error("unreachable context kind");
}

inline GroupElement inv(const GroupElement& x) {
  const ContextPtr& ctx = x.context();
  if (!ctx) throw input_error("element without context");
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      GroupElement::Word w;
      const GroupElement::Word& src = x.word();
      w.reserve(src.size());
      for (auto it = src.rbegin(); it != src.rend(); ++it)
        detail::push_syllable(*ctx, w, it->gen, -it->exp);
      return GroupElement(ctx, std::move(w));
    }
    case GroupContext::Kind::DirectProduct: {
      GroupElement::Tuple parts;
      parts.reserve(x.parts().size());
      for (const auto& p : x.parts()) parts.push_back(inv(p));
      return GroupElement(ctx, std::move(parts));
    }
    case GroupContext::Kind::Semidirect: {
      // (w, e)^{-1} = (sigma^{k-e}(w^{-1}), k - e mod k)
      const int k = ctx->twist_order();
      const long long back = (k - x.twist()) % k;
      GroupElement base = ctx->twist().apply_power(inv(x.twisted_base()), back);
      return semidirect_element(ctx, std::move(base), back);
    }
    case GroupContext::Kind::MatrixGroup:
      return GroupElement(ctx, unimodular_inverse(x.matrix()));
  }
  throw input_error("unreachable context kind");
}

/// s g s^{-1}
inline GroupElement conj(const GroupElement& s, const GroupElement& g) {
  return mul(mul(s, g), inv(s));
}

inline GroupElement pow(const GroupElement& x, long long n) {
  if (n == 0) return identity(x.context());
  GroupElement base = n < 0 ? inv(x) : x;
  unsigned long long k = n < 0 ? static_cast<unsigned long long>(-(n + 1)) + 1ull
                               : static_cast<unsigned long long>(n);
  GroupElement acc = identity(x.context());
  while (k > 0) {
    if (k & 1ull) acc = mul(acc, base);
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// word length and canonical ordering

/// Word length w.r.t. the standard generators and their inverses. Defined
/// for free, free-product, direct-product and semidirect contexts (the sum
/// metric over the union generating set); matrix contexts have no computed
/// word length and raise an input error.
inline long long word_length(const GroupElement& g) {
  const ContextPtr& ctx = g.context();
  if (!ctx) throw input_error("element without context");
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      long long len = 0;
      for (const Syllable& s : g.word()) {
        const long long order = ctx->generator_order(s.gen);
        if (order == 0)
          len += s.exp < 0 ? -s.exp : s.exp;
        else
          len += std::min(s.exp, order - s.exp);
      }
      return len;
    }
    case GroupContext::Kind::DirectProduct: {
      long long len = 0;
      for (const auto& p : g.parts()) len += word_length(p);
      return len;
    }
    case GroupContext::Kind::Semidirect: {
      const long long k = ctx->twist_order();
      const long long e = g.twist();
      return word_length(g.twisted_base()) + std::min(e, k - e);
    }
    case GroupContext::Kind::MatrixGroup:
      throw input_error("word length is not defined for matrix contexts");
  }
  throw input_error("unreachable context kind");
}

namespace detail {

// Geodesic spelling as letter codes: generator i -> 2i, inverse -> 2i+1.
// Finite-order syllables use the shorter side, positives on a tie.
inline void append_letters(const GroupContext& ctx, const GroupElement::Word& w,
                           std::vector<int>& out) {
  for (const Syllable& s : w) {
    const long long order = ctx.generator_order(s.gen);
    long long count;
    int code;
    if (order == 0) {
      count = s.exp < 0 ? -s.exp : s.exp;
      code = s.exp < 0 ? 2 * s.gen + 1 : 2 * s.gen;
    } else if (s.exp <= order - s.exp) {
      count = s.exp;
      code = 2 * s.gen;
    } else {
      count = order - s.exp;
      code = 2 * s.gen + 1;
    }
    out.insert(out.end(), static_cast<std::size_t>(count), code);
  }
}

}  // namespace detail

/// Canonical total order: shortlex for words (inverses follow positives),
/// lexicographic over components for tuples and twisted pairs, entrywise
/// for matrices. Used for deterministic enumeration and serialization.
inline int compare(const GroupElement& x, const GroupElement& y) {
  detail::check_same_context(x, y);
  const ContextPtr& ctx = x.context();
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      const long long lx = word_length(x), ly = word_length(y);
      if (lx != ly) return lx < ly ? -1 : 1;
      std::vector<int> ax, ay;
      detail::append_letters(*ctx, x.word(), ax);
      detail::append_letters(*ctx, y.word(), ay);
      if (ax != ay) return ax < ay ? -1 : 1;
      // same geodesic spelling: distinguish tie-length finite syllables
      if (x.word() != y.word()) return x.word() < y.word() ? -1 : 1;
      return 0;
    }
    case GroupContext::Kind::DirectProduct: {
      for (std::size_t i = 0; i < x.parts().size(); ++i) {
        const int c = compare(x.parts()[i], y.parts()[i]);
        if (c != 0) return c;
      }
      return 0;
    }
    case GroupContext::Kind::Semidirect: {
      const int c = compare(x.twisted_base(), y.twisted_base());
      if (c != 0) return c;
      if (x.twist() != y.twist()) return x.twist() < y.twist() ? -1 : 1;
      return 0;
    }
    case GroupContext::Kind::MatrixGroup:
      return compare(x.matrix(), y.matrix());
  }
  throw input_error("unreachable context kind");
}

inline bool operator<(const GroupElement& x, const GroupElement& y) { return compare(x, y) < 0; }

// ---------------------------------------------------------------------------
// automorphisms

struct Automorphism::Impl {
  enum class Rule { Table, Cycle, InverseTranspose, Conjugated };
  Rule rule = Rule::Table;
  ContextPtr ctx;
  int order = 1;
  std::string name;
  std::vector<GroupElement> images;            // Table
  std::shared_ptr<const Impl> inner;           // Conjugated
  std::vector<GroupElement> conjugator;        // Conjugated: [s]
};

inline const ContextPtr& Automorphism::context() const { return impl_->ctx; }
inline int Automorphism::order() const { return impl_->order; }
inline const std::string& Automorphism::name() const { return impl_->name; }

inline GroupElement Automorphism::apply(const GroupElement& g) const {
  const Impl& im = *impl_;
  if (!g.context() || !g.context()->same_as(*im.ctx))
    throw input_error("automorphism applied to element of another context");
  switch (im.rule) {
    case Impl::Rule::Table: {
      GroupElement acc = identity(im.ctx);
      for (const Syllable& s : g.word())
        acc = mul(acc, pow(im.images[static_cast<std::size_t>(s.gen)], s.exp));
      return acc;
    }
    case Impl::Rule::Cycle: {
      GroupElement::Tuple parts = g.parts();
      std::rotate(parts.rbegin(), parts.rbegin() + 1, parts.rend());
      return direct_element(im.ctx, std::move(parts));
    }
    case Impl::Rule::InverseTranspose:
      return matrix_element(im.ctx, unimodular_inverse(g.matrix().transposed()));
    case Impl::Rule::Conjugated: {
      const GroupElement& s = im.conjugator.front();
      const Automorphism inner(im.inner);
      return conj(s, inner.apply(conj(inv(s), g)));
    }
  }
  throw input_error("unreachable automorphism rule");
}

inline GroupElement Automorphism::apply_power(const GroupElement& g, long long times) const {
  const int k = order();
  times = ((times % k) + k) % k;
  GroupElement r = g;
  for (long long i = 0; i < times; ++i) r = apply(r);
  return r;
}

inline Automorphism Automorphism::from_generator_images(ContextPtr ctx,
                                                        std::vector<GroupElement> images,
                                                        int declared_order, std::string name) {
  if (!ctx) throw input_error("null context");
  if (ctx->kind() != GroupContext::Kind::FreeGroup &&
      ctx->kind() != GroupContext::Kind::FreeProductOfCyclics)
    throw input_error("generator-image automorphisms need a free or free-product context");
  if (static_cast<int>(images.size()) != ctx->num_generators())
    throw input_error("automorphism image count does not match generator count");
  if (declared_order < 2) throw input_error("automorphism order must be >= 2");
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (!images[i].context()->same_as(*ctx)) throw input_error("automorphism image context mismatch");
    const long long m = ctx->generator_order(static_cast<int>(i));
    if (m != 0 && !pow(images[i], m).is_identity())
      throw input_error("automorphism image violates a generator relation");
  }
  auto impl = std::make_shared<Impl>();
  impl->rule = Impl::Rule::Table;
  impl->ctx = std::move(ctx);
  impl->order = declared_order;
  impl->name = std::move(name);
  impl->images = std::move(images);
  Automorphism a(impl);
  for (int i = 0; i < a.context()->num_generators(); ++i) {
    const GroupElement g = generator(a.context(), i);
    GroupElement h = g;
    for (int j = 0; j < declared_order; ++j) h = a.apply(h);
    if (h != g) throw input_error("automorphism does not have the declared order");
  }
  return a;
}

inline Automorphism Automorphism::generator_swap(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup || ctx->rank() != 2)
    throw input_error("generator_swap needs a rank-2 free group");
  return from_generator_images(ctx, {generator(ctx, 1), generator(ctx, 0)}, 2, "swap");
}

inline Automorphism Automorphism::cyclic_generator_shift(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup || ctx->rank() < 2)
    throw input_error("cyclic_generator_shift needs a free group of rank >= 2");
  std::vector<GroupElement> images;
  for (int i = 0; i < ctx->rank(); ++i) images.push_back(generator(ctx, (i + 1) % ctx->rank()));
  return from_generator_images(ctx, std::move(images), ctx->rank(), "shift");
}

inline Automorphism Automorphism::coordinate_cycle(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::DirectProduct)
    throw input_error("coordinate_cycle needs a direct product");
  for (const auto& f : ctx->factors())
    if (!f->same_as(*ctx->factors().front()))
      throw input_error("coordinate_cycle needs identical factors");
  auto impl = std::make_shared<Impl>();
  impl->rule = Impl::Rule::Cycle;
  impl->ctx = ctx;
  impl->order = static_cast<int>(ctx->factors().size());
  impl->name = ctx->factors().size() == 2 ? "flip" : "cycle";
  return Automorphism(impl);
}

inline Automorphism Automorphism::coordinate_flip(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::DirectProduct || ctx->factors().size() != 2)
    throw input_error("coordinate_flip needs a two-factor direct product");
  return coordinate_cycle(ctx);
}

inline Automorphism Automorphism::inverse_transpose(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::MatrixGroup)
    throw input_error("inverse_transpose needs a matrix group");
  auto impl = std::make_shared<Impl>();
  impl->rule = Impl::Rule::InverseTranspose;
  impl->ctx = ctx;
  impl->order = 2;
  impl->name = "inverse_transpose";
  return Automorphism(impl);
}

inline Automorphism Automorphism::conjugated_by(const GroupElement& s, const Automorphism& phi) {
  if (!s.context() || !s.context()->same_as(*phi.context()))
    throw input_error("conjugator lives in another context");
  auto impl = std::make_shared<Impl>();
  impl->rule = Impl::Rule::Conjugated;
  impl->ctx = phi.context();
  impl->order = phi.order();
  impl->name = phi.name() + "^s";
  impl->inner = phi.impl_;
  impl->conjugator.push_back(s);
  return Automorphism(impl);
}

/// The distinct iterates {phi^i(g) : 0 <= i < order}, starting at g.
/// The orbit size always divides the automorphism order.
inline std::vector<GroupElement> orbit_of(const Automorphism& phi, const GroupElement& g) {
  std::vector<GroupElement> orbit;
  GroupElement h = g;
  for (int i = 0; i < phi.order(); ++i) {
    orbit.push_back(h);
    h = phi.apply(h);
    if (h == g) break;
  }
  if (h != g) throw input_error("automorphism order exceeded while tracing an orbit");
  return orbit;
}

// ---------------------------------------------------------------------------
// deferred context pieces that need Automorphism complete

inline ContextPtr GroupContext::semidirect_by_finite_aut(ContextPtr base, Automorphism twist) {
  if (!base) throw input_error("null base context");
  if (!twist.context()->same_as(*base))
    throw input_error("semidirect twist must act on the base context");
  if (twist.order() < 2) throw input_error("semidirect twist order must be >= 2");
  auto ctx = blank();
  ctx->kind_ = Kind::Semidirect;
  ctx->base_ = std::move(base);
  ctx->twist_order_ = twist.order();
  ctx->twist_ = std::move(twist);
  return ctx;
}

inline bool GroupContext::same_as(const GroupContext& other) const {
  if (this == &other) return true;
  if (kind_ != other.kind_) return false;
  switch (kind_) {
    case Kind::FreeGroup:
      return rank_ == other.rank_;
    case Kind::FreeProductOfCyclics:
      return orders_ == other.orders_;
    case Kind::DirectProduct: {
      if (factors_.size() != other.factors_.size()) return false;
      for (std::size_t i = 0; i < factors_.size(); ++i)
        if (!factors_[i]->same_as(*other.factors_[i])) return false;
      return true;
    }
    case Kind::Semidirect:
      return base_->same_as(*other.base_) && twist_order_ == other.twist_order_ &&
             twist_->name() == other.twist_->name();
    case Kind::MatrixGroup:
      return dim_ == other.dim_;
  }
  return false;
}

}  // namespace gvna
