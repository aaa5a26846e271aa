#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/group.hpp"
#include "gvna/rational.hpp"
#include "gvna/words.hpp"

namespace gvna {

/// A subgroup given by a membership oracle. Expected to accept the
/// identity and be closed under inverses; the shipped constructors are.
struct SubgroupPredicate {
  std::string name;
  std::function<bool(const GroupElement&)> contains;
};

namespace detail {

// Letter codes (2i positive / 2i+1 inverse) of a free-group word.
inline std::vector<int> free_letters(const GroupElement& g) {
  std::vector<int> out;
  append_letters(*g.context(), g.word(), out);
  return out;
}

inline std::vector<int> invert_letters(const std::vector<int>& w) {
  std::vector<int> out(w.rbegin(), w.rend());
  for (int& c : out) c ^= 1;
  return out;
}

struct CyclicForm {
  std::vector<int> conjugator;  // w = c u c^{-1}
  std::vector<int> core;        // cyclically reduced
};

inline CyclicForm cyclic_decompose(std::vector<int> w) {
  CyclicForm f;
  std::size_t lo = 0, hi = w.size();
  while (hi - lo >= 2 && (w[lo] ^ 1) == w[hi - 1]) {
    f.conjugator.push_back(w[lo]);
    ++lo;
    --hi;
  }
  f.core.assign(w.begin() + static_cast<std::ptrdiff_t>(lo),
                w.begin() + static_cast<std::ptrdiff_t>(hi));
  return f;
}

struct RootForm {
  std::vector<int> conjugator;
  std::vector<int> root;  // primitive
  long long multiplicity = 0;
};

// g = c r^m c^{-1} with r primitive, for g != e.
inline RootForm primitive_root(const GroupElement& g) {
  CyclicForm cf = cyclic_decompose(free_letters(g));
  const std::size_t n = cf.core.size();
  RootForm rf;
  rf.conjugator = std::move(cf.conjugator);
  for (std::size_t p = 1; p <= n; ++p) {
    if (n % p != 0) continue;
    bool periodic = true;
    for (std::size_t i = p; i < n && periodic; ++i) periodic = (cf.core[i] == cf.core[i - p]);
    if (periodic) {
      rf.root.assign(cf.core.begin(), cf.core.begin() + static_cast<std::ptrdiff_t>(p));
      rf.multiplicity = static_cast<long long>(n / p);
      return rf;
    }
  }
  throw input_error("primitive root of the identity is undefined");
}

}  // namespace detail

/// {e}.
inline SubgroupPredicate trivial_subgroup(const ContextPtr&) {
  return {"{e}", [](const GroupElement& g) { return g.is_identity(); }};
}

/// <w> in a free group, decided by root extraction: g is a power of w iff
/// both share a primitive root (up to inversion) and the multiplicity of w
/// divides that of g.
inline SubgroupPredicate cyclic_subgroup(const GroupElement& w) {
  const ContextPtr ctx = w.context();
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup)
    throw input_error("cyclic_subgroup membership needs a free-group context");
  const std::string name = "<" + format_element(w) + ">";
  if (w.is_identity()) return {name, [](const GroupElement& g) { return g.is_identity(); }};
  const auto root_w = detail::primitive_root(w);
  return {name, [root_w, ctx](const GroupElement& g) {
            if (g.is_identity()) return true;
            if (!g.context()->same_as(*ctx)) throw input_error("membership context mismatch");
            const auto root_g = detail::primitive_root(g);
            if (root_g.conjugator != root_w.conjugator) return false;
            if (root_g.root != root_w.root &&
                root_g.root != detail::invert_letters(root_w.root))
              return false;
            return root_g.multiplicity % root_w.multiplicity == 0;
          }};
}

/// Kernel of the map F_n -> (Z/m)^n reading off exponent sums.
inline SubgroupPredicate abelianization_kernel(const ContextPtr& ctx, const Integer& modulus) {
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup)
    throw input_error("abelianization_kernel needs a free-group context");
  if (modulus < 2) throw input_error("kernel modulus must be >= 2");
  const int rank = ctx->rank();
  return {"ker(ab mod " + modulus.str() + ")",
          [rank, modulus, ctx](const GroupElement& g) {
            if (!g.context()->same_as(*ctx)) throw input_error("membership context mismatch");
            std::vector<Integer> sums(static_cast<std::size_t>(rank), Integer(0));
            for (const Syllable& s : g.word()) sums[static_cast<std::size_t>(s.gen)] += s.exp;
            for (const Integer& v : sums)
              if (v % modulus != 0) return false;
            return true;
          }};
}

/// The factor embedded in a direct product: all other components trivial.
inline SubgroupPredicate factor_subgroup(const ContextPtr& ctx, std::size_t which) {
  if (!ctx || ctx->kind() != GroupContext::Kind::DirectProduct)
    throw input_error("factor_subgroup needs a direct-product context");
  if (which >= ctx->factors().size()) throw input_error("factor index out of range");
  return {"factor" + std::to_string(which), [which, ctx](const GroupElement& g) {
            if (!g.context()->same_as(*ctx)) throw input_error("membership context mismatch");
            for (std::size_t i = 0; i < g.parts().size(); ++i)
              if (i != which && !g.parts()[i].is_identity()) return false;
            return true;
          }};
}

/// The untwisted base copy inside a semidirect extension.
inline SubgroupPredicate base_subgroup(const ContextPtr& ctx) {
  if (!ctx || ctx->kind() != GroupContext::Kind::Semidirect)
    throw input_error("base_subgroup needs a semidirect context");
  return {"base", [ctx](const GroupElement& g) {
            if (!g.context()->same_as(*ctx)) throw input_error("membership context mismatch");
            return g.twist() == 0;
          }};
}

/// s H s^{-1}.
inline SubgroupPredicate conjugated_subgroup(const SubgroupPredicate& h, const GroupElement& s) {
  const GroupElement si = inv(s);
  return {h.name + "^(" + format_element(s) + ")",
          [h, si, s](const GroupElement& g) { return h.contains(conj(si, g)); }};
}

}  // namespace gvna
