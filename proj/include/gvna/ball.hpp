#pragma once

#include <set>
#include <string>
#include <vector>

#include "gvna/error.hpp"
#include "gvna/group.hpp"

namespace gvna {

struct BallBudget {
  std::size_t max_elements = 2'000'000;
};

/// The standard generating letters of a context: generators and their
/// inverses for word contexts, embedded factor letters for products, base
/// letters plus the twist for semidirect extensions, and the elementary
/// matrices E_ij(+-1) for SL(d, Z).
inline std::vector<GroupElement> generating_letters(const ContextPtr& ctx) {
  if (!ctx) throw input_error("null context");
  std::vector<GroupElement> letters;
  switch (ctx->kind()) {
    case GroupContext::Kind::FreeGroup:
    case GroupContext::Kind::FreeProductOfCyclics: {
      for (int i = 0; i < ctx->num_generators(); ++i) {
        letters.push_back(generator(ctx, i, 1));
        const GroupElement back = generator(ctx, i, -1);
        if (back != letters.back()) letters.push_back(back);
      }
      return letters;
    }
    case GroupContext::Kind::DirectProduct: {
      for (std::size_t f = 0; f < ctx->factors().size(); ++f) {
        for (const GroupElement& l : generating_letters(ctx->factors()[f])) {
          GroupElement::Tuple parts;
          for (std::size_t j = 0; j < ctx->factors().size(); ++j)
            parts.push_back(j == f ? l : identity(ctx->factors()[j]));
          letters.push_back(direct_element(ctx, std::move(parts)));
        }
      }
      return letters;
    }
    case GroupContext::Kind::Semidirect: {
      for (const GroupElement& l : generating_letters(ctx->base()))
        letters.push_back(semidirect_element(ctx, l, 0));
      const GroupElement u = semidirect_element(ctx, identity(ctx->base()), 1);
      letters.push_back(u);
      const GroupElement ui = inv(u);
      if (ui != u) letters.push_back(ui);
      return letters;
    }
    case GroupContext::Kind::MatrixGroup: {
      const int d = ctx->dim();
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          if (i == j) continue;
          for (int sign : {1, -1}) {
            IntMatrix m = IntMatrix::identity(d);
            m.at(i, j) = sign;
            letters.push_back(matrix_element(ctx, std::move(m)));
          }
        }
      return letters;
    }
  }
  throw input_error("unreachable context kind");
}

/// Spheres of the ball of the given radius: spheres[l] holds exactly the
/// elements at distance l, each sorted by the canonical order. For matrix
/// contexts distance means shortest expression in elementary letters.
inline std::vector<std::vector<GroupElement>> spheres(const ContextPtr& ctx, int radius,
                                                      const BallBudget& budget = {}) {
  if (radius < 0) throw input_error("negative ball radius");
  const std::vector<GroupElement> letters = generating_letters(ctx);
  const bool graded = ctx->kind() != GroupContext::Kind::MatrixGroup;

  std::vector<std::vector<GroupElement>> out;
  std::set<GroupElement> seen;
  std::size_t total = 1;
  out.push_back({identity(ctx)});
  seen.insert(identity(ctx));

  for (int level = 1; level <= radius; ++level) {
    std::set<GroupElement> next;
    for (const GroupElement& w : out.back()) {
      for (const GroupElement& l : letters) {
        GroupElement v = mul(w, l);
        if (graded) {
          if (word_length(v) != level) continue;
          if (next.insert(std::move(v)).second && ++total > budget.max_elements)
            throw resource_error("ball budget of " + std::to_string(budget.max_elements) +
                                 " elements exceeded at radius " + std::to_string(level));
        } else {
          if (seen.count(v)) continue;
          seen.insert(v);
          if (next.insert(std::move(v)).second && ++total > budget.max_elements)
            throw resource_error("ball budget of " + std::to_string(budget.max_elements) +
                                 " elements exceeded at radius " + std::to_string(level));
        }
      }
    }
    out.emplace_back(next.begin(), next.end());
  }
  return out;
}

/// All elements of length <= radius, duplicate-free, ordered sphere by
/// sphere (shortlex for word contexts).
inline std::vector<GroupElement> enumerate_ball(const ContextPtr& ctx, int radius,
                                                const BallBudget& budget = {}) {
  std::vector<GroupElement> ball;
  for (auto& sphere : spheres(ctx, radius, budget))
    ball.insert(ball.end(), sphere.begin(), sphere.end());
  return ball;
}

}  // namespace gvna
