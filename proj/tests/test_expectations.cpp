#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gvna/expectations.hpp"
#include "oracles.hpp"

using namespace gvna;

namespace {

ContextPtr f2() {
  static const ContextPtr ctx = GroupContext::free_group(2);
  return ctx;
}

ContextPtr zz2() {
  static const ContextPtr ctx = GroupContext::free_product_of_cyclics({0, 2}, "st");
  return ctx;
}

ContextPtr lambda2() {
  static const ContextPtr ctx = GroupContext::direct_power(f2(), 2);
  return ctx;
}

SubalgebraDescriptor two_projection_descriptor() {
  const ContextPtr ctx = zz2();
  const Rational half(1, 2);
  const AlgebraElement one = AlgebraElement::unit(ctx);
  const AlgebraElement t = AlgebraElement::basis(generator(ctx, 1));
  return SubalgebraDescriptor::finite_dimensional(
      ctx, {MatrixUnitBlock{1, {half * (one + t)}}, MatrixUnitBlock{1, {half * (one - t)}}},
      "span{(1+t)/2,(1-t)/2}");
}

AlgebraElement random_element(const std::vector<GroupElement>& ball, std::mt19937_64& rng,
                              int terms = 4) {
  std::uniform_int_distribution<std::size_t> pick(0, ball.size() - 1);
  std::uniform_int_distribution<long long> num(-3, 3);
  std::uniform_int_distribution<long long> den(1, 4);
  AlgebraElement x = AlgebraElement::zero(ball.front().context());
  for (int i = 0; i < terms; ++i)
    x = x + make_rational(num(rng), den(rng)) * AlgebraElement::basis(ball[pick(rng)]);
  return x;
}

}  // namespace

TEST_CASE("sphere sizes match enumeration") {
  CHECK(sphere_size(2, 0) == 1);
  CHECK(sphere_size(2, 1) == 4);
  CHECK(sphere_size(2, 2) == 12);
  for (int rank : {2, 3}) {
    const ContextPtr ctx = GroupContext::free_group(rank);
    const auto shells = spheres(ctx, 5);
    for (int l = 0; l <= 5; ++l)
      CHECK(sphere_size(rank, l) == Integer(shells[static_cast<std::size_t>(l)].size()));
  }
}

TEST_CASE("subgroup algebra expectation restricts coefficients") {
  const ContextPtr ctx = f2();
  const SubalgebraDescriptor M =
      SubalgebraDescriptor::subgroup_algebra(ctx, cyclic_subgroup(generator(ctx, 0)));
  const GroupElement a2 = generator(ctx, 0, 2);
  CHECK(expect(M, AlgebraElement::basis(a2)) == AlgebraElement::basis(a2));
  CHECK(expect(M, AlgebraElement::basis(generator(ctx, 1))).is_zero());
  CHECK(phi_value(M, a2) == 1);
  CHECK(phi_value(M, generator(ctx, 1)) == 0);
}

TEST_CASE("fixed-point expectation averages orbits") {
  const ContextPtr prod = lambda2();
  const Automorphism flip = Automorphism::coordinate_flip(prod);
  const SubalgebraDescriptor M = SubalgebraDescriptor::fixed_point(flip);
  const GroupElement ae = direct_element(prod, {generator(f2(), 0), identity(f2())});
  const GroupElement ea = direct_element(prod, {identity(f2()), generator(f2(), 0)});
  CHECK(expect(M, AlgebraElement::basis(ae)) ==
        Rational(1, 2) * (AlgebraElement::basis(ae) + AlgebraElement::basis(ea)));
  CHECK(phi_value(M, ae) == Rational(1, 2));
}

TEST_CASE("every expectation fixes the unit") {
  const std::vector<SubalgebraDescriptor> descriptors = {
      SubalgebraDescriptor::trivial(f2()),
      SubalgebraDescriptor::subgroup_algebra(f2(), cyclic_subgroup(generator(f2(), 0))),
      SubalgebraDescriptor::fixed_point(Automorphism::generator_swap(f2())),
      two_projection_descriptor()};
  for (const auto& M : descriptors) {
    CHECK(expect(M, AlgebraElement::unit(M.context())) == AlgebraElement::unit(M.context()));
    CHECK(phi_value(M, identity(M.context())) == 1);
  }
}

TEST_CASE("radial spherical vectors and their norms") {
  const ContextPtr ctx = f2();
  const SphericalVector ve = radial_spherical(2, AlgebraElement::unit(ctx));
  CHECK(ve.levels == std::map<long long, Rational>{{0, Rational(1)}});
  CHECK(ve.norm_sq() == 1);

  const GroupElement a = generator(ctx, 0);
  CHECK(radial_spherical(2, AlgebraElement::basis(a)).norm_sq() == Rational(1, 4));
  CHECK(radial_spherical(2, AlgebraElement::basis(mul(a, generator(ctx, 1)))).norm_sq() ==
        Rational(1, 12));
}

TEST_CASE("radial expectation agrees with the materialized Gram projection") {
  const ContextPtr ctx = f2();
  for (const GroupElement& g : enumerate_ball(ctx, 4)) {
    const AlgebraElement x = AlgebraElement::basis(g);
    const AlgebraElement brute = oracles::gram_projection(x, 4);
    const SphericalVector v = radial_spherical(2, x);
    CHECK(v.norm_sq() == brute.norm_sq());
    CHECK(materialize_spherical(ctx, v) == brute);
  }
}

TEST_CASE("radial expectation of mixed elements matches the oracle") {
  const ContextPtr ctx = f2();
  const auto ball = enumerate_ball(ctx, 3);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 25; ++i) {
    const AlgebraElement x = random_element(ball, rng, 5);
    const SphericalVector v = radial_spherical(2, x);
    const AlgebraElement brute = oracles::gram_projection(x, 3);
    CHECK(materialize_spherical(ctx, v) == brute);
    CHECK(v.trace() == x.trace());
    CHECK(v.norm_sq() <= x.norm_sq());
  }
}

TEST_CASE("radial tensor expectation splits by twist") {
  const ContextPtr base = f2();
  const ContextPtr sd =
      GroupContext::semidirect_by_finite_aut(base, Automorphism::generator_swap(base));
  const SubalgebraDescriptor B = SubalgebraDescriptor::radial_tensor_finite(sd);

  const GroupElement u = semidirect_element(sd, identity(base), 1);
  CHECK(phi_value(B, u) == 1);  // u generates the finite tensor factor
  const GroupElement au = semidirect_element(sd, generator(base, 0), 1);
  CHECK(phi_value(B, au) == Rational(1, 4));

  const AlgebraElement x = AlgebraElement::basis(u) +
                           make_rational(2, 3) * AlgebraElement::basis(au) +
                           AlgebraElement::basis(semidirect_element(sd, generator(base, 1), 0));
  const auto by_twist = radial_tensor_spherical(B, x);
  REQUIRE(by_twist.size() == 2);
  CHECK(by_twist.at(0).levels == std::map<long long, Rational>{{1, Rational(1, 4)}});
  CHECK(by_twist.at(1).levels ==
        std::map<long long, Rational>{{0, Rational(1)}, {1, Rational(2, 3) / Rational(4)}});
  CHECK(expectation_norm_sq(B, x) == by_twist.at(0).norm_sq() + by_twist.at(1).norm_sq());
  CHECK_THROWS_AS(expect(B, x), input_error);
}

TEST_CASE("expectation axioms hold on sampled elements for every variant") {
  std::mt19937_64 rng(23);
  struct Case {
    SubalgebraDescriptor M;
    std::vector<AlgebraElement> witnesses;  // explicit elements of M
  };
  const ContextPtr ctx = f2();
  const SubalgebraDescriptor subgroup =
      SubalgebraDescriptor::subgroup_algebra(ctx, cyclic_subgroup(generator(ctx, 0)));
  const SubalgebraDescriptor fixed =
      SubalgebraDescriptor::fixed_point(Automorphism::generator_swap(ctx));
  const SubalgebraDescriptor findim = two_projection_descriptor();
  const AlgebraElement s1 = AlgebraElement::basis(generator(ctx, 0));
  const AlgebraElement s1m2 = AlgebraElement::basis(generator(ctx, 0, -2));
  const AlgebraElement swap_avg = expect(fixed, AlgebraElement::basis(generator(ctx, 0)));
  const AlgebraElement t_unit = AlgebraElement::basis(generator(zz2(), 1));

  std::vector<Case> cases;
  cases.push_back({SubalgebraDescriptor::trivial(ctx),
                   {make_rational(3, 2) * AlgebraElement::unit(ctx)}});
  cases.push_back({subgroup, {s1, s1m2}});
  cases.push_back({fixed, {swap_avg}});
  cases.push_back({findim, {t_unit}});

  for (const auto& c : cases) {
    const auto ball = enumerate_ball(c.M.context(), 2);
    for (int i = 0; i < 40; ++i) {
      const AlgebraElement x = random_element(ball, rng);
      const AlgebraElement ex = expect(c.M, x);
      CHECK(expect(c.M, ex) == ex);
      CHECK(ex.trace() == x.trace());
      CHECK(ex.norm_sq() <= x.norm_sq());
      for (const AlgebraElement& m1 : c.witnesses)
        for (const AlgebraElement& m2 : c.witnesses)
          CHECK(expect(c.M, m1 * x * m2) == m1 * ex * m2);
    }
  }
}

TEST_CASE("fixed-point phi times the orbit size is exactly one") {
  const ContextPtr ctx = f2();
  const Automorphism swap = Automorphism::generator_swap(ctx);
  const SubalgebraDescriptor M = SubalgebraDescriptor::fixed_point(swap);
  for (const GroupElement& g : enumerate_ball(ctx, 4))
    CHECK(phi_value(M, g) * Rational(static_cast<long long>(orbit_of(swap, g).size())) == 1);
}

TEST_CASE("tower property for nested cyclic subgroup algebras") {
  const ContextPtr ctx = f2();
  const SubalgebraDescriptor outer =
      SubalgebraDescriptor::subgroup_algebra(ctx, cyclic_subgroup(generator(ctx, 0)));
  const SubalgebraDescriptor inner =
      SubalgebraDescriptor::subgroup_algebra(ctx, cyclic_subgroup(generator(ctx, 0, 2)));
  const auto ball = enumerate_ball(ctx, 3);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 50; ++i) {
    const AlgebraElement x = random_element(ball, rng, 6);
    CHECK(expect(inner, expect(outer, x)) == expect(inner, x));
  }
}

TEST_CASE("conjugated expectations transform canonically") {
  const ContextPtr ctx = f2();
  const SubalgebraDescriptor M =
      SubalgebraDescriptor::subgroup_algebra(ctx, cyclic_subgroup(generator(ctx, 0)));
  const GroupElement s2 = generator(ctx, 1);

  // s = e reduces to the plain expectation
  const AlgebraElement x = AlgebraElement::basis(mul(generator(ctx, 0), s2));
  CHECK(conjugated_expect(M, identity(ctx), x) == expect(M, x));

  // the conjugated algebra contains lambda_{s2 s1 s2^-1}
  const GroupElement moved = conj(s2, generator(ctx, 0));
  CHECK(conjugated_expect(M, s2, AlgebraElement::basis(moved)) == AlgebraElement::basis(moved));

  // ||E_{M^s}(lambda_g)||^2 = phi_M(s^-1 g s), exactly, on a ball
  for (const GroupElement& s : enumerate_ball(ctx, 2))
    for (const GroupElement& g : enumerate_ball(ctx, 2)) {
      CHECK(conjugated_expect(M, s, AlgebraElement::basis(g)).norm_sq() ==
            phi_value(M, conj(inv(s), g)));
    }

  // conjugated descriptors give the same windows
  const SubalgebraDescriptor Ms = M.conjugated_by(s2);
  for (const GroupElement& g : enumerate_ball(ctx, 2))
    CHECK(phi_value(Ms, g) == phi_value(M, conj(inv(s2), g)));
}

TEST_CASE("finite-dimensional descriptor validation rejects broken data") {
  const ContextPtr ctx = zz2();
  const Rational half(1, 2);
  const AlgebraElement one = AlgebraElement::unit(ctx);
  const AlgebraElement t = AlgebraElement::basis(generator(ctx, 1));
  const AlgebraElement e11 = half * (one + t);
  // not idempotent
  CHECK_THROWS_AS(SubalgebraDescriptor::finite_dimensional(ctx, {MatrixUnitBlock{1, {t}}}),
                  input_error);
  // projections do not sum to one
  CHECK_THROWS_AS(SubalgebraDescriptor::finite_dimensional(ctx, {MatrixUnitBlock{1, {e11}}}),
                  input_error);
}

TEST_CASE("matrix unit obstruction is the exact corner product") {
  const ContextPtr ctx = zz2();
  CHECK_THROWS_AS(matrix_unit_obstruction(ctx, 0), input_error);
  CHECK_THROWS_AS(matrix_unit_obstruction(f2(), 1), input_error);

  const AlgebraElement x1 = matrix_unit_obstruction(ctx, 1);
  // independent route: convolve the factors one by one in a different order
  const Rational half(1, 2);
  const AlgebraElement one = AlgebraElement::unit(ctx);
  const AlgebraElement t = AlgebraElement::basis(generator(ctx, 1));
  const AlgebraElement e11 = half * (one + t);
  const AlgebraElement e22 = half * (one - t);
  const AlgebraElement s = AlgebraElement::basis(generator(ctx, 0));
  const AlgebraElement si = AlgebraElement::basis(generator(ctx, 0, -1));
  CHECK(x1 == e11 * (si * (e22 * (s * e11))));

  CHECK(x1.support_size() == 6);
  CHECK(x1.trace() == Rational(1, 4));
  CHECK(x1.norm_sq() == Rational(3, 16));
  for (int k = 1; k <= 8; ++k) {
    const AlgebraElement xk = matrix_unit_obstruction(ctx, k);
    CHECK_FALSE(xk.is_zero());
    CHECK(xk.trace() == Rational(1, 4));
  }
}
