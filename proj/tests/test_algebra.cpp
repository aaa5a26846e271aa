#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "gvna/algebra.hpp"
#include "gvna/ball.hpp"

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

TEST_CASE("basis convolution multiplies group elements") {
  const ContextPtr ctx = f2();
  for (const GroupElement& g : enumerate_ball(ctx, 2))
    for (const GroupElement& h : enumerate_ball(ctx, 1))
      CHECK(AlgebraElement::basis(g) * AlgebraElement::basis(h) ==
            AlgebraElement::basis(mul(g, h)));
}

TEST_CASE("the two corner projections of Q[Z * Z/2]") {
  const ContextPtr ctx = zz2();
  const Rational half(1, 2);
  const AlgebraElement one = AlgebraElement::unit(ctx);
  const AlgebraElement t = AlgebraElement::basis(generator(ctx, 1));
  const AlgebraElement e11 = half * (one + t);
  const AlgebraElement e22 = half * (one - t);
  CHECK(e11 * e11 == e11);
  CHECK(e22 * e22 == e22);
  CHECK((e11 * e22).is_zero());  // (1 - t^2)/4 = 0 because t^2 = e
  CHECK(e11 + e22 == one);
  CHECK(e11.adjoint() == e11);
}

TEST_CASE("trace reads off the identity coefficient") {
  const ContextPtr ctx = f2();
  CHECK(AlgebraElement::unit(ctx).trace() == 1);
  CHECK(AlgebraElement::basis(generator(ctx, 0)).trace() == 0);
  const AlgebraElement x = make_rational(3, 7) * AlgebraElement::unit(ctx) -
                           make_rational(2, 5) * AlgebraElement::basis(generator(ctx, 1));
  CHECK(x.trace() == make_rational(3, 7));
}

TEST_CASE("inner products against the orthonormal group basis") {
  const ContextPtr ctx = f2();
  AlgebraElement w1 = AlgebraElement::zero(ctx);
  for (int i = 0; i < 2; ++i)
    w1 = w1 + AlgebraElement::basis(generator(ctx, i)) +
         AlgebraElement::basis(generator(ctx, i, -1));
  CHECK(inner_product(AlgebraElement::basis(generator(ctx, 0)), w1) == 1);
  for (const GroupElement& g : enumerate_ball(ctx, 2))
    for (const GroupElement& h : enumerate_ball(ctx, 2))
      CHECK(inner_product(AlgebraElement::basis(g), AlgebraElement::basis(h)) ==
            (g == h ? 1 : 0));
}

TEST_CASE("traciality, adjoint invariance and Cauchy-Schwarz on random pairs") {
  const ContextPtr ctx = f2();
  const auto ball = enumerate_ball(ctx, 2);
  std::mt19937_64 rng(11);
  for (int i = 0; i < 60; ++i) {
    const AlgebraElement x = random_element(ball, rng);
    const AlgebraElement y = random_element(ball, rng);
    CHECK((x * y).trace() == (y * x).trace());
    CHECK(x.adjoint().norm_sq() == x.norm_sq());
    CHECK(inner_product(x, y) == inner_product(y, x));
    const Rational ip = inner_product(x, y);
    CHECK(ip * ip <= x.norm_sq() * y.norm_sq());
    CHECK((x.norm_sq() == 0) == x.is_zero());
  }
}

TEST_CASE("adjoint is an involutive anti-automorphism") {
  const ContextPtr ctx = zz2();
  const auto ball = enumerate_ball(ctx, 2);
  std::mt19937_64 rng(13);
  for (int i = 0; i < 40; ++i) {
    const AlgebraElement x = random_element(ball, rng);
    const AlgebraElement y = random_element(ball, rng);
    CHECK(x.adjoint().adjoint() == x);
    CHECK((x * y).adjoint() == y.adjoint() * x.adjoint());
  }
}

TEST_CASE("context mismatch is rejected") {
  const AlgebraElement x = AlgebraElement::unit(f2());
  const AlgebraElement y = AlgebraElement::unit(zz2());
  CHECK_THROWS_AS(x + y, input_error);
  CHECK_THROWS_AS(x * y, input_error);
  CHECK_THROWS_AS(inner_product(x, y), input_error);
}

TEST_CASE("term serialization is sorted and exact") {
  const ContextPtr ctx = f2();
  const AlgebraElement x = make_rational(-1, 8) * AlgebraElement::basis(generator(ctx, 1)) +
                           make_rational(1, 2) * AlgebraElement::unit(ctx);
  const auto terms = x.term_strings();
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].first == "1");
  CHECK(terms[0].second == "1/2");
  CHECK(terms[1].first == "b");
  CHECK(terms[1].second == "-1/8");
}
