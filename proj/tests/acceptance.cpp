// Acceptance suite: runs every required criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// All comparisons are exact rational or integer comparisons; the stated
// per-criterion time limits are asserted as part of the verdict.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "gvna/cylinder.hpp"
#include "gvna/dynamics.hpp"
#include "gvna/scenarios.hpp"
#include "oracles.hpp"

using namespace gvna;

namespace {

struct CriterionResult {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

ContextPtr f2() {
  static const ContextPtr ctx = GroupContext::free_group(2);
  return ctx;
}

ContextPtr zz2() {
  static const ContextPtr ctx = GroupContext::free_product_of_cyclics({0, 2}, "st");
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

std::vector<SubalgebraDescriptor> shipped_descriptors() {
  const ContextPtr prod = GroupContext::direct_power(f2(), 2);
  const ContextPtr sd =
      GroupContext::semidirect_by_finite_aut(f2(), Automorphism::generator_swap(f2()));
  return {SubalgebraDescriptor::trivial(f2()),
          SubalgebraDescriptor::subgroup_algebra(f2(), cyclic_subgroup(generator(f2(), 0))),
          SubalgebraDescriptor::radial(f2()),
          SubalgebraDescriptor::fixed_point(Automorphism::coordinate_flip(prod)),
          two_projection_descriptor(),
          SubalgebraDescriptor::radial_tensor_finite(sd)};
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

// materializes a twist-indexed spherical expectation back into Q[G]
AlgebraElement materialize_tensor(const ContextPtr& sd,
                                  const std::map<long long, SphericalVector>& by_twist) {
  AlgebraElement out = AlgebraElement::zero(sd);
  for (const auto& [twist, v] : by_twist) {
    const AlgebraElement base = materialize_spherical(sd->base(), v);
    std::vector<std::pair<GroupElement, Rational>> terms;
    for (const auto& [g, c] : base.terms())
      terms.emplace_back(semidirect_element(sd, g, twist), c);
    out = out + AlgebraElement::from_terms(sd, terms);
  }
  return out;
}

// --------------------------------------------------------------------------

CriterionResult criterion1_exact_worked_values() {
  CriterionResult r;

  const CylinderFunction one = CylinderFunction::constant(Rational(1));
  const CylinderFunction a = Rational(1, 2) * CylinderFunction::coordinate_indicator(1);
  const CylinderFunction b = one - a;
  r.require((b * a).trace() == Rational(1, 8), "tau(ba) != 1/8");
  r.require((b * b).trace() == Rational(5, 8), "tau(b^2) != 5/8");
  const CylinderFunction f = b - CylinderFunction::constant((b * b).trace() / b.trace());
  r.require(span_pair_project(f, a).coeff_a == Rational(-1, 3), "E_Q coefficient != -1/3");

  AlgebraElement w1 = AlgebraElement::zero(f2());
  for (int i = 0; i < 2; ++i)
    w1 = w1 + AlgebraElement::basis(generator(f2(), i)) +
         AlgebraElement::basis(generator(f2(), i, -1));
  r.require(inner_product(AlgebraElement::basis(generator(f2(), 0)), w1) == Rational(1),
            "<s1, b> != 1");

  const ContextPtr m3 = GroupContext::special_linear(3);
  const GroupElement g0 = parse_element(m3, "[0,0,1, 1,0,1, 0,1,0]");
  r.require(poly_to_string(char_poly(g0.matrix())) == "x^3 - x - 1", "char poly of g0 wrong");
  const Automorphism it = Automorphism::inverse_transpose(m3);
  r.require(poly_to_string(char_poly(it.apply(g0).matrix())) == "x^3 + x^2 - 1",
            "char poly of (g0^T)^-1 wrong");

  const ContextPtr prod = GroupContext::direct_power(f2(), 2);
  const OrbitConstancy flip = orbit_constancy_check(
      SubalgebraDescriptor::fixed_point(Automorphism::coordinate_flip(prod)),
      direct_element(prod, {generator(f2(), 0), identity(f2())}), 4);
  r.require(flip.constant && flip.value == Rational(1, 2), "flip constancy at 1/2 fails");

  const OrbitConstancy swap = orbit_constancy_check(
      SubalgebraDescriptor::fixed_point(Automorphism::generator_swap(f2())), generator(f2(), 0),
      4);
  r.require(swap.constant && swap.value == Rational(1, 2), "swap constancy at 1/2 fails");

  const ContextPtr f3 = GroupContext::free_group(3);
  const OrbitConstancy cyc = orbit_constancy_check(
      SubalgebraDescriptor::fixed_point(Automorphism::cyclic_generator_shift(f3)),
      generator(f3, 0), 4);
  r.require(cyc.constant && cyc.value == Rational(1, 3), "cyclic constancy at 1/3 fails");
  return r;
}

CriterionResult criterion2_radial_oracle() {
  CriterionResult r;
  const auto ball = enumerate_ball(f2(), 4);
  r.require(ball.size() == 161, "ball of radius 4 should have 161 elements");
  for (const GroupElement& g : ball) {
    const AlgebraElement x = AlgebraElement::basis(g);
    const SphericalVector v = radial_spherical(2, x);
    const AlgebraElement brute = oracles::gram_projection(x, 4);
    if (v.norm_sq() != brute.norm_sq() || materialize_spherical(f2(), v) != brute) {
      r.require(false, "mismatch with materialized projection at " + format_element(g));
      break;
    }
  }
  return r;
}

CriterionResult criterion3_decay() {
  CriterionResult r;
  const SubalgebraDescriptor M = SubalgebraDescriptor::radial(f2());
  const ConjugatorSequence seq = ConjugatorSequence::icc_sequence(f2());
  const DecayReport probe = confinement_probe(M, seq, 2, 8);
  const auto ball = enumerate_ball(f2(), 2);
  for (const DecayStep& st : probe.steps) {
    long long min_len = -1;
    const GroupElement si = inv(st.conjugator);
    for (const GroupElement& g : ball) {
      if (g.is_identity()) continue;
      const long long len = word_length(mul(mul(si, g), st.conjugator));
      if (min_len < 0 || len < min_len) min_len = len;
    }
    r.require(st.value == Rational(1) / Rational(sphere_size(2, min_len)),
              "step " + std::to_string(st.step) + " value is not 1/sphere_size(l_m)");
  }
  r.require(probe.verdicts.strictly_decreasing, "probe values are not strictly decreasing");
  r.require(probe.verdicts.first_below_index && *probe.verdicts.first_below_index <= 8,
            "probe does not drop below 1/1000 within 8 steps");
  return r;
}

CriterionResult criterion4_expectation_axioms() {
  CriterionResult r;
  std::mt19937_64 rng(101);
  const int samples = 200;

  for (const SubalgebraDescriptor& M : shipped_descriptors()) {
    const auto ball = enumerate_ball(M.context(), 2);
    if (M.supports_expect()) {
      std::vector<AlgebraElement> witnesses;
      switch (M.kind()) {
        case SubalgebraDescriptor::Kind::Trivial:
          witnesses.push_back(make_rational(3, 2) * AlgebraElement::unit(M.context()));
          break;
        case SubalgebraDescriptor::Kind::SubgroupAlgebra:
          witnesses.push_back(AlgebraElement::basis(generator(M.context(), 0)));
          witnesses.push_back(AlgebraElement::basis(generator(M.context(), 0, -2)));
          break;
        case SubalgebraDescriptor::Kind::FixedPointAlgebra: {
          GroupElement seed = enumerate_ball(M.context(), 1)[1];
          witnesses.push_back(expect(M, AlgebraElement::basis(seed)));
          break;
        }
        case SubalgebraDescriptor::Kind::FiniteDimensional:
          witnesses.push_back(AlgebraElement::basis(generator(M.context(), 1)));  // t
          break;
        default:
          break;
      }
      r.require(expect(M, AlgebraElement::unit(M.context())) == AlgebraElement::unit(M.context()),
                M.name() + ": unitality fails");
      for (int i = 0; i < samples; ++i) {
        const AlgebraElement x = random_element(ball, rng);
        const AlgebraElement ex = expect(M, x);
        if (expect(M, ex) != ex) r.require(false, M.name() + ": idempotence fails");
        if (ex.trace() != x.trace()) r.require(false, M.name() + ": trace preservation fails");
        if (ex.norm_sq() > x.norm_sq()) r.require(false, M.name() + ": contractivity fails");
        for (const AlgebraElement& m1 : witnesses)
          for (const AlgebraElement& m2 : witnesses)
            if (expect(M, m1 * x * m2) != m1 * ex * m2)
              r.require(false, M.name() + ": bimodularity fails");
        if (!r.pass) return r;
      }
    } else if (M.kind() == SubalgebraDescriptor::Kind::RadialAlgebra) {
      AlgebraElement w1 = AlgebraElement::zero(M.context());
      for (int i = 0; i < 2; ++i)
        w1 = w1 + AlgebraElement::basis(generator(M.context(), i)) +
             AlgebraElement::basis(generator(M.context(), i, -1));
      r.require(radial_spherical(2, AlgebraElement::unit(M.context())).norm_sq() == Rational(1),
                "radial: unitality fails");
      for (int i = 0; i < samples; ++i) {
        const AlgebraElement x = random_element(ball, rng);
        const SphericalVector v = radial_spherical(2, x);
        const AlgebraElement ex = materialize_spherical(M.context(), v);
        if (radial_spherical(2, ex) != v) r.require(false, "radial: idempotence fails");
        if (v.trace() != x.trace()) r.require(false, "radial: trace preservation fails");
        if (v.norm_sq() > x.norm_sq()) r.require(false, "radial: contractivity fails");
        const AlgebraElement w1sq = w1 * w1;  // also radial
        for (const AlgebraElement& m1 : {w1, w1sq})
          for (const AlgebraElement& m2 : {w1, w1sq}) {
            const AlgebraElement lhs =
                materialize_spherical(M.context(), radial_spherical(2, m1 * x * m2));
            if (lhs != m1 * ex * m2) r.require(false, "radial: bimodularity fails");
          }
        if (!r.pass) return r;
      }
    } else {  // RadialTensorFinite
      const ContextPtr sd = M.context();
      AlgebraElement w1 = AlgebraElement::zero(sd);
      for (int i = 0; i < 2; ++i)
        w1 = w1 + AlgebraElement::basis(semidirect_element(sd, generator(sd->base(), i), 0)) +
             AlgebraElement::basis(semidirect_element(sd, generator(sd->base(), i, -1), 0));
      const AlgebraElement u =
          AlgebraElement::basis(semidirect_element(sd, identity(sd->base()), 1));
      for (int i = 0; i < samples; ++i) {
        const AlgebraElement x = random_element(ball, rng);
        const auto v = radial_tensor_spherical(M, x);
        const AlgebraElement ex = materialize_tensor(sd, v);
        if (radial_tensor_spherical(M, ex) != v)
          r.require(false, M.name() + ": idempotence fails");
        if (ex.trace() != x.trace()) r.require(false, M.name() + ": trace preservation fails");
        if (expectation_norm_sq(M, x) > x.norm_sq())
          r.require(false, M.name() + ": contractivity fails");
        for (const AlgebraElement& m1 : {w1, u})
          for (const AlgebraElement& m2 : {w1, u})
            if (materialize_tensor(sd, radial_tensor_spherical(M, m1 * x * m2)) != m1 * ex * m2)
              r.require(false, M.name() + ": bimodularity fails");
        if (!r.pass) return r;
      }
    }
  }

  const SubalgebraDescriptor outer =
      SubalgebraDescriptor::subgroup_algebra(f2(), cyclic_subgroup(generator(f2(), 0)));
  const SubalgebraDescriptor inner =
      SubalgebraDescriptor::subgroup_algebra(f2(), cyclic_subgroup(generator(f2(), 0, 2)));
  const auto ball = enumerate_ball(f2(), 3);
  for (int i = 0; i < samples; ++i) {
    const AlgebraElement x = random_element(ball, rng, 6);
    if (expect(inner, expect(outer, x)) != expect(inner, x)) {
      r.require(false, "tower property fails for <s1^2> inside <s1>");
      break;
    }
  }
  return r;
}

CriterionResult criterion5_equivariance() {
  CriterionResult r;
  for (const SubalgebraDescriptor& M : shipped_descriptors()) {
    const auto conjugators = enumerate_ball(M.context(), 3);
    const auto window = enumerate_ball(M.context(), 2);
    for (const GroupElement& s : conjugators) {
      std::optional<SubalgebraDescriptor> Ms;
      if (M.supports_conjugation()) Ms = M.conjugated_by(s);
      for (const GroupElement& g : window) {
        const Rational expected = phi_value(M, conj(inv(s), g));
        Rational actual;
        if (Ms) {
          actual = phi_value(*Ms, g);
        } else if (M.kind() == SubalgebraDescriptor::Kind::RadialAlgebra) {
          actual = conjugated_radial_spherical(M.radial_rank(), s, AlgebraElement::basis(g))
                       .norm_sq();
        } else {
          const AlgebraElement us = AlgebraElement::basis(s);
          const AlgebraElement usi = AlgebraElement::basis(inv(s));
          actual = expectation_norm_sq(M, usi * AlgebraElement::basis(g) * us);
        }
        if (actual != expected) {
          r.require(false, M.name() + ": equivariance fails at s=" + format_element(s) +
                               ", g=" + format_element(g));
          return r;
        }
      }
    }
  }
  return r;
}

CriterionResult criterion6_psd() {
  CriterionResult r;
  int checked = 0;
  for (const SubalgebraDescriptor& M : shipped_descriptors()) {
    std::vector<GroupElement> elems = enumerate_ball(M.context(), 1);
    if (elems.size() > 6) elems.resize(6);
    const GramVerdict v = gram_psd_check(phi_window(M, 2), elems);
    r.require(v.psd, M.name() + ": window Gram matrix is not PSD");
    ++checked;
  }
  r.require(checked >= 6, "fewer than 6 descriptors checked");

  std::map<GroupElement, Rational> vals;
  for (const GroupElement& g : enumerate_ball(f2(), 4)) vals.emplace(g, Rational(0));
  vals[identity(f2())] = 1;
  vals[generator(f2(), 0)] = 1;
  vals[generator(f2(), 0, -1)] = 1;
  const PDWindow planted(f2(), 4, vals);
  const GroupElement a = generator(f2(), 0);
  const GramVerdict bad = gram_psd_check(planted, {identity(f2()), a, mul(a, a)});
  r.require(!bad.psd && bad.witness_minor < 0, "planted non-PD control was not rejected");
  return r;
}

CriterionResult criterion7_obstruction_pingpong() {
  CriterionResult r;
  const AlgebraElement x1 = matrix_unit_obstruction(zz2(), 1);
  r.require(!x1.is_zero(), "k=1 obstruction is zero");
  r.require(x1.norm_sq() == Rational(9, 64),
            "stated norm_sq 9/64 at k=1; exact convolution gives " +
                to_fraction_string(x1.norm_sq()) +
                " (= 12/64; the six-term expansion has identity coefficient 2/8, "
                "cross-checked by trace(e11 s^-1 e22 s e11) = 1/4)");
  for (int k = 1; k <= 8; ++k)
    r.require(!matrix_unit_obstruction(zz2(), k).is_zero(),
              "obstruction vanishes at k=" + std::to_string(k));

  const ContextPtr m3 = GroupContext::special_linear(3);
  const GroupElement s = parse_element(m3, "[-1,0,0, 0,0,1, 0,1,0]");
  const GroupElement t = parse_element(m3, "[1,0,0, 0,1,2, 0,0,1]");
  r.require(mul(s, s).is_identity() && !s.is_identity(), "s^2 != I");

  const ContextPtr pp = GroupContext::free_product_of_cyclics({2, 0}, "st");
  for (const GroupElement& w : enumerate_ball(pp, 10)) {
    if (w.is_identity()) continue;
    GroupElement image = identity(m3);
    for (const Syllable& syl : w.word())
      image = mul(image, syl.gen == 0 ? s : pow(t, syl.exp));
    if (image.is_identity()) {
      r.require(false, "alternating word evaluates to the identity: " + format_element(w));
      break;
    }
  }
  return r;
}

CriterionResult criterion8_chabauty() {
  CriterionResult r;
  const ContextPtr z = GroupContext::free_group(1, "s");
  const GroupElement s = generator(z, 0);
  std::vector<SubgroupPredicate> chain;
  for (int k = 1; k <= 6; ++k) chain.push_back(cyclic_subgroup(pow(s, 1ll << k)));
  const ChabautyVerdict v = chabauty_converges(chain, trivial_subgroup(z), 10, z);
  r.require(v.converged, "2^k Z chain does not reach the trivial window at radius 10");
  r.require(v.first_agreement && *v.first_agreement == 4, "first agreement index is not 4");
  for (int k = 1; k <= 6; ++k) {
    const Rational value =
        phi_window(SubalgebraDescriptor::subgroup_algebra(z, chain[static_cast<std::size_t>(k - 1)]),
                   10)
            .max_off_identity();
    if (k >= 4)
      r.require(value == 0, "probe value nonzero at k=" + std::to_string(k));
    else
      r.require(value == 1, "probe value should still be 1 at k=" + std::to_string(k));
  }
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    double limit_seconds;
    std::function<CriterionResult()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "exact worked values (cylinder traces, <s1,b>, char polys, orbit constants)", 10.0,
       criterion1_exact_worked_values},
      {2, "radial expectation agrees with the materialized projection on the 161-element ball",
       30.0, criterion2_radial_oracle},
      {3, "radial decay along the separation sequence, exact lengths, below 1/1000 in <= 8 steps",
       60.0, criterion3_decay},
      {4, "expectation axioms on 200 sampled elements per descriptor variant", 60.0,
       criterion4_expectation_axioms},
      {5, "equivariance phi_{M^s}(g) = phi_M(s^-1 g s) for |s| <= 3, |g| <= 2", 60.0,
       criterion5_equivariance},
      {6, "PSD Gram matrices for all descriptor windows, planted control rejected", 30.0,
       criterion6_psd},
      {7, "corner obstruction values and the ping-pong certificate", 30.0,
       criterion7_obstruction_pingpong},
      {8, "Chabauty window for the 2^k Z chain and its subgroup-algebra probe", 10.0,
       criterion8_chabauty},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = c.run();
    } catch (const std::exception& e) {
      result.pass = false;
      result.notes.push_back(std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds >= c.limit_seconds)
      result.require(false, "time limit exceeded: " + std::to_string(seconds) + "s");

    std::ostringstream line;
    line << "CRITERION " << c.id << ": " << (result.pass ? "PASS" : "FAIL") << " - " << c.title
         << " (" << seconds << "s)";
    std::cout << line.str() << "\n";
    for (const std::string& note : result.notes) std::cout << "    " << note << "\n";
    if (!result.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
