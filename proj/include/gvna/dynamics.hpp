#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gvna/ball.hpp"
#include "gvna/error.hpp"
#include "gvna/expectations.hpp"
#include "gvna/psd.hpp"
#include "gvna/subgroups.hpp"
#include "gvna/words.hpp"

namespace gvna {

/// The restriction of a positive definite function to a ball: value 1 at
/// the identity, values in [0, 1], symmetric under inversion. All three
/// are checked at construction.
class PDWindow {
 public:
  PDWindow(ContextPtr ctx, int radius, std::map<GroupElement, Rational> values)
      : ctx_(std::move(ctx)), radius_(radius), values_(std::move(values)) {
    bool saw_identity = false;
    for (const auto& [g, v] : values_) {
      if (v < 0 || v > 1)
        throw input_error("window value outside [0,1] at " + format_element(g));
      if (g.is_identity()) {
        saw_identity = true;
        if (v != 1) throw input_error("window value at the identity must be 1");
      }
      const auto it = values_.find(inv(g));
      if (it == values_.end() || it->second != v)
        throw input_error("window is not symmetric under inversion at " + format_element(g));
    }
    if (!saw_identity) throw input_error("window must contain the identity");
  }

  const ContextPtr& context() const { return ctx_; }
  int radius() const { return radius_; }
  const std::map<GroupElement, Rational>& values() const { return values_; }

  const Rational& at(const GroupElement& g) const {
    const auto it = values_.find(g);
    if (it == values_.end())
      throw input_error("element escapes the window: " + format_element(g));
    return it->second;
  }

  /// Largest value away from the identity; zero for the delta window.
  Rational max_off_identity() const {
    Rational best(0);
    for (const auto& [g, v] : values_)
      if (!g.is_identity() && v > best) best = v;
    return best;
  }

 private:
  ContextPtr ctx_;
  int radius_;
  std::map<GroupElement, Rational> values_;
};

/// phi_M restricted to the ball of the given radius.
inline PDWindow phi_window(const SubalgebraDescriptor& M, int radius,
                           const BallBudget& budget = {}) {
  std::map<GroupElement, Rational> values;
  for (const GroupElement& g : enumerate_ball(M.context(), radius, budget))
    values.emplace(g, phi_value(M, g));
  return PDWindow(M.context(), radius, std::move(values));
}

/// The conjugation action on windows: (s . phi_M)(g) = phi_M(s^-1 g s).
/// By equivariance this is the window of the conjugated subalgebra.
inline PDWindow act(const GroupElement& s, const SubalgebraDescriptor& M, int radius,
                    const BallBudget& budget = {}) {
  if (!s.context()->same_as(*M.context())) throw input_error("conjugator context mismatch");
  const GroupElement si = inv(s);
  std::map<GroupElement, Rational> values;
  for (const GroupElement& g : enumerate_ball(M.context(), radius, budget))
    values.emplace(g, phi_value(M, mul(mul(si, g), s)));
  return PDWindow(M.context(), radius, std::move(values));
}

struct GramVerdict {
  bool psd = false;
  std::vector<GroupElement> witness;  // elements indexing a negative principal minor
  Rational witness_minor;
};

/// Exact PSD decision for the Gram matrix [phi(g_i^-1 g_j)]. Every pair
/// quotient must lie inside the window (pick the elements from a
/// half-radius ball).
inline GramVerdict gram_psd_check(const PDWindow& window, const std::vector<GroupElement>& elems) {
  const std::size_t n = elems.size();
  std::vector<std::vector<Rational>> gram(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const GroupElement gi = inv(elems[i]);
    for (std::size_t j = 0; j < n; ++j) gram[i][j] = window.at(mul(gi, elems[j]));
  }
  const PsdVerdict v = psd_check(std::move(gram));
  GramVerdict out;
  out.psd = v.psd;
  out.witness_minor = v.witness_minor;
  for (std::size_t idx : v.witness_indices) out.witness.push_back(elems[idx]);
  return out;
}

// ---------------------------------------------------------------------------
// conjugator sequences

/// A deterministic source of conjugators s_1, s_2, ... (steps are 1-based).
class ConjugatorSequence {
 public:
  static ConjugatorSequence powers_of(const GroupElement& w, std::string name = "") {
    if (name.empty()) name = "powers(" + format_element(w) + ")";
    return ConjugatorSequence(std::move(name),
                              [w](int step) { return pow(w, step); });
  }

  /// s_m = a^m b^m; the workhorse separation sequence in free groups.
  static ConjugatorSequence product_powers(const GroupElement& a, const GroupElement& b) {
    detail::check_same_context(a, b);
    return ConjugatorSequence(
        "product_powers(" + format_element(a) + "," + format_element(b) + ")",
        [a, b](int step) { return mul(pow(a, step), pow(b, step)); });
  }

  static ConjugatorSequence explicit_list(std::vector<GroupElement> list, std::string name) {
    return ConjugatorSequence(std::move(name), [list = std::move(list)](int step) {
      if (step < 1 || static_cast<std::size_t>(step) > list.size())
        throw resource_error("conjugator sequence exhausted at step " + std::to_string(step));
      return list[static_cast<std::size_t>(step - 1)];
    });
  }

  /// The default sequence witnessing the i.c.c. separation property:
  /// a^m b^m in a free group, (g_1 g_2 ...)^m in a free product.
  static ConjugatorSequence icc_sequence(const ContextPtr& ctx) {
    if (ctx->kind() == GroupContext::Kind::FreeGroup && ctx->rank() >= 2)
      return product_powers(generator(ctx, 0), generator(ctx, 1));
    if (ctx->kind() == GroupContext::Kind::FreeProductOfCyclics && ctx->num_generators() >= 2) {
      GroupElement w = identity(ctx);
      for (int i = 0; i < ctx->num_generators(); ++i) w = mul(w, generator(ctx, i));
      return powers_of(w, "icc_powers(" + format_element(w) + ")");
    }
    throw input_error("no built-in i.c.c. sequence for this context");
  }

  GroupElement at(int step) const {
    if (step < 1) throw input_error("sequence steps are 1-based");
    return at_(step);
  }
  const std::string& name() const { return name_; }

 private:
  ConjugatorSequence(std::string name, std::function<GroupElement(int)> at)
      : name_(std::move(name)), at_(std::move(at)) {}
  std::string name_;
  std::function<GroupElement(int)> at_;
};

// ---------------------------------------------------------------------------
// confinement probes

struct DecayStep {
  int step = 0;
  GroupElement conjugator;
  GroupElement max_witness;  // shortlex-least maximizer
  Rational value;            // max over e != g in the window of ||E_M(s^-1 g s)||_2^2
};

struct DecayVerdicts {
  bool strictly_decreasing = false;
  bool below_tolerance = false;  // final step value < tolerance
  std::optional<int> first_below_index;
  Rational tolerance;
  /// Set when some window element keeps one positive value at every step:
  /// the orbit stays bounded away from the delta window there.
  std::optional<std::pair<GroupElement, Rational>> positive_constant_witness;
  bool partial = false;  // sequence exhausted before the requested steps
};

struct DecayReport {
  std::string descriptor;
  std::string sequence;
  int radius = 0;
  std::vector<DecayStep> steps;
  DecayVerdicts verdicts;
};

struct ProbeOptions {
  BallBudget budget;
  Rational tolerance = Rational(1, 1000);
};

/// Tabulates max_{e != g, |g| <= R} ||E_M(s_m^-1 g s_m)||_2^2 per step and
/// flags decay (orbit heading to the delta window) or a positive constant
/// value (confinement-consistent behaviour on this window).
inline DecayReport confinement_probe(const SubalgebraDescriptor& M, const ConjugatorSequence& seq,
                                     int radius, int steps, const ProbeOptions& opts = {}) {
  if (steps < 1) throw input_error("probe needs at least one step");
  DecayReport report;
  report.descriptor = M.name();
  report.sequence = seq.name();
  report.radius = radius;
  report.verdicts.tolerance = opts.tolerance;

  const std::vector<GroupElement> ball = enumerate_ball(M.context(), radius, opts.budget);
  std::map<GroupElement, Rational> constant_value;
  std::map<GroupElement, bool> still_constant;

  for (int m = 1; m <= steps; ++m) {
    GroupElement s;
    try {
      s = seq.at(m);
    } catch (const resource_error&) {
      report.verdicts.partial = true;
      break;
    }
    const GroupElement si = inv(s);
    DecayStep record;
    record.step = m;
    record.conjugator = s;
    bool first = true;
    for (const GroupElement& g : ball) {
      if (g.is_identity()) continue;
      const Rational v = phi_value(M, mul(mul(si, g), s));
      if (m == 1) {
        constant_value.emplace(g, v);
        still_constant.emplace(g, true);
      } else if (still_constant[g] && constant_value[g] != v) {
        still_constant[g] = false;
      }
      if (first || v > record.value) {
        record.value = v;
        record.max_witness = g;
        first = false;
      }
    }
    if (first) throw input_error("probe window has no off-identity elements");
    report.steps.push_back(std::move(record));
  }

  auto& v = report.verdicts;
  v.strictly_decreasing = report.steps.size() >= 2;
  for (std::size_t i = 1; i < report.steps.size(); ++i)
    if (report.steps[i].value >= report.steps[i - 1].value) v.strictly_decreasing = false;
  if (!report.steps.empty()) {
    v.below_tolerance = report.steps.back().value < v.tolerance;
    for (std::size_t i = 0; i < report.steps.size(); ++i)
      if (report.steps[i].value < v.tolerance) {
        v.first_below_index = report.steps[i].step;
        break;
      }
  }
  if (report.steps.size() >= 2) {
    for (const auto& [g, keep] : still_constant) {
      if (!keep) continue;
      const Rational& val = constant_value[g];
      if (val > 0) {
        v.positive_constant_witness = std::make_pair(g, val);
        break;  // map order = shortlex-least witness
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// separation searches

enum class SeparationMode { Generator, Icc };

struct SeparationResult {
  GroupElement element;
  std::vector<std::string> checks;
};

/// Does s^-1 F s avoid F2 entirely?
inline bool separation_certificate_holds(const GroupElement& s, const std::vector<GroupElement>& F,
                                         const std::vector<GroupElement>& F2) {
  const GroupElement si = inv(s);
  for (const GroupElement& f : F) {
    const GroupElement moved = conj(si, f);
    for (const GroupElement& f2 : F2)
      if (moved == f2) return false;
  }
  return true;
}

/// Bounded constructive search for a separating element.
///   Generator mode: s with s F s^-1 disjoint from F2 <a> F2, where <a> is
///   the first-generator cyclic subgroup; candidates s = b^l a^k as in the
///   two-step construction (first push F off <b> with a-powers, then pad
///   with b-powers). Membership in F2 <a> F2 is decided by root extraction
///   on f1^-1 w f2^-1.
///   Icc mode: s with s^-1 F s disjoint from F2; candidates a^m b^m.
/// A failed search throws a resource error naming the bound; it is never a
/// mathematical claim.
inline SeparationResult separation_search(SeparationMode mode, const std::vector<GroupElement>& F,
                                          const std::vector<GroupElement>& F2,
                                          const ContextPtr& ctx, int max_power = 64) {
  if (F.empty()) return {identity(ctx), {"F empty: identity separates"}};
  if (!ctx || ctx->kind() != GroupContext::Kind::FreeGroup || ctx->rank() < 2)
    throw input_error("separation_search needs a free group of rank >= 2");
  for (const GroupElement& f : F)
    if (f.is_identity()) throw input_error("F must exclude the identity");

  const GroupElement a = generator(ctx, 0);
  const GroupElement b = generator(ctx, 1);

  if (mode == SeparationMode::Icc) {
    for (int m = 1; m <= max_power; ++m) {
      const GroupElement s = mul(pow(a, m), pow(b, m));
      if (!separation_certificate_holds(s, F, F2)) continue;
      SeparationResult r;
      r.element = s;
      const GroupElement si = inv(s);
      for (const GroupElement& f : F)
        r.checks.push_back("s^-1 (" + format_element(f) + ") s = " +
                           format_element(conj(si, f)) + " avoids F2");
      return r;
    }
    throw resource_error("icc separation search exhausted power bound " +
                         std::to_string(max_power));
  }

  // Generator mode
  const SubgroupPredicate gen_subgroup = cyclic_subgroup(a);
  std::vector<GroupElement> frame = F2;
  if (frame.empty()) frame.push_back(identity(ctx));
  for (int bound = 1; bound <= max_power; ++bound) {
    for (int k = 1; k <= bound; ++k) {
      for (int l = 1; l <= bound; ++l) {
        if (std::max(k, l) != bound) continue;  // visit each pair once
        const GroupElement s = mul(pow(b, l), pow(a, k));
        bool ok = true;
        std::vector<std::string> checks;
        for (const GroupElement& f : F) {
          const GroupElement moved = conj(s, f);
          for (const GroupElement& f1 : frame) {
            for (const GroupElement& f2 : frame) {
              const GroupElement probe = mul(mul(inv(f1), moved), inv(f2));
              if (gen_subgroup.contains(probe)) {
                ok = false;
                break;
              }
              checks.push_back("f1^-1 s(" + format_element(f) + ")s^-1 f2^-1 = " +
                               format_element(probe) + " not in " + gen_subgroup.name);
            }
            if (!ok) break;
          }
          if (!ok) break;
        }
        if (ok) return {s, std::move(checks)};
      }
    }
  }
  throw resource_error("generator separation search exhausted power bound " +
                       std::to_string(max_power));
}

// ---------------------------------------------------------------------------
// Chabauty windows and orbit constancy

struct ChabautyVerdict {
  bool converged = false;              // the chain agrees with the target from some index on
  std::optional<int> first_agreement;  // 1-based index of that tail
};

/// Window criterion for Chabauty convergence H_n -> H: the subgroup
/// indicators agree on the ball of the given radius for every n past some
/// index.
inline ChabautyVerdict chabauty_converges(const std::vector<SubgroupPredicate>& chain,
                                          const SubgroupPredicate& target, int radius,
                                          const ContextPtr& ctx, const BallBudget& budget = {}) {
  if (chain.empty()) throw input_error("empty subgroup chain");
  const std::vector<GroupElement> ball = enumerate_ball(ctx, radius, budget);
  std::vector<bool> agree;
  agree.reserve(chain.size());
  for (const auto& h : chain) {
    bool ok = true;
    for (const GroupElement& g : ball)
      if (h.contains(g) != target.contains(g)) {
        ok = false;
        break;
      }
    agree.push_back(ok);
  }
  ChabautyVerdict v;
  if (!agree.back()) return v;
  int idx = static_cast<int>(agree.size());
  while (idx >= 2 && agree[static_cast<std::size_t>(idx - 2)]) --idx;
  v.converged = true;
  v.first_agreement = idx;
  return v;
}

struct OrbitConstancy {
  bool constant = false;
  Rational value;  // the common value, or the value at the first counterexample
  std::optional<GroupElement> counterexample;
};

/// Checks whether phi_M(s^-1 g0 s) takes one value for every conjugator of
/// length <= conj_radius. The constant-value certificate behind the exotic
/// orbit examples.
inline OrbitConstancy orbit_constancy_check(const SubalgebraDescriptor& M, const GroupElement& g0,
                                            int conj_radius, const BallBudget& budget = {}) {
  OrbitConstancy out;
  out.value = phi_value(M, g0);
  out.constant = true;
  for (const GroupElement& s : enumerate_ball(M.context(), conj_radius, budget)) {
    const Rational v = phi_value(M, conj(inv(s), g0));
    if (v != out.value) {
      out.constant = false;
      out.counterexample = s;
      out.value = v;
      return out;
    }
  }
  return out;
}

}  // namespace gvna
