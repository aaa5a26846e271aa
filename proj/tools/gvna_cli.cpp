// Batch front-end: run named scenarios or ad-hoc confinement probes and
// emit JSON/CSV reports. Exit codes: 0 all assertions pass, 1 assertion
// failure, 2 usage error, 3 resource/budget error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gvna/scenarios.hpp"

namespace {

using namespace gvna;

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw input_error("cannot open output path: " + out_path);
  out << text;
}

SubalgebraDescriptor descriptor_by_name(const std::string& name, int rank) {
  const ContextPtr f2 = GroupContext::free_group(2);
  if (name == "trivial") return SubalgebraDescriptor::trivial(f2);
  if (name == "generator")
    return SubalgebraDescriptor::subgroup_algebra(f2, cyclic_subgroup(generator(f2, 0)));
  if (name == "radial")
    return SubalgebraDescriptor::radial(GroupContext::free_group(rank < 2 ? 2 : rank));
  if (name == "fixed-swap")
    return SubalgebraDescriptor::fixed_point(Automorphism::generator_swap(f2));
  if (name == "flip")
    return SubalgebraDescriptor::fixed_point(
        Automorphism::coordinate_flip(GroupContext::direct_power(f2, 2)));
  if (name == "two-projection") {
    const ContextPtr zz = GroupContext::free_product_of_cyclics({0, 2}, "st");
    const Rational half(1, 2);
    const AlgebraElement one = AlgebraElement::unit(zz);
    const AlgebraElement t = AlgebraElement::basis(generator(zz, 1));
    return SubalgebraDescriptor::finite_dimensional(
        zz, {MatrixUnitBlock{1, {half * (one + t)}}, MatrixUnitBlock{1, {half * (one - t)}}},
        "span{(1+t)/2,(1-t)/2}");
  }
  if (name == "radial-tensor")
    return SubalgebraDescriptor::radial_tensor_finite(
        GroupContext::semidirect_by_finite_aut(f2, Automorphism::generator_swap(f2)));
  throw input_error("unknown descriptor '" + name +
                    "' (try: trivial, generator, radial, fixed-swap, flip, two-projection, "
                    "radial-tensor)");
}

ConjugatorSequence sequence_by_spec(const std::string& spec, const ContextPtr& ctx) {
  if (spec == "icc") return ConjugatorSequence::icc_sequence(ctx);
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const std::string rest = spec.substr(colon + 1);
    if (kind == "powers") return ConjugatorSequence::powers_of(parse_element(ctx, rest));
    if (kind == "product") {
      const auto comma = rest.find(',');
      if (comma == std::string::npos)
        throw input_error("product sequence needs two comma-separated words");
      return ConjugatorSequence::product_powers(parse_element(ctx, rest.substr(0, comma)),
                                                parse_element(ctx, rest.substr(comma + 1)));
    }
  }
  throw input_error("unknown sequence spec '" + spec +
                    "' (try: icc, powers:<word>, product:<w1>,<w2>)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact confinement probes and subalgebra scenarios"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "print the scenario catalog");

  std::string scenario_id;
  std::string format = "json";
  std::string out_path;
  ScenarioParams params;
  int radius = -1, steps = -1, conj_radius = -1, rank = -1;
  unsigned long long seed = 20260801ull;
  auto* run_cmd = app.add_subcommand("run", "run a named scenario");
  run_cmd->add_option("id", scenario_id, "scenario id (see `list`)")->required();
  run_cmd->add_option("--radius", radius, "window radius");
  run_cmd->add_option("--steps", steps, "probe steps / chain length");
  run_cmd->add_option("--conj-radius", conj_radius, "conjugator ball radius");
  run_cmd->add_option("--rank", rank, "free rank / factor count");
  run_cmd->add_option("--seed", seed, "seed for sampled checks");
  run_cmd->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_option("--out", out_path, "output path (default: stdout)");

  std::string probe_descriptor = "radial";
  std::string probe_sequence = "icc";
  int probe_radius = 2, probe_steps = 8, probe_rank = 2;
  std::string probe_format = "json";
  std::string probe_out;
  auto* probe_cmd = app.add_subcommand("probe", "run an ad-hoc confinement probe");
  probe_cmd->add_option("--descriptor", probe_descriptor,
                        "trivial | generator | radial | fixed-swap | flip | two-projection | "
                        "radial-tensor");
  probe_cmd->add_option("--sequence", probe_sequence, "icc | powers:<w> | product:<w1>,<w2>");
  probe_cmd->add_option("--radius", probe_radius, "window radius");
  probe_cmd->add_option("--steps", probe_steps, "number of steps");
  probe_cmd->add_option("--rank", probe_rank, "free rank for the radial descriptor");
  probe_cmd->add_option("--format", probe_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  probe_cmd->add_option("--out", probe_out, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (list_cmd->parsed()) {
      for (const std::string& id : gvna::scenario_catalog()) std::cout << id << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      if (radius >= 0) params.radius = radius;
      if (steps >= 0) params.steps = steps;
      if (conj_radius >= 0) params.conj_radius = conj_radius;
      if (rank >= 0) params.rank = rank;
      params.seed = seed;
      const gvna::ScenarioReport report = gvna::run_scenario(scenario_id, params);
      write_output(format == "json" ? gvna::to_json(report).dump(2) : gvna::to_csv(report),
                   out_path);
      return report.pass ? 0 : 1;
    }
    if (probe_cmd->parsed()) {
      const gvna::SubalgebraDescriptor M = descriptor_by_name(probe_descriptor, probe_rank);
      const gvna::ConjugatorSequence seq = sequence_by_spec(probe_sequence, M.context());
      const gvna::DecayReport report =
          gvna::confinement_probe(M, seq, probe_radius, probe_steps);
      if (probe_format == "json") {
        gvna::Json j = gvna::to_json(report, "probe");
        j["descriptor_detail"] = gvna::to_json(M);
        write_output(j.dump(2), probe_out);
      } else {
        write_output(gvna::to_csv(report), probe_out);
      }
      return 0;
    }
  } catch (const gvna::resource_error& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return 3;
  } catch (const gvna::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
