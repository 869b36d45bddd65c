// graylap command line: run / spectrum / compile-potential / reduce / tune.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "graylap/config.hpp"
#include "graylap/output.hpp"
#include "graylap/reduce2local.hpp"
#include "graylap/scenarios.hpp"

using namespace graylap;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int cmd_run(const std::string& path, const std::string& out, double rtol) {
  auto cfg = load_config(path);
  if (!out.empty()) cfg.output_dir = out;
  RunOptions opts;
  opts.rtol = rtol;
  const auto r = run_configured(cfg, opts);
  const auto& tr = r.run.trace;
  std::printf("scenario      %s (%s)\n", cfg.name.c_str(), cfg.scenario.c_str());
  std::printf("qubits        %d, T = %.6g, s_end = %g, %s\n", cfg.total_qubits(),
              r.built.time_scale, cfg.s_end, to_string(cfg.propagator).c_str());
  std::printf("steps         %llu accepted, %llu rejected\n",
              static_cast<unsigned long long>(tr.accepted),
              static_cast<unsigned long long>(tr.rejected));
  std::printf("ground energy %.10g\n", r.ground_energy());
  std::printf("final energy  %.10g\n", tr.samples.back().energy);
  std::printf("final overlap %.10g\n", tr.final_overlap());
  std::printf("min gap       %.10g\n", tr.min_gap());
  std::printf("norm drift    %.3g total, %.3g per unit time\n", tr.total_norm_drift,
              tr.drift_per_time);
  for (const auto& n : r.notes) std::printf("note          %s\n", n.c_str());
  std::printf("output        %s\n", cfg.output_dir.string().c_str());
  return 0;
}

int cmd_spectrum(const std::string& path, double s, std::size_t k) {
  const auto cfg = load_config(path);
  if (s < 0.0 || s > cfg.s_end)
    throw ConfigError("--s must lie in [0, " + std::to_string(cfg.s_end) + "]");
  const auto ev = scenario_spectrum(cfg, s, k);
  std::printf("# s = %g, lowest %zu eigenvalues\n", s, ev.size());
  for (std::size_t i = 0; i < ev.size(); ++i) std::printf("%zu %.12g\n", i, ev[i]);
  return 0;
}

int cmd_compile(const std::string& path, const std::string& out) {
  const auto cfg = load_config(path);
  const std::filesystem::path dir = out.empty() ? cfg.output_dir : std::filesystem::path(out);
  int n = 0;
  for (const auto& t : cfg.terms) {
    if (t.kind != TermKind::potential) continue;
    const auto samples = potential_samples(cfg, *t.potential);
    const auto tables = cfg.tables();
    const auto values = potential_code_values(samples, tables, cfg.fill);
    const auto coeffs = fwht(values, WalshOrder::binary);
    const auto op = to_operator(coeffs, cfg.chop);
    write_text(dir / (t.label + ".pauli"), serialize(op));
    write_text(dir / (t.label + "_coefficients.csv"), coefficient_csv(coeffs, cfg.chop));
    const auto census = basis_census(op);
    std::printf("%s: %zu Z-strings, locality %d -> %s\n", t.label.c_str(), op.size(),
                census.locality, (dir / (t.label + ".pauli")).string().c_str());
    ++n;
  }
  if (n == 0) throw ConfigError("config has no potential terms");
  return 0;
}

int cmd_reduce(const std::string& path, const std::string& term, double q,
               double tree_weight, const std::string& out) {
  const auto cfg = load_config(path);
  OperatorSum h(cfg.total_qubits());
  if (term == "all") {
    h = build_scenario(cfg).schedule.at(cfg.s_end);
  } else if (term.empty()) {
    bool found = false;
    for (const auto& t : cfg.terms)
      if (t.kind == TermKind::kinetic || t.kind == TermKind::transverse) {
        h = compile_term(cfg, t);
        found = true;
        break;
      }
    if (!found) throw ConfigError("config has no kinetic term; pass --term");
  } else {
    h = compile_term(cfg, cfg.term(term));
  }
  ReductionOptions opts;
  opts.penalty = q;
  opts.tree_height_weight = tree_weight;
  const auto plan = reduce_to_2local(h, opts);
  const std::string text = plan.dump();
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);
  std::fprintf(stderr, "%d qubits -> %d qubits (%zu ancillas), locality %d, Q = %g\n",
               plan.original_width, plan.total_width, plan.ancillas.size(),
               basis_census(plan.reduced).locality, plan.penalty);
  return 0;
}

int cmd_tune(const std::string& path, double target, const std::string& param,
             const std::vector<double>& bracket) {
  const auto cfg = load_config(path);
  TuneConfig t = cfg.tune.value_or(TuneConfig{});
  if (!param.empty()) t.parameter = param;
  if (bracket.size() == 2) {
    t.lo = bracket[0];
    t.hi = bracket[1];
  }
  if (!(t.hi > t.lo)) throw ConfigError("tune needs a bracket ([tune] bracket or --bracket)");
  if (t.term.empty()) t.term = "potential";
  const auto r = tune_potential(cfg, target, t);
  std::printf("%s\n", r.message.c_str());
  if (!r.converged) return kExitNumerical;
  std::printf("%s = %.10g\n", t.parameter.c_str(), r.value);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graylap: Gray-code encoded lattice Hamiltonians and annealing runs"};
  app.require_subcommand(1);

  std::string config, out, term, param;
  double rtol = 0.0, s = 1.0, q = 0.0, tree = 0.0, target = 0.0;
  std::size_t k = 4;
  std::vector<double> bracket;

  auto* run = app.add_subcommand("run", "evolve a scenario and write traces");
  run->add_option("config", config, "scenario TOML")->required();
  run->add_option("--out", out, "output directory");
  run->add_option("--rtol", rtol, "override the local error tolerance");

  auto* spec = app.add_subcommand("spectrum", "lowest eigenvalues of H(s)");
  spec->add_option("config", config)->required();
  spec->add_option("--s", s, "schedule point")->required();
  spec->add_option("-k", k, "number of eigenvalues")->required();

  auto* comp = app.add_subcommand("compile-potential", "emit Z-string potentials");
  comp->add_option("config", config)->required();
  comp->add_option("--out", out, "output directory");

  auto* red = app.add_subcommand("reduce", "emit a 2-local reduction plan");
  red->add_option("config", config)->required();
  red->add_option("--term", term, "term label, or 'all' for H(s_end); default kinetic");
  red->add_option("--penalty", q, "gadget penalty Q (default 100x spectral width)");
  red->add_option("--tree-weight", tree, "tree height weight in pair ranking");
  red->add_option("--out", out, "write the plan here instead of stdout");

  auto* tune = app.add_subcommand("tune", "fit one potential parameter to a ground energy");
  tune->add_option("config", config)->required();
  tune->add_option("--target", target, "ground energy")->required();
  tune->add_option("--parameter", param, "potential parameter (default from [tune])");
  tune->add_option("--bracket", bracket, "search interval lo hi")->expected(2);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config, out, rtol);
    if (*spec) return cmd_spectrum(config, s, k);
    if (*comp) return cmd_compile(config, out);
    if (*red) return cmd_reduce(config, term, q, tree, out);
    if (*tune) return cmd_tune(config, target, param, bracket);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const ContractError& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    std::fprintf(stderr, "unsupported: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return kExitNumerical;
  }
  return 0;
}
