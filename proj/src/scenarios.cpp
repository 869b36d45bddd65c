#include "graylap/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "graylap/laplacian.hpp"
#include "graylap/output.hpp"

namespace graylap {
namespace {

std::size_t grid_size(const std::vector<EncodingTable>& tables) {
  std::size_t n = 1;
  for (const auto& t : tables) n *= t.positions();
  return n;
}

// Code of the lattice point with flat position index `flat`.
Code code_of(std::size_t flat, std::span<const EncodingTable> tables) {
  Code c = 0;
  int shift = 0;
  for (const auto& t : tables) {
    c |= t.code(flat % t.positions()) << shift;
    flat /= t.positions();
    shift += t.width();
  }
  return c;
}

OperatorSum embed_block(const OperatorSum& op, const ScenarioConfig& cfg, int d) {
  int offset = 0;
  for (int i = 0; i < d; ++i) offset += cfg.qubits[static_cast<std::size_t>(i)];
  return op.embedded(cfg.total_qubits(), offset);
}

double penalty_q(const ScenarioConfig& cfg) {
  for (const auto& t : cfg.terms)
    if (t.kind == TermKind::penalty) return t.multiplier * cfg.uv_cutoff(0);
  return 0.0;
}

EvolveControls controls_for(const ScenarioConfig& cfg, const RunOptions& opts) {
  EvolveControls c;
  c.method = cfg.propagator;
  c.s_end = cfg.s_end;
  c.rtol = opts.rtol > 0.0 ? opts.rtol : cfg.rtol;
  c.atol = std::min(cfg.atol, c.rtol * 1e-3);
  c.trace_points = cfg.trace_points;
  c.spectrum_points = cfg.spectrum_points;
  c.spectrum_k = cfg.spectrum_k;
  c.snapshot_s = cfg.snapshots;
  c.magnus_width_limit = cfg.magnus_width_limit;
  return c;
}

double ground_energy(const OperatorSum& h) {
  const auto ep = lowest_eigenpairs(h, 1);
  return ep.values[0];
}

}  // namespace

std::vector<double> potential_samples(const ScenarioConfig& cfg,
                                      const NamedPotential& v) {
  const auto tables = cfg.tables();
  const Box box = cfg.box();
  const int dims = cfg.dimensions();
  if (dims == 1) {
    const int a = cfg.qubits[0];
    const std::size_t n = tables[0].positions();
    if (cfg.coarse_width == 0 || cfg.coarse_width == a) {
      std::vector<double> out(n);
      for (std::size_t m = 0; m < n; ++m) out[m] = v(box.sample_x(m, n));
      return out;
    }
    if (n != tables[0].code_space())
      throw ConfigError("coarse graining needs a bijective encoding");
    CoarseGrainSpec spec;
    spec.method = cfg.coarse_method;
    spec.coarse_width = cfg.coarse_width;
    if (auto bi = v.block_integral(); bi && spec.method == CoarseGrainMethod::averaging)
      spec.integral = *bi;
    const auto coarse = coarse_grain(v.fn(), box, a, spec);
    return hold_piecewise(coarse, a);
  }
  if (cfg.coarse_width != 0 && cfg.coarse_width != cfg.qubits[0])
    throw ConfigError("coarse graining is 1D only");
  std::vector<double> out(grid_size(tables));
  std::vector<double> x(static_cast<std::size_t>(dims));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    std::size_t rem = flat;
    for (int d = 0; d < dims; ++d) {
      const std::size_t n = tables[static_cast<std::size_t>(d)].positions();
      x[static_cast<std::size_t>(d)] = box.sample_x(rem % n, n);
      rem /= n;
    }
    out[flat] = v(x);
  }
  return out;
}

OperatorSum compile_term(const ScenarioConfig& cfg, const TermConfig& t) {
  const int total = cfg.total_qubits();
  OperatorSum h(total);
  switch (t.kind) {
    case TermKind::kinetic:
      if (cfg.encoding == EncodingKind::h2gc)
        throw ConfigError("h2gc kinetic energy is split into 'transverse' and "
                          "'penalty' terms");
      [[fallthrough]];
    case TermKind::transverse:
      for (int d = 0; d < cfg.dimensions(); ++d) {
        const int a = cfg.qubits[static_cast<std::size_t>(d)];
        OperatorSum l(a);
        switch (cfg.encoding) {
          case EncodingKind::binary: l = laplacian_binary(a); break;
          case EncodingKind::brgc: l = laplacian_brgc(a); break;
          case EncodingKind::h2gc: l = transverse_field(a); break;
          case EncodingKind::sequency:
            throw UnsupportedError("no Laplacian builder for sequency order");
        }
        const double s = cfg.kinetic_scale(d);
        h += embed_block(s * (OperatorSum::identity(a, 2.0) - l), cfg, d);
      }
      return h;
    case TermKind::penalty: {
      const double q = t.multiplier * cfg.uv_cutoff(0);
      for (int d = 0; d < cfg.dimensions(); ++d) {
        const auto table = cfg.table(d);
        h += embed_block(cfg.kinetic_scale(d) * q * h2gc_penalty(table), cfg, d);
      }
      return h;
    }
    case TermKind::potential: {
      const auto samples = potential_samples(cfg, *t.potential);
      const auto tables = cfg.tables();
      return compile_potential(samples, tables, cfg.fill, cfg.chop);
    }
  }
  return h;
}

BuiltScenario build_scenario(const ScenarioConfig& cfg) {
  BuiltScenario b;
  b.tables = cfg.tables();
  b.schedule = HamiltonianSchedule(cfg.total_qubits());
  for (const auto& t : cfg.terms) b.schedule.add(t.label, t.schedule, compile_term(cfg, t));
  b.penalty = penalty_q(cfg);
  b.time_scale = cfg.time_scale;
  if (cfg.penalty_stage_end) b.time_scale = b.penalty / *cfg.penalty_stage_end;
  b.initial = StateVector::uniform(cfg.total_qubits());
  return b;
}

std::vector<double> position_probabilities(const StateVector& psi,
                                           std::span<const EncodingTable> tables) {
  std::size_t n = 1;
  int total = 0;
  for (const auto& t : tables) {
    n *= t.positions();
    total += t.width();
  }
  if (total != psi.width()) throw ContractError("state width does not match tables");
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(psi[code_of(i, tables)]);
  return p;
}

std::vector<cplx> position_amplitudes(const StateVector& psi,
                                      const EncodingTable& table) {
  if (table.width() != psi.width()) throw ContractError("state width does not match table");
  std::vector<cplx> a(table.positions());
  for (std::size_t m = 0; m < a.size(); ++m) a[m] = psi[table.code(m)];
  return a;
}

RingReport ring_report(std::span<const double> density, int n0, int n1,
                       const Box& box) {
  if (density.size() != static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1))
    throw ContractError("density grid size mismatch");
  const double a = box.spacing(static_cast<std::size_t>(n0));
  RingReport r;
  double best_r = 1e300;
  std::map<long, std::pair<double, int>> shells;
  for (int iy = 0; iy < n1; ++iy)
    for (int ix = 0; ix < n0; ++ix) {
      const double x = box.sample_x(static_cast<std::size_t>(ix), static_cast<std::size_t>(n0));
      const double y = box.sample_x(static_cast<std::size_t>(iy), static_cast<std::size_t>(n1));
      const double rad = std::hypot(x, y);
      const double p = density[static_cast<std::size_t>(iy) * n0 + ix];
      if (rad < best_r) {
        best_r = rad;
        r.center = p;
      }
      if (rad > 0.5 * box.length) continue;  // partial shells in the corners
      auto& s = shells[std::lround(rad / a)];
      s.first += p;
      ++s.second;
    }
  for (const auto& [k, s] : shells) {
    if (k == 0) continue;
    const double mean = s.first / s.second;
    if (mean > r.shell_max) {
      r.shell_max = mean;
      r.shell_radius = static_cast<double>(k) * a;
    }
  }
  return r;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts) {
  ScenarioResult r;
  r.config = cfg;
  r.built = build_scenario(cfg);
  const auto& hs = r.built.schedule;
  const double T = opts.time_scale > 0.0 ? opts.time_scale : r.built.time_scale;
  r.built.time_scale = T;

  auto ctl = controls_for(cfg, opts);
  const std::size_t k = std::max<std::size_t>(cfg.spectrum_k, 1);
  const auto final_h = hs.at(cfg.s_end);
  const auto ep = lowest_eigenpairs(final_h, k, true, ctl.eigen);
  r.final_spectrum.assign(ep.values.data(), ep.values.data() + ep.values.size());
  {
    std::vector<cplx> g(ep.vectors.rows());
    for (Eigen::Index i = 0; i < ep.vectors.rows(); ++i) g[i] = ep.vectors(i, 0);
    ctl.target = StateVector::from_amplitudes(std::move(g), true);
  }
  for (double s : cfg.snapshots)
    r.snapshot_ground.emplace_back(s, ground_energy(hs.at(s)));

  r.run = evolve(hs, r.built.initial, T, ctl);
  for (const auto& w : r.run.trace.warnings) r.notes.push_back(w);
  if (opts.write_outputs) write_run_outputs(r);
  return r;
}

ScenarioResult run_deuteron(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (cfg.dimensions() != 1) throw ConfigError("deuteron scenario is 1D");
  if (std::none_of(cfg.terms.begin(), cfg.terms.end(), [](const TermConfig& t) {
        return t.potential && t.potential->form() == PotentialForm::nn_core_well;
      }))
    throw ConfigError("deuteron scenario needs an nn_core_well potential term");
  auto r = run_scenario(cfg, opts);
  std::ostringstream os;
  os << "ground energy " << r.ground_energy() << " MeV, IR cutoff "
     << ir_cutoff(cfg.mass, cfg.box_length, cfg.hbar_c()) << " MeV, min gap "
     << r.run.trace.min_gap() << " MeV, final overlap " << r.run.trace.final_overlap();
  r.notes.push_back(os.str());
  return r;
}

ScenarioResult run_quartic2d(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (cfg.dimensions() != 2) throw ConfigError("quartic2d scenario is 2D");
  auto r = run_scenario(cfg, opts);
  const int n0 = static_cast<int>(r.built.tables[0].positions());
  const int n1 = static_cast<int>(r.built.tables[1].positions());
  for (const auto& [s, psi] : r.run.trace.snapshots) {
    const auto p = position_probabilities(psi, r.built.tables);
    const auto ring = ring_report(p, n0, n1, cfg.box());
    std::ostringstream os;
    os << "s=" << s << ": center density " << ring.center << ", max shell "
       << ring.shell_max << " at r=" << ring.shell_radius;
    r.notes.push_back(os.str());
    if (opts.write_outputs) {
      char name[64];
      std::snprintf(name, sizeof name, "density_s%.3f.csv", s);
      write_text(cfg.output_dir / name, density_grid_csv(p, n0, n1));
    }
  }
  return r;
}

ScenarioResult run_ho_h2gc(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (cfg.encoding != EncodingKind::h2gc) throw ConfigError("ho_h2gc needs encoding = \"h2gc\"");
  if (cfg.dimensions() != 1) throw ConfigError("ho_h2gc scenario is 1D");
  auto r = run_scenario(cfg, opts);
  const auto& table = r.built.tables[0];
  for (const auto& [s, psi] : r.run.trace.snapshots) {
    const auto amp = position_amplitudes(psi, table);
    const double want = 1.0 / std::sqrt(static_cast<double>(table.positions()));
    double dev = 0.0;
    for (const auto& a : amp) dev = std::max(dev, std::abs(std::abs(a) - want));
    std::ostringstream os;
    os << "s=" << s << ": max | |amplitude| - 1/sqrt(" << table.positions()
       << ") | = " << dev;
    r.notes.push_back(os.str());
  }
  return r;
}

ScenarioResult run_configured(const ScenarioConfig& cfg, const RunOptions& opts) {
  if (cfg.scenario == "deuteron") return run_deuteron(cfg, opts);
  if (cfg.scenario == "quartic2d") return run_quartic2d(cfg, opts);
  if (cfg.scenario == "ho_h2gc") return run_ho_h2gc(cfg, opts);
  return run_scenario(cfg, opts);
}

std::vector<double> scenario_spectrum(const ScenarioConfig& cfg, double s,
                                      std::size_t k) {
  const auto b = build_scenario(cfg);
  return instantaneous_spectrum(b.schedule, s, k);
}

TuneResult tune_potential(const ScenarioConfig& cfg, double target,
                          const TuneConfig& tune) {
  ScenarioConfig work = cfg;
  auto& term = work.term(tune.term);
  if (!term.potential) throw ConfigError("tune term '" + tune.term + "' is not a potential");
  term.potential->param(tune.parameter);  // throws when absent

  TuneResult res;
  auto eval = [&](double p) {
    term.potential->set_param(tune.parameter, p);
    const auto b = build_scenario(work);
    ++res.evaluations;
    return ground_energy(b.schedule.at(work.s_end));
  };
  double lo = tune.lo, hi = tune.hi;
  double flo = eval(lo) - target, fhi = eval(hi) - target;
  if (flo * fhi > 0.0) {
    for (int i = 0; i <= 10; ++i) {
      const double p = tune.lo + (tune.hi - tune.lo) * i / 10.0;
      res.scan.emplace_back(p, eval(p));
    }
    std::ostringstream os;
    os << "target " << target << " is not bracketed by " << tune.parameter
       << " in [" << tune.lo << ", " << tune.hi << "]; ground energies:";
    for (const auto& [p, e] : res.scan) os << "\n  " << p << "  " << e;
    res.message = os.str();
    return res;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval(mid) - target;
    res.value = mid;
    res.energy = fm + target;
    if (std::abs(fm) <= tune.tolerance * 1e-3 || hi - lo <= 1e-13 * std::max(1.0, std::abs(mid)))
      break;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  res.converged = std::abs(res.energy - target) <= tune.tolerance;
  std::ostringstream os;
  os << tune.parameter << " = " << res.value << " gives ground energy " << res.energy;
  res.message = os.str();
  return res;
}

}  // namespace graylap
