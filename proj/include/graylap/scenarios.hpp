#pragma once

// From a ScenarioConfig to Hamiltonian schedules, runs and reports.

#include <functional>
#include <string>
#include <vector>

#include "graylap/config.hpp"
#include "graylap/evolve.hpp"

namespace graylap {

struct BuiltScenario {
  HamiltonianSchedule schedule{1};
  std::vector<EncodingTable> tables;
  double time_scale = 1.0;
  double penalty = 0.0;  // h2gc Q in Laplacian units, 0 otherwise
  StateVector initial{1};
};

// Potential samples in position order (dimension 0 fastest), coarse-grained
// per the config.
std::vector<double> potential_samples(const ScenarioConfig& cfg,
                                      const NamedPotential& v);
OperatorSum compile_term(const ScenarioConfig& cfg, const TermConfig& t);
BuiltScenario build_scenario(const ScenarioConfig& cfg);

// |amplitude|^2 in position order; amplitude on prohibited codes is dropped.
std::vector<double> position_probabilities(const StateVector& psi,
                                           std::span<const EncodingTable> tables);
// Amplitudes on valid codes in position order (1D).
std::vector<cplx> position_amplitudes(const StateVector& psi,
                                      const EncodingTable& table);

struct RingReport {
  double center = 0.0;       // density at the sample nearest the origin
  double shell_max = 0.0;    // largest shell-averaged density
  double shell_radius = 0.0;
  bool ring() const { return shell_max > center; }
};

// Shell averages in bins of one lattice spacing around the origin.
RingReport ring_report(std::span<const double> density, int n0, int n1,
                       const Box& box);

struct ScenarioResult {
  ScenarioConfig config;
  BuiltScenario built;
  EvolveResult run;
  // Lowest eigenvalues of H(s_end) and the matching target ground state.
  std::vector<double> final_spectrum;
  // Exact ground energy at every snapshot s.
  std::vector<std::pair<double, double>> snapshot_ground;
  std::vector<std::string> notes;
  double ground_energy() const {
    return final_spectrum.empty() ? 0.0 : final_spectrum.front();
  }
};

struct RunOptions {
  bool write_outputs = true;
  // Overrides for convergence checks; 0 keeps the config value.
  double rtol = 0.0;
  double time_scale = 0.0;
};

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opts = {});
ScenarioResult run_deuteron(const ScenarioConfig& cfg, const RunOptions& opts = {});
ScenarioResult run_quartic2d(const ScenarioConfig& cfg, const RunOptions& opts = {});
ScenarioResult run_ho_h2gc(const ScenarioConfig& cfg, const RunOptions& opts = {});
// Dispatch on cfg.scenario.
ScenarioResult run_configured(const ScenarioConfig& cfg, const RunOptions& opts = {});

// Lowest k eigenvalues of H(s).
std::vector<double> scenario_spectrum(const ScenarioConfig& cfg, double s,
                                      std::size_t k);

struct TuneResult {
  bool converged = false;
  double value = 0.0;
  double energy = 0.0;
  int evaluations = 0;
  std::vector<std::pair<double, double>> scan;  // (parameter, ground energy)
  std::string message;
};

// Bisection on one potential parameter so the ground energy of H(s_end)
// matches target within tune.tolerance.
TuneResult tune_potential(const ScenarioConfig& cfg, double target,
                          const TuneConfig& tune);

}  // namespace graylap
