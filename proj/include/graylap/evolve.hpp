#pragma once

// i d psi/dt = H(t) psi with H(t) = sum_i w_i(s) H_i and s = s_begin + t/T.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "graylap/eigensolver.hpp"
#include "graylap/pauli.hpp"
#include "graylap/schedule.hpp"

namespace graylap {

struct ScheduleComponent {
  std::string label;
  Schedule schedule;
  OperatorSum op;
};

class HamiltonianSchedule {
 public:
  explicit HamiltonianSchedule(int width) : width_(width) {}

  void add(std::string label, Schedule schedule, OperatorSum op);

  int width() const { return width_; }
  const std::vector<ScheduleComponent>& components() const { return parts_; }
  std::vector<double> weights(double s) const;
  OperatorSum at(double s) const;

 private:
  int width_;
  std::vector<ScheduleComponent> parts_;
};

enum class Propagator { rk45, magnus4 };

std::string to_string(Propagator p);
Propagator parse_propagator(const std::string& s);

struct EvolveControls {
  Propagator method = Propagator::rk45;
  double s_begin = 0.0;
  double s_end = 1.0;
  // Local error per step: rtol on the state, atol as an absolute floor.
  double rtol = 1e-9;
  double atol = 1e-12;
  double initial_step = 0.0;     // 0 picks one from the operator norm
  double min_step = 1e-12;       // relative to T
  std::uint64_t max_steps = 200'000'000;
  std::size_t trace_points = 201;
  std::size_t spectrum_points = 64;
  std::size_t spectrum_k = 0;    // 0 disables spectra
  double norm_tolerance = 1e-6;  // accumulated drift allowed before renormalizing
  std::optional<StateVector> target;
  std::vector<double> snapshot_s;
  EigenOptions eigen;
  // magnus4 builds dense exponentials up to this width.
  int magnus_width_limit = 8;
};

struct TraceSample {
  double s = 0.0;
  double t = 0.0;
  double energy = 0.0;
  double overlap = 0.0;
  double norm_drift = 0.0;  // accumulated since the start
  std::vector<double> eigenvalues;  // empty when not sampled
  double gap() const;
};

struct SimulationTrace {
  std::vector<TraceSample> samples;
  std::vector<std::pair<double, double>> steps;  // (t, h) of accepted steps
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  double total_norm_drift = 0.0;   // sum of per-step |norm - 1|
  double max_step_drift = 0.0;
  double drift_per_time = 0.0;
  std::vector<std::pair<double, StateVector>> snapshots;
  std::vector<std::string> warnings;

  double min_gap() const;
  double final_overlap() const;
  // "s,t,energy,overlap,norm_drift,gap,ev_0..ev_{k-1}"
  std::string csv() const;
};

struct EvolveResult {
  SimulationTrace trace;
  StateVector final_state{1};
};

EvolveResult evolve(const HamiltonianSchedule& hs, const StateVector& psi0,
                    double total_time, const EvolveControls& controls = {});

std::vector<double> instantaneous_spectrum(const HamiltonianSchedule& hs,
                                           double s, std::size_t k,
                                           const EigenOptions& opts = {});

// (2 pi hbar c)^2 / (2 m L^2)
double ir_cutoff(double mass, double length, double hbar_c = 1.0);

// |<phi|psi>|^2
double overlap(const StateVector& psi, const StateVector& phi);
// Re <psi|h|psi>
double energy(const StateVector& psi, const OperatorSum& h);

}  // namespace graylap
