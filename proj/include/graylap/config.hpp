#pragma once

// Scenario configuration read from TOML.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "graylap/encodings.hpp"
#include "graylap/evolve.hpp"
#include "graylap/potentials.hpp"
#include "graylap/schedule.hpp"
#include "graylap/walsh.hpp"

namespace graylap {

enum class Units { nuclear, natural };     // MeV and fm, or hbar = c = 1
enum class BoxOrigin { symmetric, left, radial };

enum class TermKind {
  kinetic,     // (2D I - L) / (2 m a^2) in the configured encoding
  transverse,  // the same without the h2gc penalty part
  penalty,     // h2gc prohibited-code projectors, scaled like the kinetic term
  potential,
};

std::string_view to_string(TermKind k);

struct TermConfig {
  TermKind kind = TermKind::kinetic;
  std::string label;
  Schedule schedule = Schedule::constant();
  std::optional<NamedPotential> potential;
  // penalty: Q = multiplier * UV cutoff, in Laplacian units
  double multiplier = 0.0;
};

struct TuneConfig {
  std::string term;  // potential term label
  std::string parameter = "e_well";
  double lo = 0.0;
  double hi = 0.0;
  std::optional<double> target;
  double tolerance = 0.01;
};

struct ScenarioConfig {
  std::string name;
  std::string scenario = "generic";  // deuteron, quartic2d, ho_h2gc, generic
  EncodingKind encoding = EncodingKind::brgc;
  std::vector<int> qubits;
  double mass = 1.0;
  Units units = Units::natural;
  double box_length = 1.0;
  BoxOrigin origin = BoxOrigin::left;

  double time_scale = 1.0;   // T
  // When set, T is chosen so that T * penalty_stage_end equals the penalty
  // coefficient Q.
  std::optional<double> penalty_stage_end;
  double s_end = 1.0;

  std::vector<TermConfig> terms;

  CoarseGrainMethod coarse_method = CoarseGrainMethod::averaging;
  int coarse_width = 0;  // 0 samples at full resolution
  std::optional<DontCareFill> fill;
  double chop = 0.0;

  Propagator propagator = Propagator::rk45;
  double rtol = 1e-9;
  double atol = 1e-12;
  std::size_t trace_points = 201;
  std::size_t spectrum_points = 64;
  std::size_t spectrum_k = 4;
  std::vector<double> snapshots;
  int magnus_width_limit = 8;

  std::filesystem::path output_dir;
  std::optional<TuneConfig> tune;

  std::filesystem::path source;
  std::string source_text;

  double hbar_c() const { return units == Units::nuclear ? kHbarC : 1.0; }
  int total_qubits() const;
  int dimensions() const { return static_cast<int>(qubits.size()); }

  // Position table for dimension d.
  EncodingTable table(int d) const;
  std::vector<EncodingTable> tables() const;
  Box box() const;
  double spacing(int d) const;
  double kinetic_scale(int d) const;   // hbar_c^2 / (2 m a^2)
  double uv_cutoff(int d) const;       // hbar_c / a

  TermConfig& term(const std::string& label);
  const TermConfig& term(const std::string& label) const;
};

ScenarioConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir = ".");
ScenarioConfig load_config(const std::filesystem::path& path);

}  // namespace graylap
