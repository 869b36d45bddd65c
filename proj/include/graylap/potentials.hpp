#pragma once

// Named analytic potentials and tabulated CSV potentials.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graylap/walsh.hpp"

namespace graylap {

enum class PotentialForm { nn_core_well, quartic, quadratic, harmonic, csv };

std::string_view to_string(PotentialForm f);
PotentialForm parse_potential_form(std::string_view s);

// nn_core_well: e_core exp(-(r/r_core)^4) - e_well exp(-(r/r_well)^4)
// quartic:      v4 |x|^4
// quadratic:    -v2 |x|^2
// harmonic:     m w^2 |x|^2 / 2   (params mass, omega; omega defaults to 1)
// csv:          linear interpolation of "x,value" rows, 1D only
class NamedPotential {
 public:
  static NamedPotential make(PotentialForm form,
                             std::map<std::string, double> params);
  static NamedPotential from_csv(const std::filesystem::path& path);
  static NamedPotential from_points(std::vector<double> x,
                                    std::vector<double> v);

  PotentialForm form() const { return form_; }
  const std::map<std::string, double>& params() const { return params_; }
  double param(const std::string& name) const;
  void set_param(const std::string& name, double value);

  // V at a point of any dimension; csv forms accept 1D points only.
  double operator()(std::span<const double> x) const;
  double operator()(double x) const;

  PotentialFn fn() const;
  // Closed-form integral over [lo, hi] for 1D forms that have one.
  std::optional<BlockIntegral> block_integral() const;

  // Lowest value over a 1D interval, by dense scan.
  double min_on(double lo, double hi, std::size_t n = 4096) const;

 private:
  PotentialForm form_ = PotentialForm::quartic;
  std::map<std::string, double> params_;
  std::vector<double> xs_, vs_;
};

// Required parameter names per form.
std::vector<std::string> required_params(PotentialForm f);

}  // namespace graylap
