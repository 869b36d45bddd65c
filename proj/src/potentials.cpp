#include "graylap/potentials.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <fstream>
#include <sstream>

namespace graylap {
namespace {

double sq_norm(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

// int_0^x exp(-(r/R)^4) dr = (R/4) Gamma(1/4) P(1/4, (x/R)^4), odd in x.
double quartic_gaussian_primitive(double x, double r) {
  const double u = std::pow(std::abs(x) / r, 4.0);
  const double v = 0.25 * r * std::tgamma(0.25) * boost::math::gamma_p(0.25, u);
  return x < 0.0 ? -v : v;
}

}  // namespace

std::string_view to_string(PotentialForm f) {
  switch (f) {
    case PotentialForm::nn_core_well: return "nn_core_well";
    case PotentialForm::quartic: return "quartic";
    case PotentialForm::quadratic: return "quadratic";
    case PotentialForm::harmonic: return "harmonic";
    case PotentialForm::csv: return "csv";
  }
  return "?";
}

PotentialForm parse_potential_form(std::string_view s) {
  if (s == "nn_core_well") return PotentialForm::nn_core_well;
  if (s == "quartic") return PotentialForm::quartic;
  if (s == "quadratic") return PotentialForm::quadratic;
  if (s == "harmonic") return PotentialForm::harmonic;
  if (s == "csv") return PotentialForm::csv;
  throw ConfigError("unknown potential form '" + std::string(s) +
                    "' (expected nn_core_well, quartic, quadratic, harmonic or csv)");
}

std::vector<std::string> required_params(PotentialForm f) {
  switch (f) {
    case PotentialForm::nn_core_well: return {"e_core", "r_core", "e_well", "r_well"};
    case PotentialForm::quartic: return {"v4"};
    case PotentialForm::quadratic: return {"v2"};
    case PotentialForm::harmonic: return {"mass"};
    case PotentialForm::csv: return {};
  }
  return {};
}

NamedPotential NamedPotential::make(PotentialForm form,
                                    std::map<std::string, double> params) {
  if (form == PotentialForm::csv)
    throw ContractError("csv potentials come from from_csv");
  for (const auto& name : required_params(form))
    if (!params.count(name))
      throw ConfigError("potential '" + std::string(to_string(form)) +
                        "' is missing parameter '" + name + "'");
  if (form == PotentialForm::harmonic && !params.count("omega")) params["omega"] = 1.0;
  for (const auto& [k, v] : params)
    if (!std::isfinite(v))
      throw ConfigError("potential parameter '" + k + "' is not finite");
  if (form == PotentialForm::nn_core_well &&
      (!(params["r_core"] > 0.0) || !(params["r_well"] > 0.0)))
    throw ConfigError("nn_core_well radii must be positive");
  NamedPotential p;
  p.form_ = form;
  p.params_ = std::move(params);
  return p;
}

NamedPotential NamedPotential::from_points(std::vector<double> x,
                                           std::vector<double> v) {
  if (x.size() != v.size() || x.size() < 2)
    throw ConfigError("csv potential needs at least two x,value rows");
  std::vector<std::size_t> idx(x.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return x[a] < x[b]; });
  NamedPotential p;
  p.form_ = PotentialForm::csv;
  for (auto i : idx) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i]))
      throw ConfigError("csv potential has a non-finite entry");
    if (!p.xs_.empty() && x[i] == p.xs_.back())
      throw ConfigError("csv potential repeats x = " + std::to_string(x[i]));
    p.xs_.push_back(x[i]);
    p.vs_.push_back(v[i]);
  }
  return p;
}

NamedPotential NamedPotential::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential csv " + path.string());
  std::vector<double> xs, vs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find_first_of("0123456789") != 0 &&
        line.find("x") != std::string::npos)
      continue;  // header
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double x, v;
    if (!(ls >> x >> v))
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected 'x,value'");
    xs.push_back(x);
    vs.push_back(v);
  }
  return from_points(std::move(xs), std::move(vs));
}

double NamedPotential::param(const std::string& name) const {
  auto it = params_.find(name);
  if (it == params_.end())
    throw ConfigError("potential has no parameter '" + name + "'");
  return it->second;
}

void NamedPotential::set_param(const std::string& name, double value) {
  if (!params_.count(name))
    throw ConfigError("potential has no parameter '" + name + "'");
  params_[name] = value;
}

double NamedPotential::operator()(std::span<const double> x) const {
  switch (form_) {
    case PotentialForm::nn_core_well: {
      const double r = std::sqrt(sq_norm(x));
      const double rc = r / params_.at("r_core"), rw = r / params_.at("r_well");
      return params_.at("e_core") * std::exp(-rc * rc * rc * rc) -
             params_.at("e_well") * std::exp(-rw * rw * rw * rw);
    }
    case PotentialForm::quartic: {
      const double r2 = sq_norm(x);
      return params_.at("v4") * r2 * r2;
    }
    case PotentialForm::quadratic: return -params_.at("v2") * sq_norm(x);
    case PotentialForm::harmonic: {
      const double w = params_.at("omega");
      return 0.5 * params_.at("mass") * w * w * sq_norm(x);
    }
    case PotentialForm::csv: {
      if (x.size() != 1) throw ContractError("csv potentials are 1D");
      const double v = x[0];
      if (v <= xs_.front()) return vs_.front();
      if (v >= xs_.back()) return vs_.back();
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), v);
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
      const double f = (v - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return vs_[i - 1] + f * (vs_[i] - vs_[i - 1]);
    }
  }
  return 0.0;
}

double NamedPotential::operator()(double x) const {
  return (*this)(std::span<const double>(&x, 1));
}

PotentialFn NamedPotential::fn() const {
  return [p = *this](double x) { return p(x); };
}

std::optional<BlockIntegral> NamedPotential::block_integral() const {
  switch (form_) {
    case PotentialForm::nn_core_well: {
      const double ec = params_.at("e_core"), rc = params_.at("r_core");
      const double ew = params_.at("e_well"), rw = params_.at("r_well");
      return [=](double lo, double hi) {
        return ec * (quartic_gaussian_primitive(hi, rc) -
                     quartic_gaussian_primitive(lo, rc)) -
               ew * (quartic_gaussian_primitive(hi, rw) -
                     quartic_gaussian_primitive(lo, rw));
      };
    }
    case PotentialForm::quartic: {
      const double v4 = params_.at("v4");
      return [=](double lo, double hi) {
        return v4 * (std::pow(hi, 5) - std::pow(lo, 5)) / 5.0;
      };
    }
    case PotentialForm::quadratic: {
      const double v2 = params_.at("v2");
      return [=](double lo, double hi) {
        return -v2 * (hi * hi * hi - lo * lo * lo) / 3.0;
      };
    }
    case PotentialForm::harmonic: {
      const double k = 0.5 * params_.at("mass") * params_.at("omega") * params_.at("omega");
      return [=](double lo, double hi) {
        return k * (hi * hi * hi - lo * lo * lo) / 3.0;
      };
    }
    case PotentialForm::csv: return std::nullopt;
  }
  return std::nullopt;
}

double NamedPotential::min_on(double lo, double hi, std::size_t n) const {
  double m = (*this)(lo);
  for (std::size_t i = 1; i <= n; ++i)
    m = std::min(m, (*this)(lo + (hi - lo) * static_cast<double>(i) / n));
  return m;
}

}  // namespace graylap
