#include "graylap/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <toml.hpp>

namespace graylap {
namespace {

void check_keys(const toml::table& t, const std::set<std::string>& known,
                const std::string& where) {
  for (const auto& [k, v] : t) {
    (void)v;
    if (!known.count(std::string(k.str())))
      throw ConfigError("unknown key '" + std::string(k.str()) + "' in " + where);
  }
}

template <class View>
double get_number(const View& n,
                  const std::string& what) {
  if (auto v = n.template value<double>()) return *v;
  throw ConfigError("'" + what + "' must be a number");
}

double number_or(const toml::table& t, const char* key, double fallback,
                 const std::string& where) {
  const auto n = t[key];
  if (!n) return fallback;
  return get_number(n, where + "." + key);
}

std::string string_or(const toml::table& t, const char* key,
                      const std::string& fallback, const std::string& where) {
  const auto n = t[key];
  if (!n) return fallback;
  if (auto v = n.value<std::string>()) return *v;
  throw ConfigError("'" + where + "." + key + "' must be a string");
}

template <class View>
std::vector<double> number_list(const View& n,
                                const std::string& what) {
  std::vector<double> out;
  if (!n) return out;
  const auto* arr = n.as_array();
  if (!arr) throw ConfigError("'" + what + "' must be an array");
  for (const auto& e : *arr) {
    if (auto v = e.template value<double>())
      out.push_back(*v);
    else
      throw ConfigError("'" + what + "' must hold numbers");
  }
  return out;
}

Schedule parse_schedule(const toml::table& t, const std::string& where) {
  const auto n = t["schedule"];
  if (!n) return Schedule::constant();
  std::string kind;
  std::vector<double> window;
  double value = 1.0;
  if (auto s = n.value<std::string>()) {
    kind = *s;
    window = number_list(t["window"], where + ".window");
  } else if (const auto* st = n.as_table()) {
    check_keys(*st, {"kind", "window", "value"}, where + ".schedule");
    kind = string_or(*st, "kind", "", where + ".schedule");
    window = number_list((*st)["window"], where + ".schedule.window");
    value = number_or(*st, "value", 1.0, where + ".schedule");
  } else {
    throw ConfigError("'" + where + ".schedule' must be a string or table");
  }
  if (t["value"]) value = get_number(t["value"], where + ".value");
  const auto k = parse_schedule_kind(kind);
  auto need_window = [&]() {
    if (window.size() != 2)
      throw ConfigError("'" + where + "' schedule '" + kind +
                        "' needs window = [s0, s1]");
    if (!(window[1] > window[0]))
      throw ConfigError("'" + where + "' window needs s1 > s0");
  };
  switch (k) {
    case ScheduleKind::constant: return Schedule::constant(value);
    case ScheduleKind::bump:
      if (window.empty()) return Schedule::bump();
      need_window();
      return Schedule::delayed_bump(window[0], window[1]);
    case ScheduleKind::delayed_bump:
      need_window();
      return Schedule::delayed_bump(window[0], window[1]);
    case ScheduleKind::linear:
      if (window.empty()) return Schedule::linear();
      need_window();
      return Schedule::linear(window[0], window[1]);
  }
  return Schedule::constant();
}

TermKind parse_term_kind(const std::string& s) {
  if (s == "kinetic") return TermKind::kinetic;
  if (s == "transverse") return TermKind::transverse;
  if (s == "penalty") return TermKind::penalty;
  if (s == "potential") return TermKind::potential;
  throw ConfigError("unknown term kind '" + s +
                    "' (expected kinetic, transverse, penalty or potential)");
}

TermConfig parse_term(const toml::table& t, std::size_t index,
                      const std::filesystem::path& base) {
  const std::string where = "terms[" + std::to_string(index) + "]";
  check_keys(t, {"kind", "label", "schedule", "window", "value", "form", "params",
                 "file", "multiplier"},
             where);
  TermConfig c;
  c.kind = parse_term_kind(string_or(t, "kind", "", where));
  c.label = string_or(t, "label", std::string(to_string(c.kind)), where);
  c.schedule = parse_schedule(t, where);
  if (c.kind == TermKind::potential) {
    const auto form = parse_potential_form(string_or(t, "form", "", where));
    if (form == PotentialForm::csv) {
      const auto file = string_or(t, "file", "", where);
      if (file.empty()) throw ConfigError(where + ": csv potential needs 'file'");
      std::filesystem::path p(file);
      c.potential = NamedPotential::from_csv(p.is_absolute() ? p : base / p);
    } else {
      std::map<std::string, double> params;
      if (const auto* pt = t["params"].as_table()) {
        for (const auto& [k, v] : *pt) {
          const auto d = v.value<double>();
          if (!d)
            throw ConfigError(where + ".params." + std::string(k.str()) +
                              " must be a number");
          params[std::string(k.str())] = *d;
        }
      }
      for (const auto& name : required_params(form))
        if (!params.count(name))
          throw ConfigError(
              where + ": potential '" + std::string(to_string(form)) +
              "' is missing parameter '" + name +
              "'; run 'graylap tune <config> --target <E>' to determine it");
      c.potential = NamedPotential::make(form, std::move(params));
    }
  }
  if (c.kind == TermKind::penalty) {
    c.multiplier = number_or(t, "multiplier", 0.0, where);
    if (!(c.multiplier > 0.0))
      throw ConfigError(where + ": penalty needs multiplier > 0");
  }
  return c;
}

}  // namespace

std::string_view to_string(TermKind k) {
  switch (k) {
    case TermKind::kinetic: return "kinetic";
    case TermKind::transverse: return "transverse";
    case TermKind::penalty: return "penalty";
    case TermKind::potential: return "potential";
  }
  return "?";
}

int ScenarioConfig::total_qubits() const {
  return std::accumulate(qubits.begin(), qubits.end(), 0);
}

EncodingTable ScenarioConfig::table(int d) const {
  return make_table(encoding, qubits.at(static_cast<std::size_t>(d)));
}

std::vector<EncodingTable> ScenarioConfig::tables() const {
  std::vector<EncodingTable> out;
  for (int d = 0; d < dimensions(); ++d) out.push_back(table(d));
  return out;
}

Box ScenarioConfig::box() const {
  Box b;
  b.length = box_length;
  switch (origin) {
    case BoxOrigin::symmetric: b.x_min = -0.5 * box_length; break;
    case BoxOrigin::left: b.x_min = 0.0; break;
    case BoxOrigin::radial:
      b.x_min = 0.0;
      b.point = SamplePoint::right_edge;
      break;
  }
  return b;
}

double ScenarioConfig::spacing(int d) const {
  return box_length / static_cast<double>(table(d).positions());
}

double ScenarioConfig::kinetic_scale(int d) const {
  const double a = spacing(d);
  return hbar_c() * hbar_c() / (2.0 * mass * a * a);
}

double ScenarioConfig::uv_cutoff(int d) const { return hbar_c() / spacing(d); }

TermConfig& ScenarioConfig::term(const std::string& label) {
  for (auto& t : terms)
    if (t.label == label) return t;
  throw ConfigError("no term labelled '" + label + "'");
}

const TermConfig& ScenarioConfig::term(const std::string& label) const {
  return const_cast<ScenarioConfig*>(this)->term(label);
}

ScenarioConfig parse_config(const std::string& text,
                            const std::filesystem::path& base_dir) {
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << "TOML parse error at line " << e.source().begin.line << ": "
       << e.description();
    throw ConfigError(os.str());
  }
  check_keys(root,
             {"name", "scenario", "encoding", "qubits", "mass", "units", "box",
              "time", "terms", "potential_grid", "evolve", "output", "tune"},
             "top level");

  ScenarioConfig c;
  c.source_text = text;
  c.name = string_or(root, "name", "scenario", "");
  c.scenario = string_or(root, "scenario", "generic", "");
  if (c.scenario != "generic" && c.scenario != "deuteron" &&
      c.scenario != "quartic2d" && c.scenario != "ho_h2gc")
    throw ConfigError("unknown scenario '" + c.scenario + "'");
  c.encoding = [&] {
    try {
      return parse_encoding_kind(string_or(root, "encoding", "brgc", ""));
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }();
  for (double q : number_list(root["qubits"], "qubits")) {
    if (q != std::floor(q) || q < 1 || q > 30)
      throw ConfigError("qubits entries must be integers in [1, 30]");
    c.qubits.push_back(static_cast<int>(q));
  }
  if (c.qubits.empty()) throw ConfigError("'qubits' is required, e.g. qubits = [7]");
  if (c.total_qubits() > kMaxStateWidth)
    throw ConfigError("total qubits " + std::to_string(c.total_qubits()) +
                      " exceed the state-vector limit");
  c.mass = number_or(root, "mass", 1.0, "");
  if (!(c.mass > 0.0)) throw ConfigError("'mass' must be positive");
  const auto units = string_or(root, "units", "natural", "");
  if (units == "nuclear")
    c.units = Units::nuclear;
  else if (units == "natural")
    c.units = Units::natural;
  else
    throw ConfigError("units must be 'nuclear' (MeV, fm) or 'natural'");

  if (const auto* box = root["box"].as_table()) {
    check_keys(*box, {"length", "origin"}, "[box]");
    c.box_length = number_or(*box, "length", 1.0, "box");
    const auto o = string_or(*box, "origin", "left", "box");
    if (o == "symmetric")
      c.origin = BoxOrigin::symmetric;
    else if (o == "left")
      c.origin = BoxOrigin::left;
    else if (o == "radial")
      c.origin = BoxOrigin::radial;
    else
      throw ConfigError("box.origin must be symmetric, left or radial");
  }
  if (!(c.box_length > 0.0)) throw ConfigError("box.length must be positive");

  if (const auto* tm = root["time"].as_table()) {
    check_keys(*tm, {"T", "inverse", "penalty_stage_end", "s_end"}, "[time]");
    int given = 0;
    if ((*tm)["T"]) {
      c.time_scale = get_number((*tm)["T"], "time.T");
      ++given;
    }
    if ((*tm)["inverse"]) {
      const double e = get_number((*tm)["inverse"], "time.inverse");
      if (!(e > 0.0)) throw ConfigError("time.inverse must be positive");
      c.time_scale = 1.0 / e;
      ++given;
    }
    if ((*tm)["penalty_stage_end"]) {
      c.penalty_stage_end = get_number((*tm)["penalty_stage_end"], "time.penalty_stage_end");
      if (!(*c.penalty_stage_end > 0.0))
        throw ConfigError("time.penalty_stage_end must be positive");
      ++given;
    }
    if (given != 1)
      throw ConfigError("[time] needs exactly one of T, inverse, penalty_stage_end");
    c.s_end = number_or(*tm, "s_end", 1.0, "time");
  }
  if (!(c.time_scale > 0.0)) throw ConfigError("time.T must be positive");
  if (!(c.s_end > 0.0)) throw ConfigError("time.s_end must be positive");

  if (const auto* arr = root["terms"].as_array()) {
    std::size_t i = 0;
    for (const auto& n : *arr) {
      const auto* t = n.as_table();
      if (!t) throw ConfigError("[[terms]] entries must be tables");
      c.terms.push_back(parse_term(*t, i++, base_dir));
    }
  }
  if (c.terms.empty()) throw ConfigError("at least one [[terms]] entry is required");
  {
    std::set<std::string> labels;
    for (const auto& t : c.terms)
      if (!labels.insert(t.label).second)
        throw ConfigError("duplicate term label '" + t.label + "'");
  }
  for (const auto& t : c.terms) {
    if (t.kind == TermKind::penalty && c.encoding != EncodingKind::h2gc)
      throw ConfigError("penalty terms need encoding = \"h2gc\"");
    if (t.potential && t.potential->form() == PotentialForm::csv && c.dimensions() != 1)
      throw ConfigError("csv potentials are 1D");
  }
  if (c.penalty_stage_end &&
      std::none_of(c.terms.begin(), c.terms.end(),
                   [](const TermConfig& t) { return t.kind == TermKind::penalty; }))
    throw ConfigError("time.penalty_stage_end needs a penalty term");

  if (const auto* g = root["potential_grid"].as_table()) {
    check_keys(*g, {"method", "width", "fill", "chop"}, "[potential_grid]");
    try {
      c.coarse_method = parse_coarse_grain_method(string_or(*g, "method", "averaging", "potential_grid"));
      if ((*g)["fill"])
        c.fill = parse_dont_care_fill(string_or(*g, "fill", "zero", "potential_grid"));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
    c.coarse_width = static_cast<int>(number_or(*g, "width", 0, "potential_grid"));
    c.chop = number_or(*g, "chop", 0.0, "potential_grid");
    if (c.coarse_width < 0) throw ConfigError("potential_grid.width must be >= 0");
  }

  if (const auto* ev = root["evolve"].as_table()) {
    check_keys(*ev,
               {"propagator", "rtol", "atol", "trace_points", "spectrum_points",
                "spectrum_k", "snapshots", "dense_exp_width"},
               "[evolve]");
    c.propagator = [&] {
      try {
        return parse_propagator(string_or(*ev, "propagator", "rk45", "evolve"));
      } catch (const std::exception& e) {
        throw ConfigError(e.what());
      }
    }();
    c.rtol = number_or(*ev, "rtol", c.rtol, "evolve");
    c.atol = number_or(*ev, "atol", c.atol, "evolve");
    if (!(c.rtol > 0.0) || !(c.atol > 0.0)) throw ConfigError("tolerances must be positive");
    c.trace_points = static_cast<std::size_t>(number_or(*ev, "trace_points", 201, "evolve"));
    c.spectrum_points = static_cast<std::size_t>(number_or(*ev, "spectrum_points", 64, "evolve"));
    c.spectrum_k = static_cast<std::size_t>(number_or(*ev, "spectrum_k", 4, "evolve"));
    c.snapshots = number_list((*ev)["snapshots"], "evolve.snapshots");
    c.magnus_width_limit = static_cast<int>(number_or(*ev, "dense_exp_width", 8, "evolve"));
  }

  if (const auto* out = root["output"].as_table()) {
    check_keys(*out, {"dir"}, "[output]");
    std::filesystem::path d(string_or(*out, "dir", "", "output"));
    if (!d.empty()) c.output_dir = d.is_absolute() ? d : base_dir / d;
  }

  if (const auto* tu = root["tune"].as_table()) {
    check_keys(*tu, {"term", "parameter", "bracket", "target", "tolerance"}, "[tune]");
    TuneConfig t;
    t.term = string_or(*tu, "term", "potential", "tune");
    t.parameter = string_or(*tu, "parameter", "e_well", "tune");
    const auto br = number_list((*tu)["bracket"], "tune.bracket");
    if (br.size() != 2 || !(br[1] > br[0]))
      throw ConfigError("tune.bracket must be [lo, hi] with hi > lo");
    t.lo = br[0];
    t.hi = br[1];
    if ((*tu)["target"]) t.target = get_number((*tu)["target"], "tune.target");
    t.tolerance = number_or(*tu, "tolerance", 0.01, "tune");
    c.tune = t;
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  auto c = parse_config(ss.str(), path.parent_path());
  c.source = path;
  if (c.output_dir.empty())
    c.output_dir = std::filesystem::path("out") / c.name;
  return c;
}

}  // namespace graylap
