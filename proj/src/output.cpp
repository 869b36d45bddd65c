#include "graylap/output.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace graylap {
namespace {

void put_le(std::ostream& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

double get_le(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw ContractError("truncated checkpoint");
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= std::uint64_t{b[i]} << (8 * i);
  return std::bit_cast<double>(bits);
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_checkpoint(const std::filesystem::path& path, const StateVector& psi) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.put(static_cast<char>(psi.width()));
  for (std::size_t i = 0; i < psi.dim(); ++i) {
    put_le(out, psi[i].real());
    put_le(out, psi[i].imag());
  }
}

StateVector read_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("cannot open checkpoint " + path.string());
  const int width = in.get();
  if (width < 1 || width > kMaxStateWidth) throw ContractError("bad checkpoint width");
  std::vector<cplx> amps(std::size_t{1} << width);
  for (auto& a : amps) {
    const double re = get_le(in);
    a = {re, get_le(in)};
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw ContractError("checkpoint has trailing bytes");
  return StateVector::from_amplitudes(std::move(amps), false);
}

std::string density_grid_csv(std::span<const double> p, int n0, int n1) {
  std::ostringstream os;
  os.precision(12);
  os << "ix,iy,p\n";
  for (int iy = 0; iy < n1; ++iy)
    for (int ix = 0; ix < n0; ++ix)
      os << ix << "," << iy << "," << p[static_cast<std::size_t>(iy) * n0 + ix] << "\n";
  return os.str();
}

std::string run_metadata_json(const ScenarioResult& r) {
  using nlohmann::json;
  const auto& c = r.config;
  const auto& tr = r.run.trace;
  json j;
  j["tool"] = "graylap";
  j["version"] = kToolVersion;
  j["scenario"] = c.scenario;
  j["name"] = c.name;
  j["config"] = c.source.string();
  j["simd"] = kernels::isa_name(kernels::active().isa);
  j["qubits"] = c.qubits;
  j["encoding"] = std::string(to_string(c.encoding));
  j["time_scale"] = r.built.time_scale;
  j["s_end"] = c.s_end;
  j["penalty"] = r.built.penalty;
  j["propagator"] = to_string(c.propagator);
  j["tolerances"] = {{"rtol", c.rtol}, {"atol", c.atol}};
  j["eigensolver_seed"] = EigenOptions{}.seed;
  j["steps"] = {{"accepted", tr.accepted}, {"rejected", tr.rejected}};
  j["norm_drift"] = {{"total", tr.total_norm_drift},
                     {"max_step", tr.max_step_drift},
                     {"per_time", tr.drift_per_time}};
  j["final_spectrum"] = r.final_spectrum;
  const double g = tr.min_gap();
  j["min_gap"] = std::isfinite(g) ? json(g) : json(nullptr);
  const double ov = tr.final_overlap();
  j["final_overlap"] = std::isfinite(ov) ? json(ov) : json(nullptr);
  json snaps = json::array();
  for (const auto& [s, e] : r.snapshot_ground) snaps.push_back({{"s", s}, {"ground_energy", e}});
  j["snapshot_ground"] = snaps;
  j["notes"] = r.notes;
  return j.dump(2) + "\n";
}

std::filesystem::path write_run_outputs(const ScenarioResult& r) {
  const auto dir = r.config.output_dir;
  std::filesystem::create_directories(dir);
  write_text(dir / "trace.csv", r.run.trace.csv());
  write_checkpoint(dir / "final.ckpt", r.run.final_state);
  write_text(dir / "metadata.json", run_metadata_json(r));
  write_text(dir / "config.toml", r.config.source_text);
  for (const auto& [s, psi] : r.run.trace.snapshots) {
    char name[64];
    std::snprintf(name, sizeof name, "snapshot_s%.3f.ckpt", s);
    write_checkpoint(dir / name, psi);
  }
  return dir;
}

}  // namespace graylap
