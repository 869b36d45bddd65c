#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "graylap/output.hpp"
#include "graylap/scenarios.hpp"
#include "oracle.hpp"

using namespace graylap;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigs = GRAYLAP_SOURCE_DIR "/configs";

std::string harmonic_toml(const std::string& extra_params = "mass = 2.25, omega = 1.0") {
  return R"(
name = "ho_brgc"
encoding = "brgc"
qubits = [8]
mass = 1.0
[box]
length = 20.0
origin = "symmetric"
[time]
T = 30.0
[[terms]]
kind = "kinetic"
[[terms]]
kind = "potential"
label = "trap"
form = "harmonic"
schedule = "bump"
params = { )" + extra_params + R"( }
[evolve]
spectrum_k = 3
trace_points = 21
spectrum_points = 5
[tune]
term = "trap"
parameter = "mass"
bracket = [0.5, 10.0]
)";
}

double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  const double h = (b - a) / n;
  double acc = f(a) + f(b);
  for (int i = 1; i < n; ++i) acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("bundled configs load") {
  for (const char* name : {"deuteron.toml", "deuteron_long.toml", "quartic2d.toml",
                           "quartic2d_smoke.toml", "ho_h2gc.toml"}) {
    CAPTURE(name);
    const auto cfg = load_config(kConfigs / name);
    CHECK(!cfg.terms.empty());
    CHECK(cfg.time_scale > 0.0);
  }
  const auto d = load_config(kConfigs / "deuteron.toml");
  CHECK(d.time_scale == doctest::Approx(10.0));
  CHECK(d.spacing(0) == doctest::Approx(20.0 / 128));
  CHECK(d.term("potential").potential->param("e_well") == doctest::Approx(84.43202972));
  const auto q = load_config(kConfigs / "quartic2d.toml");
  CHECK(q.total_qubits() == 12);
  CHECK(q.s_end == 1.5);
  const auto h = load_config(kConfigs / "ho_h2gc.toml");
  // the first stage lasts Q in natural units
  const auto built = build_scenario(h);
  CHECK(built.penalty == doctest::Approx(200.0 * h.uv_cutoff(0)));
  CHECK(built.time_scale * 0.9 == doctest::Approx(built.penalty));
}

TEST_CASE("config errors are explicit") {
  CHECK_THROWS_AS(load_config(GRAYLAP_SOURCE_DIR "/tests/data/bad.toml"), ConfigError);
  auto text = harmonic_toml();
  CHECK_NOTHROW(parse_config(text));
  auto broken = text;
  broken.replace(broken.find("T = 30.0"), 8, "T = 30.0\ninverse = 1.0");
  CHECK_THROWS_AS(parse_config(broken), ConfigError);
  broken = text;
  broken.replace(broken.find("mass = 1.0"), 10, "mas = 1.0");
  CHECK_THROWS_AS(parse_config(broken), ConfigError);
  broken = text;
  broken.replace(broken.find("kinetic"), 7, "kinematic");
  CHECK_THROWS_AS(parse_config(broken), ConfigError);
  try {
    parse_config(harmonic_toml("omega = 1.0"));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("graylap tune") != std::string::npos);
  }
}

TEST_CASE("named potentials") {
  const auto nn = NamedPotential::make(
      PotentialForm::nn_core_well,
      {{"e_core", 2000.0}, {"r_core", 0.3}, {"e_well", 84.0}, {"r_well", 1.5}});
  CHECK(nn(0.0) == doctest::Approx(2000.0 - 84.0));
  CHECK(nn(10.0) == doctest::Approx(0.0).epsilon(1e-12));
  const auto quartic = NamedPotential::make(PotentialForm::quartic, {{"v4", 10.0}});
  const double p[2] = {1.0, 1.0};
  CHECK(quartic(p) == doctest::Approx(40.0));
  const auto quad = NamedPotential::make(PotentialForm::quadratic, {{"v2", 100.0}});
  CHECK(quad(p) == doctest::Approx(-200.0));
  const auto ho = NamedPotential::make(PotentialForm::harmonic, {{"mass", 10.0}});
  CHECK(ho(0.5) == doctest::Approx(1.25));
  CHECK_THROWS(NamedPotential::make(PotentialForm::quartic, {}));
  CHECK(nn.min_on(0.0, 5.0) < 0.0);
}

TEST_CASE("block integrals match quadrature") {
  const auto nn = NamedPotential::make(
      PotentialForm::nn_core_well,
      {{"e_core", 2000.0}, {"r_core", 0.3}, {"e_well", 84.0}, {"r_well", 1.5}});
  const auto quartic = NamedPotential::make(PotentialForm::quartic, {{"v4", 10.0}});
  const auto ho = NamedPotential::make(PotentialForm::harmonic, {{"mass", 3.0}, {"omega", 2.0}});
  for (const auto* v : {&nn, &quartic, &ho}) {
    const auto bi = v->block_integral();
    REQUIRE(bi);
    for (auto [lo, hi] : {std::pair{0.0, 0.3}, {0.2, 1.7}, {-1.0, 2.5}}) {
      if (v == &nn && lo < 0.0) continue;
      const double want = simpson([&](double x) { return (*v)(x); }, lo, hi);
      CHECK((*bi)(lo, hi) == doctest::Approx(want).epsilon(1e-9));
    }
  }
}

TEST_CASE("csv potentials interpolate linearly") {
  const auto path = fs::temp_directory_path() / "graylap_test_potential.csv";
  {
    std::ofstream f(path);
    f << "x,value\n0,0\n1,2\n3,0\n";
  }
  const auto v = NamedPotential::from_csv(path);
  CHECK(v(0.5) == doctest::Approx(1.0));
  CHECK(v(2.0) == doctest::Approx(1.0));
  CHECK(v.form() == PotentialForm::csv);
  fs::remove(path);
  CHECK_THROWS(NamedPotential::from_points({0.0, 0.0}, {1.0, 2.0}));
}

TEST_CASE("harmonic tune recovers the analytic mass") {
  auto cfg = parse_config(harmonic_toml());
  const double omega = 1.0, target = 0.75;
  const auto r = tune_potential(cfg, target, *cfg.tune);
  REQUIRE(r.converged);
  // E = omega sqrt(m_p / m) / 2
  const double analytic = cfg.mass * std::pow(2.0 * target / omega, 2);
  CHECK(r.value == doctest::Approx(analytic).epsilon(0.01));
  CHECK(std::abs(r.energy - target) <= cfg.tune->tolerance);
}

TEST_CASE("infeasible tune targets report a scan") {
  auto cfg = parse_config(harmonic_toml());
  const auto r = tune_potential(cfg, -5.0, *cfg.tune);
  CHECK(!r.converged);
  CHECK(r.scan.size() >= 2);
  CHECK(!r.message.empty());
}

TEST_CASE("deuteron ground energy") {
  const auto cfg = load_config(kConfigs / "deuteron.toml");
  const auto ev = scenario_spectrum(cfg, 1.0, 2);
  CHECK(ev[0] == doctest::Approx(-2.2).epsilon(0.005));
  const auto free = scenario_spectrum(cfg, 0.0, 3);
  CHECK(std::abs(free[0]) < 1e-9);
  CHECK(free[1] == doctest::Approx(ir_cutoff(cfg.mass, cfg.box_length, cfg.hbar_c())).epsilon(1e-3));
  CHECK(free[1] == doctest::Approx(free[2]));
}

TEST_CASE("checkpoints round trip") {
  oracle::Rng rng(3);
  const auto psi = rng.state(5);
  const auto path = fs::temp_directory_path() / "graylap_test.ckpt";
  write_checkpoint(path, psi);
  CHECK(fs::file_size(path) == 1 + 32 * 16);
  const auto back = read_checkpoint(path);
  CHECK(back.width() == 5);
  CHECK(back.amplitudes() == psi.amplitudes());
  fs::remove(path);
}

TEST_CASE("a finished first stage continues into the second") {
  auto cfg = parse_config(harmonic_toml());
  cfg.qubits = {5};
  const auto built = build_scenario(cfg);
  EvolveControls whole;
  whole.rtol = 1e-11;
  whole.trace_points = 2;
  const auto a = evolve(built.schedule, built.initial, built.time_scale, whole);
  auto first = whole, second = whole;
  first.s_end = 0.5;
  second.s_begin = 0.5;
  const auto mid = evolve(built.schedule, built.initial, built.time_scale, first);
  const auto b = evolve(built.schedule, mid.final_state, built.time_scale, second);
  CHECK(overlap(a.final_state, b.final_state) > 1.0 - 1e-9);
}

TEST_CASE("short run writes its artifacts") {
  auto cfg = parse_config(harmonic_toml());
  cfg.qubits = {5};
  cfg.box_length = 8.0;  // IR gap 0.3
  cfg.time_scale = 200.0;
  cfg.output_dir = fs::temp_directory_path() / "graylap_test_run";
  fs::remove_all(cfg.output_dir);
  const auto r = run_scenario(cfg);
  CHECK(r.run.trace.final_overlap() > 0.99);
  for (const char* f : {"trace.csv", "final.ckpt", "metadata.json", "config.toml"})
    CHECK(fs::exists(cfg.output_dir / f));
  const auto back = read_checkpoint(cfg.output_dir / "final.ckpt");
  CHECK(back.amplitudes() == r.run.final_state.amplitudes());
  fs::remove_all(cfg.output_dir);
}

TEST_CASE("ring report finds off-centre shells") {
  Box box{-2.0, 4.0, SamplePoint::left_edge};
  const int n = 16;
  std::vector<double> ring(n * n), blob(n * n);
  const double a = 4.0 / n;
  for (int iy = 0; iy < n; ++iy)
    for (int ix = 0; ix < n; ++ix) {
      const double x = -2.0 + ix * a, y = -2.0 + iy * a;
      const double r = std::hypot(x, y);
      ring[iy * n + ix] = std::exp(-std::pow(r - 1.2, 2) / 0.05);
      blob[iy * n + ix] = std::exp(-r * r);
    }
  const auto rr = ring_report(ring, n, n, box);
  CHECK(rr.ring());
  CHECK(rr.shell_radius == doctest::Approx(1.2).epsilon(0.2));
  CHECK(!ring_report(blob, n, n, box).ring());
}

TEST_CASE("density grid csv") {
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  const auto csv = density_grid_csv(p, 2, 2);
  CHECK(csv.rfind("ix,iy,p\n", 0) == 0);
  CHECK(csv.find("1,0,0.2") != std::string::npos);
}
