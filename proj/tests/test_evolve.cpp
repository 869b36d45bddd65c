#include <doctest.h>

#include <cmath>
#include <numbers>

#include "graylap/evolve.hpp"
#include "oracle.hpp"

using namespace graylap;

namespace {

HamiltonianSchedule constant_schedule(const OperatorSum& h) {
  HamiltonianSchedule hs(h.width());
  hs.add("h", Schedule::constant(), h);
  return hs;
}

// -X at s = 0 to -Z at s = 1; gap never below sqrt(2).
HamiltonianSchedule two_level() {
  HamiltonianSchedule hs(1);
  hs.add("x", Schedule::constant(), PauliString::parse("X", -1.0));
  hs.add("sweep", Schedule::bump(),
         OperatorSum(PauliString::parse("X")) - OperatorSum(PauliString::parse("Z")));
  return hs;
}

double leakage(double total_time, Propagator p) {
  EvolveControls c;
  c.method = p;
  c.rtol = 1e-11;
  c.atol = 1e-14;
  const auto psi0 = StateVector::uniform(1);  // ground state of -X
  const auto r = evolve(two_level(), psi0, total_time, c);
  return 1.0 - overlap(r.final_state, StateVector::basis(1, 0));
}

double fidelity(const StateVector& a, const StateVector& b) { return overlap(a, b); }

}  // namespace

TEST_CASE("sigma_z eigenstates are stationary") {
  const auto hs = constant_schedule(PauliString::parse("Z", 0.7));
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    EvolveControls c;
    c.method = p;
    const auto r = evolve(hs, StateVector::basis(1, 1), 3.0, c);
    CHECK(std::norm(r.final_state[1]) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(r.final_state[0]) < 1e-12);
    // phase e^{+0.7 i t} on |1>
    CHECK(std::arg(r.final_state[1]) == doctest::Approx(std::remainder(2.1, 2 * std::numbers::pi)).epsilon(1e-8));
  }
}

TEST_CASE("Rabi flop under sigma_x") {
  const auto hs = constant_schedule(PauliString::parse("X"));
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    EvolveControls c;
    c.method = p;
    c.rtol = 1e-11;
    const auto r = evolve(hs, StateVector::basis(1, 0), std::numbers::pi / 2, c);
    CHECK(std::abs(r.final_state[1] - cplx(0, -1)) < 1e-8);
    const auto q = evolve(hs, StateVector::basis(1, 0), std::numbers::pi / 4, c);
    CHECK(std::norm(q.final_state[1]) == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("energy is conserved under a constant Hamiltonian") {
  oracle::Rng rng(5);
  const auto h = rng.operator_sum(5, 30, true);
  const auto psi = rng.state(5);
  const double e0 = energy(psi, h);
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    EvolveControls c;
    c.method = p;
    const auto r = evolve(constant_schedule(h), psi, 10.0, c);
    CHECK(std::abs(energy(r.final_state, h) - e0) <= 1e-8 * std::max(1.0, std::abs(e0)));
  }
}

TEST_CASE("unitarity drift per unit time") {
  oracle::Rng rng(6);
  HamiltonianSchedule hs(4);
  hs.add("a", Schedule::constant(), rng.operator_sum(4, 12, true));
  hs.add("b", Schedule::bump(), rng.operator_sum(4, 12, true));
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    EvolveControls c;
    c.method = p;
    const auto r = evolve(hs, rng.state(4), 50.0, c);
    CHECK(r.trace.drift_per_time < 1e-9);
    CHECK(std::abs(r.final_state.norm() - 1.0) < 1e-12);
    CHECK(r.trace.warnings.empty());
  }
}

TEST_CASE("two-level leakage falls as T grows") {
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    double prev = 1.0;
    for (double t : {5.0, 10.0, 20.0, 50.0}) {
      const double l = leakage(t, p);
      MESSAGE("T=" << t << " leakage " << l);
      CHECK(l < prev);
      prev = l;
    }
    CHECK(prev < 1e-4);
  }
}

TEST_CASE("magnus and rk45 agree") {
  oracle::Rng rng(9);
  HamiltonianSchedule hs(4);
  hs.add("a", Schedule::constant(), rng.operator_sum(4, 10, true));
  hs.add("b", Schedule::bump(), rng.operator_sum(4, 10, true));
  hs.add("c", Schedule::delayed_bump(0.3, 0.8), rng.operator_sum(4, 6, true));
  const auto psi0 = rng.state(4);
  EvolveControls c;
  c.rtol = 1e-11;
  const auto rk = evolve(hs, psi0, 8.0, c);
  c.method = Propagator::magnus4;
  const auto mg = evolve(hs, psi0, 8.0, c);
  CHECK(fidelity(rk.final_state, mg.final_state) > 1.0 - 1e-9);
  c.magnus_width_limit = 2;  // Krylov exponentials
  const auto kr = evolve(hs, psi0, 8.0, c);
  CHECK(fidelity(rk.final_state, kr.final_state) > 1.0 - 1e-9);
}

TEST_CASE("evolution matches the dense exponential") {
  oracle::Rng rng(13);
  const auto h = rng.operator_sum(3, 8, true);
  const auto psi = rng.state(3);
  const Eigen::MatrixXcd m = oracle::dense(h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
  const double t = 2.5;
  const Eigen::VectorXcd phase = (es.eigenvalues().cast<cplx>() * cplx(0, -t)).array().exp();
  const Eigen::VectorXcd want =
      es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint() * oracle::as_vector(psi);
  for (auto p : {Propagator::rk45, Propagator::magnus4}) {
    EvolveControls c;
    c.method = p;
    c.rtol = 1e-11;
    const auto r = evolve(constant_schedule(h), psi, t, c);
    CHECK((oracle::as_vector(r.final_state) - want).norm() < 1e-8);
  }
}

TEST_CASE("IR cutoff values") {
  CHECK(ir_cutoff(469.14, 20.0, kHbarC) == doctest::Approx(4.0958).epsilon(1e-4));
  CHECK(ir_cutoff(1000.0, 10.0, kHbarC) == doctest::Approx(7.687).epsilon(1e-3));
  CHECK(ir_cutoff(10.0, 2.0) == doctest::Approx(std::pow(std::numbers::pi, 2) / 20.0));
  CHECK(ir_cutoff(469.14, 40.0, kHbarC) == doctest::Approx(ir_cutoff(469.14, 20.0, kHbarC) / 4));
  CHECK_THROWS_AS(ir_cutoff(0.0, 1.0), ContractError);
}

TEST_CASE("overlap and energy") {
  const auto plus = StateVector::uniform(1);
  CHECK(overlap(plus, StateVector::basis(1, 0)) == doctest::Approx(0.5));
  CHECK(energy(plus, PauliString::parse("X")) == doctest::Approx(1.0));
  CHECK(energy(plus, PauliString::parse("Z")) == doctest::Approx(0.0));
  CHECK_THROWS_AS(overlap(plus, StateVector::uniform(2)), ContractError);
}

TEST_CASE("Lanczos spectra match dense diagonalization") {
  oracle::Rng rng(17);
  HamiltonianSchedule hs(8);
  hs.add("a", Schedule::constant(), rng.operator_sum(8, 40, true));
  hs.add("b", Schedule::bump(), rng.operator_sum(8, 40, true));
  EigenOptions lz;
  lz.dense_width_limit = 4;
  for (double s : {0.0, 0.4, 1.0}) {
    const auto got = instantaneous_spectrum(hs, s, 5, lz);
    const auto want = dense_eigenpairs(to_dense(hs.at(s)), 5, false);
    for (int i = 0; i < 5; ++i) CHECK(got[i] == doctest::Approx(want.values[i]).epsilon(1e-9));
  }
}

TEST_CASE("degenerate levels are all found") {
  // sum of X on 6 qubits: -6 once, then -4 six times
  EigenOptions lz;
  lz.dense_width_limit = 2;
  const auto ep = lowest_eigenpairs(-1.0 * transverse_field(6), 7, true, lz);
  REQUIRE(ep.converged);
  CHECK(ep.values[0] == doctest::Approx(-6.0));
  for (int i = 1; i < 7; ++i) CHECK(ep.values[i] == doctest::Approx(-4.0));
  CHECK((ep.vectors.adjoint() * ep.vectors - Eigen::MatrixXcd::Identity(7, 7)).norm() < 1e-8);
}

TEST_CASE("trace sampling, spectra and snapshots") {
  const auto hs = two_level();
  EvolveControls c;
  c.trace_points = 11;
  c.spectrum_points = 5;
  c.spectrum_k = 2;
  c.snapshot_s = {0.5};
  c.target = StateVector::basis(1, 0);
  const auto r = evolve(hs, StateVector::uniform(1), 5.0, c);
  CHECK(r.trace.samples.front().s == 0.0);
  CHECK(r.trace.samples.back().s == doctest::Approx(1.0));
  int with_spectrum = 0;
  for (const auto& smp : r.trace.samples)
    if (!smp.eigenvalues.empty()) {
      ++with_spectrum;
      CHECK(smp.gap() > 1.4);
    }
  CHECK(with_spectrum == 5);
  CHECK(r.trace.min_gap() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  REQUIRE(r.trace.snapshots.size() == 1);
  CHECK(r.trace.snapshots[0].first == doctest::Approx(0.5));
  CHECK(r.trace.final_overlap() == doctest::Approx(overlap(r.final_state, *c.target)));
  const auto csv = r.trace.csv();
  CHECK(csv.rfind("s,t,energy,overlap,norm_drift,gap,ev_0,ev_1\n", 0) == 0);
  CHECK(std::isnan(TraceSample{}.gap()));
}

TEST_CASE("partial schedule ranges") {
  const auto hs = two_level();
  EvolveControls whole;
  whole.rtol = 1e-11;
  const auto a = evolve(hs, StateVector::uniform(1), 6.0, whole);
  EvolveControls first = whole, second = whole;
  first.s_end = 0.5;
  second.s_begin = 0.5;
  const auto mid = evolve(hs, StateVector::uniform(1), 6.0, first);
  const auto b = evolve(hs, mid.final_state, 6.0, second);
  CHECK(fidelity(a.final_state, b.final_state) > 1.0 - 1e-9);
}

TEST_CASE("step size underflow names the dominant term") {
  HamiltonianSchedule hs(2);
  hs.add("soft", Schedule::constant(), PauliString::parse("XI"));
  hs.add("stiff", Schedule::constant(), PauliString::parse("ZX", 1e9));
  EvolveControls c;
  c.min_step = 1e-3;
  try {
    evolve(hs, StateVector::uniform(2), 1.0, c);
    FAIL("expected a numerical error");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("stiff") != std::string::npos);
  }
}

TEST_CASE("propagator names") {
  CHECK(parse_propagator("rk45") == Propagator::rk45);
  CHECK(parse_propagator("dopri5") == Propagator::rk45);
  CHECK(parse_propagator("magnus4") == Propagator::magnus4);
  CHECK(to_string(Propagator::magnus4) == "magnus4");
  CHECK_THROWS_AS(parse_propagator("euler"), ConfigError);
}
