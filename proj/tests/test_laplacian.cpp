#include <doctest.h>

#include "graylap/laplacian.hpp"
#include "oracle.hpp"

using namespace graylap;

namespace {

Eigen::MatrixXd real_dense(const OperatorSum& h) {
  const auto m = to_dense(h);
  REQUIRE(m.imag().cwiseAbs().maxCoeff() == 0.0);
  return m.real();
}

}  // namespace

TEST_CASE("three-qubit binary Laplacian") {
  Eigen::MatrixXd l3(8, 8);
  l3 << 0, 1, 0, 0, 0, 0, 0, 1,
        1, 0, 1, 0, 0, 0, 0, 0,
        0, 1, 0, 1, 0, 0, 0, 0,
        0, 0, 1, 0, 1, 0, 0, 0,
        0, 0, 0, 1, 0, 1, 0, 0,
        0, 0, 0, 0, 1, 0, 1, 0,
        0, 0, 0, 0, 0, 1, 0, 1,
        1, 0, 0, 0, 0, 0, 1, 0;
  CHECK(real_dense(laplacian_binary(3)) == l3);
}

TEST_CASE("binary and brgc Laplacians equal the periodic oracle") {
  for (int a = 1; a <= 10; ++a) {
    const auto oracle_l = dense_oracle(std::size_t{1} << a, true);
    CHECK(real_dense(laplacian_binary(a)) == oracle_l);
    const auto g = EncodingTable::brgc(a);
    CHECK(decode_matrix(real_dense(laplacian_brgc(a)), g) == oracle_l);
  }
}

TEST_CASE("dense builders agree with Kronecker products") {
  for (int a = 1; a <= 5; ++a) {
    CHECK((oracle::dense(laplacian_brgc(a)) - to_dense(laplacian_brgc(a))).norm() == 0.0);
    CHECK((oracle::dense(laplacian_binary(a)) - to_dense(laplacian_binary(a))).norm() == 0.0);
  }
}

TEST_CASE("small brgc Laplacians") {
  CHECK(laplacian_brgc(1).size() == 1);
  CHECK(laplacian_brgc(1).coefficient(PauliString::parse("X").key()) == cplx(2.0));
  const auto l2 = laplacian_brgc(2);
  CHECK(l2.size() == 2);
  CHECK(l2.coefficient(PauliString::parse("XI").key()) == cplx(1.0));
  CHECK(l2.coefficient(PauliString::parse("IX").key()) == cplx(1.0));
}

TEST_CASE("projector form of the brgc Laplacian") {
  for (int a = 1; a <= 8; ++a) {
    const auto terms = laplacian_brgc_terms(a);
    CHECK((to_dense(expand(terms, a)) - to_dense(laplacian_brgc(a))).norm() == 0.0);
    for (const auto& t : terms) CHECK(t.flip >= 0);
  }
}

TEST_CASE("encoding census") {
  for (int a = 1; a <= 12; ++a) {
    const auto c = basis_census(laplacian_brgc(a));
    CHECK(!c.has_y);
    CHECK(c.max_x_weight <= 1);
  }
  for (int a = 3; a <= 8; ++a) CHECK(basis_census(laplacian_binary(a)).has_y);
  for (int a = 2; a <= 7; ++a) {
    const auto h = laplacian_h2gc(a, 5.0);
    for (const auto& s : h.strings()) {
      const bool one_x = s.key().z == 0 && popcount(s.key().x) == 1;
      const bool pure_z = s.key().x == 0;
      CHECK((one_x || pure_z));
    }
  }
}

TEST_CASE("H2GC Laplacian on valid codes is the coil adjacency") {
  for (int a = 3; a <= 6; ++a) {
    const auto t = h2gc_table(a);
    const double q = 7.0;
    const auto l = real_dense(laplacian_h2gc(a, q));
    CHECK(decode_matrix(l, t) == dense_oracle(t.positions(), t.closed()));
    for (Code c : t.prohibited()) CHECK(l(c, c) == -q);
    for (std::size_t m = 0; m < t.positions(); ++m) CHECK(l(t.code(m), t.code(m)) == 0.0);
  }
  CHECK_THROWS_AS(laplacian_h2gc(4, 0.0), ContractError);
}

TEST_CASE("penalty projectors cover exactly the prohibited codes") {
  const auto t = h2gc_table(4);
  const auto p = real_dense(h2gc_penalty(t));
  for (Code c = 0; c < 16; ++c) CHECK(p(c, c) == (t.position_of(c) ? 0.0 : 1.0));
  CHECK(h2gc_penalty_terms(t).size() == t.prohibited().size());
}

TEST_CASE("multi-dimensional Laplacian is a sum over blocks") {
  LaplacianSpec spec;
  spec.widths = {2, 3};
  const auto l = laplacian_multidim(spec);
  const auto want = laplacian_brgc(2).embedded(5, 0) + laplacian_brgc(3).embedded(5, 2);
  CHECK((to_dense(l) - to_dense(want)).norm() == 0.0);
  spec.drop_diagonal = false;
  const auto full = laplacian_multidim(spec);
  CHECK((to_dense(full) - to_dense(want) + 4.0 * to_dense(OperatorSum::identity(5))).norm() == 0.0);
  spec.encoding = EncodingKind::sequency;
  CHECK_THROWS_AS(laplacian_multidim(spec), UnsupportedError);
}

TEST_CASE("shifted kinetic energy has a zero mode on the uniform state") {
  KineticSpec k;
  k.mass = 469.14;
  k.spacing = 20.0 / 128;
  k.hbar_c = kHbarC;
  const auto h = kinetic_hamiltonian(laplacian_brgc(7), k, 1);
  const auto u = StateVector::uniform(7);
  const auto hu = apply(h, u);
  double n = 0.0;
  for (std::size_t i = 0; i < hu.dim(); ++i) n += std::norm(hu[i]);
  CHECK(std::sqrt(n) < 1e-9);
  CHECK(kinetic_prefactor(k) == doctest::Approx(kHbarC * kHbarC / (2 * 469.14 * k.spacing * k.spacing)));
  k.mass = 0.0;
  CHECK_THROWS_AS(kinetic_prefactor(k), ContractError);
}

TEST_CASE("periodic oracle shapes") {
  const auto two = dense_oracle(2, true);
  CHECK(two(0, 1) == 2.0);
  const auto path = dense_oracle(4, false);
  CHECK(path(0, 3) == 0.0);
  CHECK(path.sum() == 6.0);
}
