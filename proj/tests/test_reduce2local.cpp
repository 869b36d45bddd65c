#include <doctest.h>

#include "graylap/laplacian.hpp"
#include "graylap/eigensolver.hpp"
#include "graylap/reduce2local.hpp"
#include "graylap/walsh.hpp"
#include "oracle.hpp"

using namespace graylap;

namespace {

// Penalty on the basis state with bits (a, i, j) on qubits (2, 0, 1).
double penalty_at(const OperatorSum& h, int a, int i, int j) {
  const auto d = CompiledOperator(h).real_diagonal();
  return d[static_cast<std::size_t>(a << 2 | j << 1 | i)];
}

}  // namespace

TEST_CASE("gadget penalty table") {
  const double q = 3.5;
  const auto h = reduce_pair(0, 1, 2, q, 3);
  CHECK(h.is_diagonal());
  CHECK(basis_census(h).locality <= 2);
  // a = 0 must pair with i j = 00; a = 1 with anything else.
  const double want[2][4] = {{0, q, q, 3 * q}, {q, 0, 0, 0}};
  for (int a = 0; a < 2; ++a)
    for (int ij = 0; ij < 4; ++ij)
      CHECK(penalty_at(h, a, ij & 1, ij >> 1) == doctest::Approx(want[a][ij]));
  CHECK_THROWS_AS(reduce_pair(0, 0, 2, q, 3), ContractError);
  CHECK_THROWS_AS(reduce_pair(0, 1, 1, q, 3), ContractError);
}

TEST_CASE("P1 literals mirror the gadget") {
  const auto h = reduce_pair(Literal{0, 1}, Literal{1, 0}, 2, 1.0, 3);
  // zero exactly when P0_a equals P1_0 * P0_1
  for (int a = 0; a < 2; ++a)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const bool product = i == 1 && j == 0;
        const bool ok = (a == 0) == product;
        CHECK((penalty_at(h, a, i, j) == 0.0) == ok);
      }
}

TEST_CASE("gadget alone has a four-fold degenerate zero ground space") {
  ReductionPlan plan;
  plan.original_width = 2;
  plan.total_width = 3;
  plan.penalty = 1.0;
  plan.ancillas.push_back({2, {0, 0}, {1, 0}});
  plan.reduced = reduce_pair(0, 1, 2, 1.0, 3);
  const auto r = consistent_sector_check(plan, 5);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(r.eigenvalues[i]) < 1e-12);
  CHECK(r.eigenvalues[4] == doctest::Approx(1.0));
  CHECK(!r.consistent);  // the fifth level is a penalized state
  CHECK(consistent_sector_check(plan, 4).consistent);
}

TEST_CASE("single merge of a three-projector product") {
  ProjectorTerm t{1.0, -1, {{0, 0}, {1, 0}, {2, 0}}};
  ReductionOptions o;
  o.penalty = 10.0;
  const auto plan = reduce_to_2local(std::span<const ProjectorTerm>(&t, 1), 3, o);
  REQUIRE(plan.ancillas.size() == 1);
  CHECK(plan.ancillas[0].ancilla == 3);
  CHECK(plan.ancillas[0].left == Literal{0, 0});
  CHECK(plan.ancillas[0].right == Literal{1, 0});
  REQUIRE(plan.terms.size() == 1);
  CHECK(plan.terms[0].literals.size() == 2);
  CHECK(basis_census(plan.reduced).locality <= 2);
  // Diagonal input: the consistent sector reproduces it exactly.
  const auto r = consistent_sector_check(plan, 8);
  const auto orig = dense_eigenpairs(to_dense(expand(t, 3)), 8, false);
  for (int i = 0; i < 8; ++i) CHECK(r.sector_eigenvalues[i] == doctest::Approx(orig.values[i]));
}

TEST_CASE("trivial plan keeps the spectrum") {
  const auto h = laplacian_brgc(2);
  const auto plan = reduce_to_2local(h);
  CHECK(plan.ancillas.empty());
  const auto r = consistent_sector_check(plan, 4);
  const auto orig = dense_eigenpairs(to_dense(h), 4, false);
  for (int i = 0; i < 4; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(orig.values[i]));
  CHECK(r.epsilon == 0.0);
}

TEST_CASE("brgc Laplacian chains are reduced to 2-local form") {
  for (int a = 3; a <= 10; ++a) {
    const auto plan = reduce_to_2local(laplacian_brgc(a));
    CHECK(basis_census(plan.reduced).locality <= 2);
    CHECK(plan.ancillas.size() <= static_cast<std::size_t>(a));
    CHECK(plan.ancillas.size() == static_cast<std::size_t>(std::max(0, a - 3)));
    CHECK(plan.total_width == a + static_cast<int>(plan.ancillas.size()));
  }
  CHECK(reduce_to_2local(laplacian_brgc(5)).ancillas.size() <= 2);
}

TEST_CASE("reduction never adds products and shrinks locality") {
  const auto terms = laplacian_brgc_terms(7);
  const auto plan = reduce_to_2local(terms, 7);
  CHECK(plan.terms.size() == terms.size());
  int before = 0;
  for (const auto& t : terms) before = std::max<int>(before, static_cast<int>(t.literals.size()) + 1);
  CHECK(before > 2);
  for (const auto& t : plan.terms) CHECK(t.literals.size() + 1 <= 2);
}

TEST_CASE("ranking prefers the most shared pair, lowest indices on ties") {
  std::vector<ProjectorTerm> terms{
      {1.0, -1, {{0, 0}, {2, 0}, {3, 0}}},
      {1.0, -1, {{1, 0}, {2, 0}, {3, 0}}},
      {1.0, -1, {{0, 0}, {1, 0}, {4, 0}}},
  };
  const auto plan = reduce_to_2local(terms, 5);
  REQUIRE(!plan.ancillas.empty());
  CHECK(plan.ancillas[0].left == Literal{2, 0});
  CHECK(plan.ancillas[0].right == Literal{3, 0});
  ProjectorTerm tie{1.0, -1, {{3, 0}, {1, 0}, {2, 0}}};
  const auto p2 = reduce_to_2local(std::span<const ProjectorTerm>(&tie, 1), 4);
  CHECK(p2.ancillas[0].left == Literal{1, 0});
  CHECK(p2.ancillas[0].right == Literal{2, 0});
}

TEST_CASE("unsupported shapes are rejected") {
  OperatorSum y(3);
  y += PauliString::parse("YZZ");
  CHECK_THROWS_AS(reduce_to_2local(y), UnsupportedError);
  OperatorSum xx(3);
  xx += PauliString::parse("XXZ");
  CHECK_THROWS_AS(reduce_to_2local(xx), UnsupportedError);
}

TEST_CASE("projector basis reproduces the operator") {
  for (int a = 2; a <= 6; ++a) {
    const auto h = laplacian_brgc(a) + compile_potential(std::vector<double>(std::size_t{1} << a, 0.5),
                                                         EncodingTable::brgc(a));
    const auto terms = projector_basis(h);
    CHECK((to_dense(expand(terms, a)) - to_dense(h)).norm() < 1e-12);
  }
}

TEST_CASE("larger penalties keep low eigenvectors in the consistent sector") {
  const auto h = laplacian_brgc(4);
  double prev_leak = 1.0;
  for (double q : {10.0, 100.0, 1000.0}) {
    ReductionOptions o;
    o.penalty = q;
    const auto plan = reduce_to_2local(h, o);
    const auto r = consistent_sector_check(plan, 4);
    double leak = 0.0;
    for (double w : r.consistent_weight) leak = std::max(leak, 1.0 - w);
    CHECK(leak < prev_leak);
    prev_leak = leak;
  }
}

TEST_CASE("Gershgorin width bounds the true spread") {
  const auto h = laplacian_brgc(4);
  const auto ep = dense_eigenpairs(to_dense(h), 16, false);
  CHECK(spectral_width_estimate(h) >= ep.values[15] - ep.values[0] - 1e-12);
  const auto plan = reduce_to_2local(h);
  CHECK(plan.penalty == doctest::Approx(100.0 * spectral_width_estimate(h)));
  CHECK(plan.dump().find("# ancilla") != std::string::npos);
}
