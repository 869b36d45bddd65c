#pragma once

// Discrete 1D Laplacians with the -2 diagonal dropped (pure adjacency),
// written as Pauli sums in a chosen position encoding.

#include <Eigen/Dense>
#include <vector>

#include "graylap/encodings.hpp"
#include "graylap/pauli.hpp"

namespace graylap {

OperatorSum laplacian_binary(int width);

OperatorSum laplacian_brgc(int width);
// Same operator as nested projector products: sigma_x_f * prod P0_i.
std::vector<ProjectorTerm> laplacian_brgc_terms(int width);

// Sum over prohibited codes c of P(c) = prod_i P^{c_i}_i.
std::vector<ProjectorTerm> h2gc_penalty_terms(const EncodingTable& t,
                                              double q = 1.0);
OperatorSum h2gc_penalty(const EncodingTable& t);

// sum_i sigma_x_i - q * sum_c P(c). The penalty enters with a minus sign so
// that the kinetic map (2I - L)/(2ma^2) lifts prohibited codes by q/(2ma^2).
OperatorSum laplacian_h2gc(int width, double q);

struct LaplacianSpec {
  EncodingKind encoding = EncodingKind::brgc;
  std::vector<int> widths;  // one entry per dimension
  double penalty = 0.0;     // h2gc only, Laplacian units
  bool drop_diagonal = true;
};

// Sum of per-dimension Laplacians on consecutive qubit blocks, dimension 0
// on the lowest qubits.
OperatorSum laplacian_multidim(const LaplacianSpec& spec);

struct KineticSpec {
  double mass = 1.0;
  double spacing = 1.0;
  bool constant_shift = true;
  // hbar*c for MeV/fm inputs, 1 for dimensionless ones.
  double hbar_c = 1.0;
};

double kinetic_prefactor(const KineticSpec& k);

// (2D I - L)/(2 m a^2) when constant_shift, else -L/(2 m a^2).
OperatorSum kinetic_hamiltonian(const OperatorSum& laplacian,
                                const KineticSpec& k, int dimensions);

// Adjacency of the N-cycle (N = 2 doubles the single edge) or the N-path.
Eigen::MatrixXd dense_oracle(std::size_t n, bool periodic);

}  // namespace graylap
