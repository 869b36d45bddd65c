#pragma once

// Reduction of projector products to 2-local form. An ancilla a stands for
// the product of two literals l_i l_j through P0_a, and a diagonal penalty
// makes every other ancilla assignment cost at least q.

#include <span>
#include <string>
#include <vector>

#include "graylap/pauli.hpp"

namespace graylap {

// q [P1_a + Z_a (m_i + m_j) + m_i m_j] with violation indicators
// m = P^{1-b}. Zero exactly when a = 0 and both literals hold, or a = 1 and
// at least one fails; the a = 0, both-fail cell costs 3q.
OperatorSum reduce_pair(Literal li, Literal lj, int ancilla, double q,
                        int width);
OperatorSum reduce_pair(int i, int j, int ancilla, double q, int width);

struct AncillaAssignment {
  int ancilla;
  Literal left;
  Literal right;
};

struct ReductionOptions {
  // 0 selects 100 x the Gershgorin spectral-width estimate.
  double penalty = 0.0;
  // Ranking score = occurrences - weight * (height of the deeper literal).
  // 0 keeps pure occurrence ranking, which builds chains for nested products.
  double tree_height_weight = 0.0;
};

struct ReductionPlan {
  int original_width = 0;
  int total_width = 0;
  double penalty = 0.0;
  std::vector<AncillaAssignment> ancillas;
  std::vector<ProjectorTerm> terms;  // rewritten system terms
  OperatorSum reduced{1};            // terms + penalties, total_width qubits
  std::string dump() const;
};

// Gershgorin estimate of max - min eigenvalue.
double spectral_width_estimate(const OperatorSum& h);

// Rewrites sum_T c_T X_f prod_{q in T} P0_q from a Pauli sum whose terms
// carry at most one X factor and no Y.
std::vector<ProjectorTerm> projector_basis(const OperatorSum& h);

ReductionPlan reduce_to_2local(std::span<const ProjectorTerm> terms, int width,
                               const ReductionOptions& opts = {});
ReductionPlan reduce_to_2local(const OperatorSum& h,
                               const ReductionOptions& opts = {});

// True when every ancilla bit of `code` matches its defining pair.
bool ancilla_consistent(const ReductionPlan& plan, Code code);

struct SectorReport {
  std::vector<double> eigenvalues;        // lowest k of the reduced operator
  std::vector<double> consistent_weight;  // per eigenvector
  // Spectrum of the reduced operator compressed to the consistent sector.
  std::vector<double> sector_eigenvalues;
  double epsilon = 0.0;
  bool consistent = true;
};

SectorReport consistent_sector_check(const ReductionPlan& plan, std::size_t k);

}  // namespace graylap
