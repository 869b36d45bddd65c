#pragma once

#include <Eigen/Dense>
#include <cstdint>

#include "graylap/pauli.hpp"

namespace graylap {

struct Eigenpairs {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXcd vectors; // columns, empty unless requested
  bool converged = true;
  int iterations = 0;       // operator applications (Lanczos only)
};

struct EigenOptions {
  // Dense diagonalization at or below this Hilbert-space width.
  int dense_width_limit = 10;
  int krylov_dim = 160;
  int max_restarts = 40;
  double tol = 1e-10;
  std::uint64_t seed = 12345;
};

Eigenpairs dense_eigenpairs(const Eigen::MatrixXcd& m, std::size_t k,
                            bool vectors);

// Block Lanczos with full reorthogonalization and thick restarts.  The block
// holds k+1 vectors, so degenerate levels up to k-fold are resolved.
Eigenpairs lanczos_lowest(const CompiledOperator& op, std::size_t k,
                          bool vectors, const EigenOptions& opts = {});

// Lowest k eigenpairs; dense below the width limit, Lanczos above it.
Eigenpairs lowest_eigenpairs(const OperatorSum& h, std::size_t k,
                             bool vectors = false,
                             const EigenOptions& opts = {});

}  // namespace graylap
