#include "graylap/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace graylap {
namespace {

using CVec = Eigen::VectorXcd;

void apply_op(const CompiledOperator& op, const CVec& in, CVec& out) {
  out.setZero();
  op.apply_add(in.data(), out.data());
}

}  // namespace

Eigenpairs dense_eigenpairs(const Eigen::MatrixXcd& m, std::size_t k,
                            bool vectors) {
  const auto n = m.rows();
  k = std::min<std::size_t>(k, static_cast<std::size_t>(n));
  Eigenpairs out;
  const auto opts = vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly;
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.real(), opts);
    if (es.info() != Eigen::Success) out.converged = false;
    out.values = es.eigenvalues().head(k);
    if (vectors) out.vectors = es.eigenvectors().leftCols(k).cast<cplx>();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, opts);
    if (es.info() != Eigen::Success) out.converged = false;
    out.values = es.eigenvalues().head(k);
    if (vectors) out.vectors = es.eigenvectors().leftCols(k);
  }
  return out;
}

Eigenpairs lanczos_lowest(const CompiledOperator& op, std::size_t k,
                          bool vectors, const EigenOptions& opts) {
  using Eigen::Index;
  const auto n = static_cast<Index>(op.dim());
  k = std::min<std::size_t>(k, static_cast<std::size_t>(n));
  const Index kk = static_cast<Index>(k);
  // block size k resolves degeneracies up to k; one spare column keeps
  // the k-th level from hiding behind a near twin
  const Index bs = std::min<Index>(kk + 1, n);
  const Index m = std::min<Index>(std::max<Index>(opts.krylov_dim, 4 * bs), n);
  const Index keep = std::min<Index>(m / 2, 2 * bs);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd q(n, m), hq(n, m);
  Index p = 0;
  Eigenpairs out;
  CVec w(n);

  // Appends v to the basis after two Gram-Schmidt passes; false if v lies in it.
  auto push = [&](CVec v) {
    const double n0 = v.norm();
    if (n0 == 0.0 || p == m) return false;
    for (int pass = 0; pass < 2; ++pass)
      if (p > 0) v.noalias() -= q.leftCols(p) * (q.leftCols(p).adjoint() * v);
    const double n1 = v.norm();
    if (n1 < 1e-10 * n0) return false;
    q.col(p) = v / n1;
    apply_op(op, q.col(p), w);
    ++out.iterations;
    hq.col(p) = w;
    ++p;
    return true;
  };

  std::vector<CVec> block;
  for (Index j = 0; j < bs; ++j) {
    CVec v(n);
    for (Index i = 0; i < n; ++i) v[i] = cplx(gauss(rng), 0.0);
    block.push_back(std::move(v));
  }

  Eigen::VectorXd theta;
  Eigen::MatrixXcd ritz;
  bool ok = false;
  for (int restart = 0; restart <= opts.max_restarts && !ok; ++restart) {
    // expand block by block until the basis is full
    while (p < m && !block.empty()) {
      const Index first = p;
      for (auto& v : block) push(v);
      block.clear();
      for (Index j = first; j < p && p < m; ++j) block.push_back(hq.col(j));
    }
    const Eigen::MatrixXcd t = q.leftCols(p).adjoint() * hq.leftCols(p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (t + t.adjoint()));
    const Index kept = std::min<Index>(keep, p);
    const Eigen::MatrixXcd s = es.eigenvectors().leftCols(kept);
    theta = es.eigenvalues().head(kept);
    ritz = q.leftCols(p) * s;
    const Eigen::MatrixXcd hritz = hq.leftCols(p) * s;
    const double scale = std::max({1.0, std::abs(es.eigenvalues()[0]),
                                   std::abs(es.eigenvalues()[p - 1])});
    ok = true;
    for (Index j = 0; j < std::min(kk, kept); ++j) {
      CVec r = hritz.col(j) - theta[j] * ritz.col(j);
      if (r.norm() > opts.tol * scale) {
        ok = false;
        block.push_back(std::move(r));
      }
    }
    if (p == n) ok = true;
    if (ok) break;
    // thick restart on the lowest Ritz vectors
    q.leftCols(kept) = ritz;
    hq.leftCols(kept) = hritz;
    p = kept;
  }

  out.converged = ok;
  out.values = theta.head(kk);
  if (vectors) out.vectors = ritz.leftCols(kk);
  return out;
}

Eigenpairs lowest_eigenpairs(const OperatorSum& h, std::size_t k, bool vectors,
                             const EigenOptions& opts) {
  if (h.width() <= opts.dense_width_limit)
    return dense_eigenpairs(to_dense(h), k, vectors);
  return lanczos_lowest(CompiledOperator(h), k, vectors, opts);
}

}  // namespace graylap
