#pragma once

// Independent dense references for the unit suites: Kronecker products of
// 2x2 Pauli matrices, permutation matrices and a seeded RNG.

#include <Eigen/Dense>
#include <random>

#include "graylap/encodings.hpp"
#include "graylap/pauli.hpp"

namespace oracle {

using graylap::cplx;
using Mat = Eigen::MatrixXcd;

inline Mat pauli2(char c) {
  Mat m(2, 2);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// Leftmost character is the most significant qubit.
inline Mat string_matrix(const std::string& factors) {
  Mat m = Mat::Identity(1, 1);
  for (char c : factors) m = kron(m, pauli2(c));
  return m;
}

inline Mat dense(const graylap::OperatorSum& h) {
  const auto n = Eigen::Index{1} << h.width();
  Mat m = Mat::Zero(n, n);
  for (const auto& s : h.strings()) m += s.coeff() * string_matrix(s.factors());
  return m;
}

// P[G(n), n] = 1, so P^T M P reads M in position order.
inline Eigen::MatrixXd permutation(const graylap::EncodingTable& t) {
  const auto n = static_cast<Eigen::Index>(t.code_space());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(t.positions()));
  for (std::size_t k = 0; k < t.positions(); ++k)
    p(static_cast<Eigen::Index>(t.code(k)), static_cast<Eigen::Index>(k)) = 1.0;
  return p;
}

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  cplx complex() { return {uniform(), uniform()}; }

  std::string pauli_string(int width) {
    std::string s(static_cast<std::size_t>(width), 'I');
    for (auto& c : s) c = "IXYZ"[integer(0, 3)];
    return s;
  }

  graylap::OperatorSum operator_sum(int width, int terms, bool hermitian) {
    graylap::OperatorSum h(width);
    for (int i = 0; i < terms; ++i) {
      const cplx c = hermitian ? cplx(uniform(), 0.0) : complex();
      h += graylap::PauliString::parse(pauli_string(width), c);
    }
    return h;
  }

  graylap::StateVector state(int width) {
    std::vector<cplx> a(std::size_t{1} << width);
    for (auto& v : a) v = complex();
    return graylap::StateVector::from_amplitudes(std::move(a), true);
  }
};

inline Eigen::VectorXcd as_vector(const graylap::StateVector& s) {
  return Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(),
                                            static_cast<Eigen::Index>(s.dim()));
}

}  // namespace oracle
