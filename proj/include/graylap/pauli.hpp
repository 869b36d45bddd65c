#pragma once

// Pauli-string algebra. A string is stored as two bit masks (x, z); the
// operator is P(x, z) = i^{|x & z|} X^x Z^z, so (1,0) is X, (0,1) is Z and
// (1,1) is Y. Qubit 0 is the least significant bit, i.e. the rightmost
// tensor factor and the last character of a factor string.

#include <Eigen/Dense>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graylap/kernels.hpp"
#include "graylap/types.hpp"

namespace graylap {

enum class PauliAxis : std::uint8_t { I, X, Y, Z };

char axis_char(PauliAxis a);

struct PauliKey {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  friend auto operator<=>(const PauliKey&, const PauliKey&) = default;
  std::uint64_t support() const { return x | z; }
};

// Exponent e (mod 4) with P(a) P(b) = i^e P(a ^ b).
int product_phase(PauliKey a, PauliKey b);

class PauliString {
 public:
  explicit PauliString(int width, cplx coeff = 1.0);
  PauliString(int width, PauliKey key, cplx coeff = 1.0);

  // "IXZY": first character is qubit width-1.
  static PauliString parse(std::string_view factors, cplx coeff = 1.0);
  static PauliString single(int width, int qubit, PauliAxis axis,
                            cplx coeff = 1.0);

  int width() const { return width_; }
  PauliKey key() const { return key_; }
  cplx coeff() const { return coeff_; }
  PauliAxis axis(int qubit) const;
  int weight() const { return popcount(key_.support()); }
  std::string factors() const;

 private:
  int width_;
  PauliKey key_;
  cplx coeff_;
};

PauliString multiply(const PauliString& a, const PauliString& b);

class OperatorSum {
 public:
  struct Term {
    PauliKey key;
    cplx coeff;
  };

  explicit OperatorSum(int width);
  OperatorSum(const PauliString& s);  // NOLINT: a string is a one-term sum
  OperatorSum(int width, std::vector<Term> terms);

  static OperatorSum identity(int width, cplx coeff = 1.0);
  static OperatorSum single(int width, int qubit, PauliAxis axis,
                            cplx coeff = 1.0);

  int width() const { return width_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::vector<PauliString> strings() const;
  cplx coefficient(PauliKey key) const;

  OperatorSum& operator+=(const OperatorSum& o);
  OperatorSum& operator-=(const OperatorSum& o);
  OperatorSum& operator*=(cplx s);

  // Sorts by key, merges equal keys and drops exact zeros. Idempotent.
  void canonicalize();
  // Drops terms with |coeff| <= tol.
  OperatorSum chopped(double tol) const;
  // Relabels qubit q to q + offset inside a register of new_width qubits.
  OperatorSum embedded(int new_width, int offset) const;

  bool is_hermitian(double tol = 0.0) const;
  bool is_diagonal() const;
  // Sum of |coeff|; bounds the spectral radius.
  double norm_bound() const;

 private:
  int width_;
  std::vector<Term> terms_;
};

OperatorSum operator+(OperatorSum a, const OperatorSum& b);
OperatorSum operator-(OperatorSum a, const OperatorSum& b);
OperatorSum operator*(const OperatorSum& a, const OperatorSum& b);
OperatorSum operator*(cplx s, OperatorSum a);
OperatorSum operator*(OperatorSum a, cplx s);
OperatorSum operator-(OperatorSum a);

OperatorSum add(const OperatorSum& a, const OperatorSum& b);
OperatorSum multiply(const OperatorSum& a, const OperatorSum& b);

// (1 + sigma_z)/2 for bit 0, (1 - sigma_z)/2 for bit 1.
OperatorSum projector(int qubit, int bit, int width);
// |0><1| = sigma_x P1 and its adjoint.
OperatorSum raising(int qubit, int width);
OperatorSum lowering(int qubit, int width);
OperatorSum transverse_field(int width);

// One factor P^bit_qubit of a projector product.
struct Literal {
  int qubit;
  int bit;
  friend bool operator==(const Literal&, const Literal&) = default;
};

// coeff * [sigma_x on `flip` if flip >= 0] * prod P^bit_qubit
struct ProjectorTerm {
  cplx coeff = 1.0;
  int flip = -1;
  std::vector<Literal> literals;
};

OperatorSum expand(const ProjectorTerm& t, int width);
OperatorSum expand(std::span<const ProjectorTerm> terms, int width);

Eigen::MatrixXcd to_dense(const OperatorSum& h, int limit = kDenseLimit);

struct Census {
  bool has_x = false, has_y = false, has_z = false;
  int max_x_weight = 0;  // X factors in one term
  int max_y_weight = 0;
  int max_z_weight = 0;
  int max_flip_weight = 0;  // X or Y factors in one term
  int locality = 0;
  std::size_t terms = 0;
  std::string axes() const;
};

Census basis_census(const OperatorSum& h);

// One line per term: "<re> <im> <factor string>".
std::string serialize(const OperatorSum& h);
OperatorSum parse_operator_sum(std::string_view text);

class StateVector {
 public:
  explicit StateVector(int width);  // |0...0>
  static StateVector basis(int width, Code code);
  static StateVector uniform(int width);
  static StateVector from_amplitudes(std::vector<cplx> amps,
                                     bool normalize = true);

  int width() const { return width_; }
  std::size_t dim() const { return amps_.size(); }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }
  std::vector<cplx>& amplitudes() { return amps_; }
  const std::vector<cplx>& amplitudes() const { return amps_; }
  double* raw() { return reinterpret_cast<double*>(amps_.data()); }
  const double* raw() const {
    return reinterpret_cast<const double*>(amps_.data());
  }

  double norm() const;
  void normalize();

 private:
  int width_;
  std::vector<cplx> amps_;
};

// H grouped by x mask: H = sum_x D_x X^x with D_x diagonal. Each group is
// stored as the vector d_x[r] = <r|H|r ^ x>, which turns application into
// one streaming pass per distinct x mask.
class CompiledOperator {
 public:
  explicit CompiledOperator(const OperatorSum& h);

  int width() const { return width_; }
  std::size_t dim() const { return std::size_t{1} << width_; }
  std::size_t flip_count() const { return blocks_.size(); }

  // out += scale * H * in
  void apply_add(const cplx* in, cplx* out, cplx scale = 1.0) const;
  void apply_add(const cplx* in, cplx* out, cplx scale,
                 const kernels::Table& k) const;
  // <r|H|r> for every basis state.
  std::vector<double> real_diagonal() const;

 private:
  struct Block {
    Code flip;
    bool real;
    std::vector<double> data;  // N reals or N interleaved complex
  };
  int width_;
  std::vector<Block> blocks_;
};

// Matrix-free H * psi. Amplitudes are not renormalized.
StateVector apply(const OperatorSum& h, const StateVector& psi);
StateVector apply(const OperatorSum& h, const StateVector& psi,
                  const kernels::Table& k);

}  // namespace graylap
