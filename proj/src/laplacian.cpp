#include "graylap/laplacian.hpp"

#include <numeric>

namespace graylap {

OperatorSum laplacian_binary(int width) {
  if (width < 1) throw ContractError("laplacian width must be >= 1");
  OperatorSum l = OperatorSum::single(1, 0, PauliAxis::X, 2.0);
  for (int a = 2; a <= width; ++a) {
    // C over the lower a-1 qubits: the carry that wraps 0..01 <-> 1..10.
    OperatorSum up = OperatorSum::identity(a), down = OperatorSum::identity(a);
    for (int i = 0; i < a - 1; ++i) {
      up = up * raising(i, a);
      down = down * lowering(i, a);
    }
    const OperatorSum c = up + down;
    l = l.embedded(a, 0) - c + OperatorSum::single(a, a - 1, PauliAxis::X) * c;
  }
  return l;
}

std::vector<ProjectorTerm> laplacian_brgc_terms(int width) {
  if (width < 1) throw ContractError("laplacian width must be >= 1");
  if (width == 1) return {{2.0, 0, {}}};
  std::vector<ProjectorTerm> t{{1.0, 0, {}}, {1.0, 1, {}}};
  for (int a = 3; a <= width; ++a) {
    std::vector<Literal> prefix;
    for (int i = 0; i <= a - 3; ++i) prefix.push_back({i, 0});
    t.push_back({1.0, a - 1, prefix});
    t.push_back({-1.0, a - 2, prefix});
  }
  return t;
}

OperatorSum laplacian_brgc(int width) {
  return expand(laplacian_brgc_terms(width), width);
}

std::vector<ProjectorTerm> h2gc_penalty_terms(const EncodingTable& t,
                                              double q) {
  std::vector<ProjectorTerm> out;
  for (Code c : t.prohibited()) {
    ProjectorTerm p{q, -1, {}};
    for (int i = 0; i < t.width(); ++i)
      p.literals.push_back({i, static_cast<int>((c >> i) & 1)});
    out.push_back(std::move(p));
  }
  return out;
}

OperatorSum h2gc_penalty(const EncodingTable& t) {
  return expand(h2gc_penalty_terms(t), t.width());
}

OperatorSum laplacian_h2gc(int width, double q) {
  if (!(q > 0.0)) throw ContractError("H2GC penalty must be positive");
  const EncodingTable t = h2gc_table(width);
  return transverse_field(width) - q * h2gc_penalty(t);
}

OperatorSum laplacian_multidim(const LaplacianSpec& spec) {
  if (spec.widths.empty())
    throw ContractError("laplacian_multidim needs at least one dimension");
  const int total = std::accumulate(spec.widths.begin(), spec.widths.end(), 0);
  if (total > kMaxWidth)
    throw ContractError("total width " + std::to_string(total) +
                        " exceeds the operator limit");
  OperatorSum out(total);
  int offset = 0;
  for (int a : spec.widths) {
    OperatorSum l(a);
    switch (spec.encoding) {
      case EncodingKind::binary: l = laplacian_binary(a); break;
      case EncodingKind::brgc: l = laplacian_brgc(a); break;
      case EncodingKind::h2gc: l = laplacian_h2gc(a, spec.penalty); break;
      case EncodingKind::sequency:
        throw UnsupportedError("no Laplacian builder for sequency order");
    }
    out += l.embedded(total, offset);
    offset += a;
  }
  if (!spec.drop_diagonal)
    out -= OperatorSum::identity(total, 2.0 * spec.widths.size());
  return out;
}

double kinetic_prefactor(const KineticSpec& k) {
  if (!(k.mass > 0.0) || !(k.spacing > 0.0))
    throw ContractError("kinetic term needs positive mass and spacing");
  return k.hbar_c * k.hbar_c / (2.0 * k.mass * k.spacing * k.spacing);
}

OperatorSum kinetic_hamiltonian(const OperatorSum& laplacian,
                                const KineticSpec& k, int dimensions) {
  const double t = kinetic_prefactor(k);
  OperatorSum h = -t * laplacian;
  if (k.constant_shift)
    h += OperatorSum::identity(laplacian.width(), 2.0 * dimensions * t);
  return h;
}

Eigen::MatrixXd dense_oracle(std::size_t n, bool periodic) {
  if (n < 2) throw ContractError("dense_oracle needs at least 2 sites");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = m(i + 1, i) = 1.0;
  if (periodic) {
    m(0, n - 1) += 1.0;
    m(n - 1, 0) += 1.0;
  }
  return m;
}

}  // namespace graylap
