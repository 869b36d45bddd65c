#include "graylap/reduce2local.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "graylap/eigensolver.hpp"

namespace graylap {
namespace {

bool lit_less(const Literal& a, const Literal& b) {
  return std::pair(a.qubit, a.bit) < std::pair(b.qubit, b.bit);
}

bool has_literal(const ProjectorTerm& t, const Literal& l) {
  return std::find(t.literals.begin(), t.literals.end(), l) != t.literals.end();
}

int term_locality(const ProjectorTerm& t) {
  int n = static_cast<int>(t.literals.size());
  if (t.flip >= 0 &&
      std::none_of(t.literals.begin(), t.literals.end(),
                   [&](const Literal& l) { return l.qubit == t.flip; }))
    ++n;
  return n;
}

bool literal_holds(const Literal& l, Code code) {
  return static_cast<int>((code >> l.qubit) & 1) == l.bit;
}

}  // namespace

OperatorSum reduce_pair(Literal li, Literal lj, int ancilla, double q,
                        int width) {
  if (li.qubit == lj.qubit || li.qubit == ancilla || lj.qubit == ancilla)
    throw ContractError("reduce_pair needs three distinct qubits");
  const OperatorSum mi = projector(li.qubit, 1 - li.bit, width);
  const OperatorSum mj = projector(lj.qubit, 1 - lj.bit, width);
  const OperatorSum za = OperatorSum::single(width, ancilla, PauliAxis::Z);
  return q * (projector(ancilla, 1, width) + za * (mi + mj) + mi * mj);
}

OperatorSum reduce_pair(int i, int j, int ancilla, double q, int width) {
  return reduce_pair(Literal{i, 0}, Literal{j, 0}, ancilla, q, width);
}

double spectral_width_estimate(const OperatorSum& h) {
  if (h.width() > kDenseLimit) return 2.0 * h.norm_bound();
  const std::size_t n = std::size_t{1} << h.width();
  // Each off-diagonal Pauli term puts |c| into every row's radius.
  std::vector<double> diag(n, 0.0), radius(n, 0.0);
  for (const auto& t : h.terms()) {
    for (std::size_t r = 0; r < n; ++r) {
      if (t.key.x == 0) {
        const double s = (popcount(t.key.z & r) & 1) ? -1.0 : 1.0;
        diag[r] += s * t.coeff.real();
      } else {
        radius[r] += std::abs(t.coeff);
      }
    }
  }
  double lo = 1e300, hi = -1e300;
  for (std::size_t r = 0; r < n; ++r) {
    lo = std::min(lo, diag[r] - radius[r]);
    hi = std::max(hi, diag[r] + radius[r]);
  }
  return hi - lo;
}

std::vector<ProjectorTerm> projector_basis(const OperatorSum& h) {
  // Z_q = 2 P0_q - 1, so Z_S = sum_{T subset S} 2^|T| (-1)^{|S|-|T|} P0_T.
  std::map<std::pair<int, Code>, cplx> acc;
  for (const auto& t : h.terms()) {
    if (t.key.x & t.key.z)
      throw UnsupportedError("reduction rejects terms with Y factors");
    if (popcount(t.key.x) > 1)
      throw UnsupportedError("reduction needs at most one X factor per term");
    const int flip = t.key.x ? __builtin_ctzll(t.key.x) : -1;
    const Code s = t.key.z;
    const int ns = popcount(s);
    for (Code sub = s;; sub = (sub - 1) & s) {
      const int nt = popcount(sub);
      const double w = std::ldexp(1.0, nt) * (((ns - nt) & 1) ? -1.0 : 1.0);
      acc[{flip, sub}] += w * t.coeff;
      if (sub == 0) break;
    }
  }
  std::vector<ProjectorTerm> out;
  for (const auto& [key, c] : acc) {
    if (c == 0.0) continue;
    ProjectorTerm p{c, key.first, {}};
    for (int q = 0; q < 64; ++q)
      if ((key.second >> q) & 1) p.literals.push_back({q, 0});
    out.push_back(std::move(p));
  }
  return out;
}

ReductionPlan reduce_to_2local(std::span<const ProjectorTerm> input, int width,
                               const ReductionOptions& opts) {
  ReductionPlan plan;
  plan.original_width = width;
  plan.terms.assign(input.begin(), input.end());
  for (auto& t : plan.terms) std::sort(t.literals.begin(), t.literals.end(), lit_less);

  std::map<int, int> height;  // ancilla qubit -> tree height
  auto lit_height = [&](const Literal& l) {
    auto it = height.find(l.qubit);
    return it == height.end() ? 0 : it->second;
  };
  int next = width;

  for (;;) {
    // Occurrences of each literal pair among terms that are still > 2-local.
    std::map<std::pair<std::pair<int, int>, std::pair<int, int>>, int> count;
    for (const auto& t : plan.terms) {
      if (term_locality(t) <= 2) continue;
      for (std::size_t i = 0; i < t.literals.size(); ++i)
        for (std::size_t j = i + 1; j < t.literals.size(); ++j) {
          const auto& a = t.literals[i];
          const auto& b = t.literals[j];
          if (a.qubit == t.flip || b.qubit == t.flip) continue;
          ++count[{{a.qubit, a.bit}, {b.qubit, b.bit}}];
        }
    }
    if (count.empty()) break;
    // std::map iterates in (qubit, bit) order, so strict > keeps the lowest
    // indices on ties.
    double best_score = -1e300;
    std::pair<Literal, Literal> best{};
    for (const auto& [k, c] : count) {
      const Literal a{k.first.first, k.first.second};
      const Literal b{k.second.first, k.second.second};
      const double score =
          c - opts.tree_height_weight * std::max(lit_height(a), lit_height(b));
      if (score > best_score) {
        best_score = score;
        best = {a, b};
      }
    }
    const int anc = next++;
    height[anc] = 1 + std::max(lit_height(best.first), lit_height(best.second));
    plan.ancillas.push_back({anc, best.first, best.second});
    for (auto& t : plan.terms) {
      if (term_locality(t) <= 2 || t.flip == best.first.qubit ||
          t.flip == best.second.qubit)
        continue;
      if (!has_literal(t, best.first) || !has_literal(t, best.second)) continue;
      std::erase(t.literals, best.first);
      std::erase(t.literals, best.second);
      t.literals.push_back({anc, 0});
      std::sort(t.literals.begin(), t.literals.end(), lit_less);
    }
    if (next > kMaxWidth) throw ContractError("reduction ran out of qubits");
  }
  for (const auto& t : plan.terms)
    if (term_locality(t) > 2)
      throw UnsupportedError(
          "term cannot be reduced: flip qubit shares a product with >2 literals");

  plan.total_width = next;
  OperatorSum system(plan.total_width);
  for (const auto& t : plan.terms) system += expand(t, plan.total_width);
  plan.penalty = opts.penalty > 0.0
                     ? opts.penalty
                     : 100.0 * spectral_width_estimate(expand(input, width));
  plan.reduced = system;
  for (const auto& a : plan.ancillas)
    plan.reduced += reduce_pair(a.left, a.right, a.ancilla, plan.penalty,
                                plan.total_width);
  return plan;
}

ReductionPlan reduce_to_2local(const OperatorSum& h,
                               const ReductionOptions& opts) {
  const auto terms = projector_basis(h);
  return reduce_to_2local(terms, h.width(), opts);
}

bool ancilla_consistent(const ReductionPlan& plan, Code code) {
  for (const auto& a : plan.ancillas) {
    const bool product = literal_holds(a.left, code) && literal_holds(a.right, code);
    const bool abit = (code >> a.ancilla) & 1;
    if (product == abit) return false;  // P0_a must equal the product
  }
  return true;
}

std::string ReductionPlan::dump() const {
  std::ostringstream os;
  auto lit = [](const Literal& l) {
    return "P" + std::to_string(l.bit) + "_" + std::to_string(l.qubit);
  };
  os << "# original_width " << original_width << "\n";
  os << "# total_width " << total_width << "\n";
  os << "# penalty " << penalty << "\n";
  os << "# ancilla  P0_a = left * right\n";
  for (const auto& a : ancillas)
    os << "# " << a.ancilla << "  " << lit(a.left) << " " << lit(a.right) << "\n";
  os << serialize(reduced);
  return os.str();
}

SectorReport consistent_sector_check(const ReductionPlan& plan,
                                     std::size_t k) {
  SectorReport r;
  const auto dense = to_dense(plan.reduced);
  const auto ep = dense_eigenpairs(dense, k, true);
  r.eigenvalues.assign(ep.values.data(), ep.values.data() + ep.values.size());
  double system_norm = 0.0;
  {
    OperatorSum sys(plan.total_width);
    for (const auto& t : plan.terms) sys += expand(t, plan.total_width);
    system_norm = sys.norm_bound();
  }
  r.epsilon = plan.ancillas.empty() ? 0.0 : 10.0 * system_norm / plan.penalty;

  std::vector<Eigen::Index> sector;
  for (Code c = 0; c < static_cast<Code>(dense.rows()); ++c)
    if (ancilla_consistent(plan, c)) sector.push_back(static_cast<Eigen::Index>(c));

  for (Eigen::Index j = 0; j < ep.vectors.cols(); ++j) {
    double w = 0.0;
    for (auto c : sector) w += std::norm(ep.vectors(c, j));
    r.consistent_weight.push_back(w);
    if (w < 1.0 - r.epsilon - 1e-12) r.consistent = false;
  }

  const auto ns = static_cast<Eigen::Index>(sector.size());
  Eigen::MatrixXcd compressed(ns, ns);
  for (Eigen::Index i = 0; i < ns; ++i)
    for (Eigen::Index j = 0; j < ns; ++j)
      compressed(i, j) = dense(sector[i], sector[j]);
  const auto cs = dense_eigenpairs(compressed, static_cast<std::size_t>(ns), false);
  r.sector_eigenvalues.assign(cs.values.data(), cs.values.data() + cs.values.size());
  return r;
}

}  // namespace graylap
