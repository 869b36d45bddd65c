#include "graylap/pauli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace graylap {
namespace {

const cplx kIPow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

void check_width(int width) {
  if (width < 1 || width > kMaxWidth)
    throw ContractError("width " + std::to_string(width) + " outside [1, " +
                        std::to_string(kMaxWidth) + "]");
}

void check_qubit(int qubit, int width) {
  if (qubit < 0 || qubit >= width)
    throw ContractError("qubit " + std::to_string(qubit) +
                        " out of range for width " + std::to_string(width));
}

void check_same_width(int a, int b) {
  if (a != b)
    throw ContractError("width mismatch: " + std::to_string(a) + " vs " +
                        std::to_string(b));
}

PauliKey axis_key(int qubit, PauliAxis axis) {
  const std::uint64_t bit = std::uint64_t{1} << qubit;
  switch (axis) {
    case PauliAxis::X: return {bit, 0};
    case PauliAxis::Y: return {bit, bit};
    case PauliAxis::Z: return {0, bit};
    default: return {0, 0};
  }
}

// Groups canonical terms by x mask and folds the i^{|x&z|} phase into the
// coefficient. Terms are sorted by (x, z) so groups are contiguous.
template <typename Fn>
void for_each_group(const OperatorSum& h, Fn&& fn) {
  const auto& t = h.terms();
  std::vector<std::pair<Code, cplx>> group;
  std::size_t i = 0;
  while (i < t.size()) {
    const Code x = t[i].key.x;
    group.clear();
    for (; i < t.size() && t[i].key.x == x; ++i)
      group.emplace_back(t[i].key.z,
                         t[i].coeff * kIPow[popcount(x & t[i].key.z) & 3]);
    fn(x, group);
  }
}

// e[c] = sum_z a_z (-1)^{|z & c|}, then d[r] = e[r ^ x].
void build_block(Code x, const std::vector<std::pair<Code, cplx>>& group,
                 int width, bool& real, std::vector<double>& data) {
  const std::size_t n = std::size_t{1} << width;
  real = std::all_of(group.begin(), group.end(),
                     [](const auto& g) { return g.second.imag() == 0.0; });
  std::vector<double> re(n, 0.0), im;
  if (!real) im.assign(n, 0.0);
  if (group.size() > static_cast<std::size_t>(width)) {
    for (const auto& [z, a] : group) {
      re[z] += a.real();
      if (!real) im[z] += a.imag();
    }
    const auto& k = kernels::active();
    k.fwht(re.data(), n);
    if (!real) k.fwht(im.data(), n);
  } else {
    std::fill(re.begin(), re.end(), 0.0);
    for (std::size_t c = 0; c < n; ++c) {
      double sr = 0.0, si = 0.0;
      for (const auto& [z, a] : group) {
        const double s = (popcount(z & c) & 1) ? -1.0 : 1.0;
        sr += s * a.real();
        si += s * a.imag();
      }
      re[c] = sr;
      if (!real) im[c] = si;
    }
  }
  if (real) {
    data.resize(n);
    for (std::size_t r = 0; r < n; ++r) data[r] = re[r ^ x];
  } else {
    data.resize(2 * n);
    for (std::size_t r = 0; r < n; ++r) {
      data[2 * r] = re[r ^ x];
      data[2 * r + 1] = im[r ^ x];
    }
  }
}

void run_block(const kernels::Table& k, Code flip, bool real,
               const std::vector<double>& data, const cplx* in, cplx* out,
               std::size_t n, cplx scale) {
  const auto* ip = reinterpret_cast<const double*>(in);
  auto* op = reinterpret_cast<double*>(out);
  if (real)
    k.flip_accumulate_real(ip, op, data.data(), flip, n, scale.real(),
                           scale.imag());
  else
    k.flip_accumulate(ip, op, data.data(), flip, n, scale.real(),
                      scale.imag());
}

}  // namespace

char axis_char(PauliAxis a) {
  switch (a) {
    case PauliAxis::X: return 'X';
    case PauliAxis::Y: return 'Y';
    case PauliAxis::Z: return 'Z';
    default: return 'I';
  }
}

int product_phase(PauliKey a, PauliKey b) {
  const PauliKey c{a.x ^ b.x, a.z ^ b.z};
  const int e = popcount(a.x & a.z) + popcount(b.x & b.z) +
                2 * popcount(a.z & b.x) - popcount(c.x & c.z);
  return ((e % 4) + 4) % 4;
}

// ---------------------------------------------------------------- strings

PauliString::PauliString(int width, cplx coeff)
    : PauliString(width, PauliKey{}, coeff) {}

PauliString::PauliString(int width, PauliKey key, cplx coeff)
    : width_(width), key_(key), coeff_(coeff) {
  check_width(width);
  if ((key.support() & ~width_mask(width)) != 0)
    throw ContractError("Pauli factor beyond width " + std::to_string(width));
}

PauliString PauliString::parse(std::string_view factors, cplx coeff) {
  const int width = static_cast<int>(factors.size());
  check_width(width);
  PauliKey key;
  for (int i = 0; i < width; ++i) {
    const int q = width - 1 - i;
    const std::uint64_t bit = std::uint64_t{1} << q;
    switch (factors[i]) {
      case 'I': break;
      case 'X': key.x |= bit; break;
      case 'Y': key.x |= bit; key.z |= bit; break;
      case 'Z': key.z |= bit; break;
      default:
        throw ContractError("bad Pauli factor '" + std::string(1, factors[i]) +
                            "'");
    }
  }
  return PauliString(width, key, coeff);
}

PauliString PauliString::single(int width, int qubit, PauliAxis axis,
                                cplx coeff) {
  check_width(width);
  check_qubit(qubit, width);
  return PauliString(width, axis_key(qubit, axis), coeff);
}

PauliAxis PauliString::axis(int qubit) const {
  check_qubit(qubit, width_);
  const bool x = (key_.x >> qubit) & 1, z = (key_.z >> qubit) & 1;
  if (x && z) return PauliAxis::Y;
  if (x) return PauliAxis::X;
  if (z) return PauliAxis::Z;
  return PauliAxis::I;
}

std::string PauliString::factors() const {
  std::string s(width_, 'I');
  for (int q = 0; q < width_; ++q) s[width_ - 1 - q] = axis_char(axis(q));
  return s;
}

PauliString multiply(const PauliString& a, const PauliString& b) {
  check_same_width(a.width(), b.width());
  const PauliKey k{a.key().x ^ b.key().x, a.key().z ^ b.key().z};
  return PauliString(a.width(), k,
                     a.coeff() * b.coeff() *
                         kIPow[product_phase(a.key(), b.key())]);
}

// ---------------------------------------------------------------- sums

OperatorSum::OperatorSum(int width) : width_(width) { check_width(width); }

OperatorSum::OperatorSum(const PauliString& s) : width_(s.width()) {
  if (s.coeff() != 0.0) terms_.push_back({s.key(), s.coeff()});
}

OperatorSum::OperatorSum(int width, std::vector<Term> terms)
    : width_(width), terms_(std::move(terms)) {
  check_width(width);
  for (const auto& t : terms_)
    if ((t.key.support() & ~width_mask(width)) != 0)
      throw ContractError("Pauli factor beyond width " + std::to_string(width));
  canonicalize();
}

OperatorSum OperatorSum::identity(int width, cplx coeff) {
  return OperatorSum(PauliString(width, coeff));
}

OperatorSum OperatorSum::single(int width, int qubit, PauliAxis axis,
                                cplx coeff) {
  return OperatorSum(PauliString::single(width, qubit, axis, coeff));
}

std::vector<PauliString> OperatorSum::strings() const {
  std::vector<PauliString> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.emplace_back(width_, t.key, t.coeff);
  return out;
}

cplx OperatorSum::coefficient(PauliKey key) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), key,
      [](const Term& t, const PauliKey& k) { return t.key < k; });
  return (it != terms_.end() && it->key == key) ? it->coeff : cplx{0.0};
}

void OperatorSum::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const Term& a, const Term& b) { return a.key < b.key; });
  std::size_t w = 0;
  for (std::size_t i = 0; i < terms_.size();) {
    Term acc = terms_[i];
    std::size_t j = i + 1;
    for (; j < terms_.size() && terms_[j].key == acc.key; ++j)
      acc.coeff += terms_[j].coeff;
    if (acc.coeff != 0.0) terms_[w++] = acc;
    i = j;
  }
  terms_.resize(w);
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& o) {
  check_same_width(width_, o.width_);
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

OperatorSum& OperatorSum::operator-=(const OperatorSum& o) {
  check_same_width(width_, o.width_);
  for (const auto& t : o.terms_) terms_.push_back({t.key, -t.coeff});
  canonicalize();
  return *this;
}

OperatorSum& OperatorSum::operator*=(cplx s) {
  for (auto& t : terms_) t.coeff *= s;
  canonicalize();
  return *this;
}

OperatorSum OperatorSum::chopped(double tol) const {
  OperatorSum out(width_);
  for (const auto& t : terms_)
    if (std::abs(t.coeff) > tol) out.terms_.push_back(t);
  return out;
}

OperatorSum OperatorSum::embedded(int new_width, int offset) const {
  if (offset < 0 || offset + width_ > new_width)
    throw ContractError("cannot embed width " + std::to_string(width_) +
                        " at offset " + std::to_string(offset) +
                        " into width " + std::to_string(new_width));
  OperatorSum out(new_width);
  out.terms_.reserve(terms_.size());
  for (const auto& t : terms_)
    out.terms_.push_back({{t.key.x << offset, t.key.z << offset}, t.coeff});
  return out;
}

bool OperatorSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(), [tol](const Term& t) {
    return std::abs(t.coeff.imag()) <= tol;
  });
}

bool OperatorSum::is_diagonal() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& t) { return t.key.x == 0; });
}

double OperatorSum::norm_bound() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
OperatorSum operator*(cplx s, OperatorSum a) { return a *= s; }
OperatorSum operator*(OperatorSum a, cplx s) { return a *= s; }
OperatorSum operator-(OperatorSum a) { return a *= -1.0; }

OperatorSum operator*(const OperatorSum& a, const OperatorSum& b) {
  check_same_width(a.width(), b.width());
  std::vector<OperatorSum::Term> out;
  out.reserve(a.size() * b.size());
  for (const auto& ta : a.terms())
    for (const auto& tb : b.terms())
      out.push_back({{ta.key.x ^ tb.key.x, ta.key.z ^ tb.key.z},
                     ta.coeff * tb.coeff * kIPow[product_phase(ta.key, tb.key)]});
  return OperatorSum(a.width(), std::move(out));
}

OperatorSum add(const OperatorSum& a, const OperatorSum& b) { return a + b; }
OperatorSum multiply(const OperatorSum& a, const OperatorSum& b) {
  return a * b;
}

OperatorSum projector(int qubit, int bit, int width) {
  check_width(width);
  check_qubit(qubit, width);
  if (bit != 0 && bit != 1) throw ContractError("projector bit must be 0 or 1");
  return OperatorSum(width, {{{0, 0}, 0.5},
                             {axis_key(qubit, PauliAxis::Z),
                              bit == 0 ? 0.5 : -0.5}});
}

OperatorSum raising(int qubit, int width) {
  return OperatorSum(width, {{axis_key(qubit, PauliAxis::X), 0.5},
                             {axis_key(qubit, PauliAxis::Y), cplx(0, 0.5)}});
}

OperatorSum lowering(int qubit, int width) {
  return OperatorSum(width, {{axis_key(qubit, PauliAxis::X), 0.5},
                             {axis_key(qubit, PauliAxis::Y), cplx(0, -0.5)}});
}

OperatorSum transverse_field(int width) {
  OperatorSum h(width);
  for (int q = 0; q < width; ++q)
    h += OperatorSum::single(width, q, PauliAxis::X);
  return h;
}

OperatorSum expand(const ProjectorTerm& t, int width) {
  // prod (1 +- Z_q)/2 expands to all subsets of the literal set.
  std::vector<OperatorSum::Term> terms{{{0, 0}, t.coeff}};
  for (const auto& l : t.literals) {
    check_qubit(l.qubit, width);
    const std::uint64_t bit = std::uint64_t{1} << l.qubit;
    const double sz = l.bit == 0 ? 0.5 : -0.5;
    const std::size_t n = terms.size();
    for (std::size_t i = 0; i < n; ++i) {
      OperatorSum::Term zt = terms[i];
      if (zt.key.z & bit) {
        // Repeated literal on one qubit: P^b P^b = P^b, P^0 P^1 = 0.
        throw ContractError("projector product repeats qubit " +
                            std::to_string(l.qubit));
      }
      zt.key.z |= bit;
      zt.coeff *= sz;
      terms[i].coeff *= 0.5;
      terms.push_back(zt);
    }
  }
  if (t.flip >= 0) {
    check_qubit(t.flip, width);
    const std::uint64_t bit = std::uint64_t{1} << t.flip;
    for (auto& term : terms) {
      // X_f * P: the flip multiplies from the left.
      const PauliKey x{bit, 0};
      term.coeff *= kIPow[product_phase(x, term.key)];
      term.key.x ^= bit;
    }
  }
  return OperatorSum(width, std::move(terms));
}

OperatorSum expand(std::span<const ProjectorTerm> terms, int width) {
  std::vector<OperatorSum::Term> all;
  for (const auto& t : terms) {
    const auto e = expand(t, width);
    all.insert(all.end(), e.terms().begin(), e.terms().end());
  }
  return OperatorSum(width, std::move(all));
}

// ---------------------------------------------------------------- dense

Eigen::MatrixXcd to_dense(const OperatorSum& h, int limit) {
  if (h.width() > limit)
    throw UnsupportedError("dense realization refused for width " +
                           std::to_string(h.width()) + " (limit " +
                           std::to_string(limit) + ")");
  const std::size_t n = std::size_t{1} << h.width();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& t : h.terms()) {
    const cplx base = t.coeff * kIPow[popcount(t.key.x & t.key.z) & 3];
    for (std::size_t c = 0; c < n; ++c) {
      const double s = (popcount(t.key.z & c) & 1) ? -1.0 : 1.0;
      m(c ^ t.key.x, c) += s * base;
    }
  }
  return m;
}

// ---------------------------------------------------------------- census

std::string Census::axes() const {
  std::string s;
  auto add = [&s](bool on, const char* n) {
    if (!on) return;
    if (!s.empty()) s += ",";
    s += n;
  };
  add(has_x, "X");
  add(has_y, "Y");
  add(has_z, "Z");
  return s;
}

Census basis_census(const OperatorSum& h) {
  Census c;
  c.terms = h.size();
  for (const auto& t : h.terms()) {
    const int nx = popcount(t.key.x & ~t.key.z);
    const int ny = popcount(t.key.x & t.key.z);
    const int nz = popcount(t.key.z & ~t.key.x);
    c.has_x |= nx > 0;
    c.has_y |= ny > 0;
    c.has_z |= nz > 0;
    c.max_x_weight = std::max(c.max_x_weight, nx);
    c.max_y_weight = std::max(c.max_y_weight, ny);
    c.max_z_weight = std::max(c.max_z_weight, nz);
    c.max_flip_weight = std::max(c.max_flip_weight, nx + ny);
    c.locality = std::max(c.locality, nx + ny + nz);
  }
  return c;
}

// ---------------------------------------------------------------- text

std::string serialize(const OperatorSum& h) {
  std::string out;
  char buf[64];
  for (const auto& s : h.strings()) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g ", s.coeff().real(),
                  s.coeff().imag());
    out += buf;
    out += s.factors();
    out += '\n';
  }
  return out;
}

OperatorSum parse_operator_sum(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<OperatorSum::Term> terms;
  int width = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double re, im;
    std::string f;
    if (!(ls >> re >> im >> f))
      throw ContractError("malformed operator line: " + line);
    const auto s = PauliString::parse(f, cplx(re, im));
    if (width < 0) width = s.width();
    check_same_width(width, s.width());
    terms.push_back({s.key(), s.coeff()});
  }
  if (width < 0) throw ContractError("operator text has no terms");
  return OperatorSum(width, std::move(terms));
}

// ---------------------------------------------------------------- states

StateVector::StateVector(int width) : width_(width) {
  if (width < 1 || width > kMaxStateWidth)
    throw ContractError("state width " + std::to_string(width) +
                        " outside [1, " + std::to_string(kMaxStateWidth) + "]");
  amps_.assign(std::size_t{1} << width, 0.0);
  amps_[0] = 1.0;
}

StateVector StateVector::basis(int width, Code code) {
  StateVector s(width);
  if (code >= s.dim()) throw ContractError("basis code out of range");
  s.amps_[0] = 0.0;
  s.amps_[code] = 1.0;
  return s;
}

StateVector StateVector::uniform(int width) {
  StateVector s(width);
  const double a = 1.0 / std::sqrt(static_cast<double>(s.dim()));
  std::fill(s.amps_.begin(), s.amps_.end(), cplx(a, 0.0));
  return s;
}

StateVector StateVector::from_amplitudes(std::vector<cplx> amps,
                                         bool normalize) {
  const std::size_t n = amps.size();
  if (n < 2 || (n & (n - 1)) != 0)
    throw ContractError("amplitude count must be a power of two >= 2");
  StateVector s(__builtin_ctzll(n));
  s.amps_ = std::move(amps);
  if (normalize) s.normalize();
  return s;
}

double StateVector::norm() const {
  double re, im;
  kernels::active().dot(raw(), raw(), dim(), &re, &im);
  return std::sqrt(re);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0.0 || !std::isfinite(n))
    throw NumericalError("cannot normalize state with norm " +
                         std::to_string(n));
  for (auto& a : amps_) a /= n;
}

// ---------------------------------------------------------------- apply

CompiledOperator::CompiledOperator(const OperatorSum& h) : width_(h.width()) {
  if (width_ > kMaxStateWidth)
    throw ContractError("operator width exceeds state vector limit");
  for_each_group(h, [&](Code x, const auto& group) {
    Block b{x, true, {}};
    build_block(x, group, width_, b.real, b.data);
    blocks_.push_back(std::move(b));
  });
}

void CompiledOperator::apply_add(const cplx* in, cplx* out, cplx scale) const {
  apply_add(in, out, scale, kernels::active());
}

void CompiledOperator::apply_add(const cplx* in, cplx* out, cplx scale,
                                 const kernels::Table& k) const {
  for (const auto& b : blocks_)
    run_block(k, b.flip, b.real, b.data, in, out, dim(), scale);
}

std::vector<double> CompiledOperator::real_diagonal() const {
  std::vector<double> d(dim(), 0.0);
  for (const auto& b : blocks_) {
    if (b.flip != 0) continue;
    for (std::size_t r = 0; r < dim(); ++r)
      d[r] += b.real ? b.data[r] : b.data[2 * r];
  }
  return d;
}

StateVector apply(const OperatorSum& h, const StateVector& psi) {
  return apply(h, psi, kernels::active());
}

StateVector apply(const OperatorSum& h, const StateVector& psi,
                  const kernels::Table& k) {
  check_same_width(h.width(), psi.width());
  StateVector out(psi.width());
  std::fill(out.amplitudes().begin(), out.amplitudes().end(), cplx{0.0});
  bool real = true;
  std::vector<double> scratch;
  // Streams one x-group at a time so memory stays O(2^A).
  for_each_group(h, [&](Code x, const auto& group) {
    build_block(x, group, psi.width(), real, scratch);
    run_block(k, x, real, scratch, psi.amplitudes().data(),
              out.amplitudes().data(), psi.dim(), 1.0);
  });
  return out;
}

}  // namespace graylap
