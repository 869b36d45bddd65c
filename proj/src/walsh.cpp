#include "graylap/walsh.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>

namespace graylap {
namespace {

thread_local std::uint64_t g_butterflies = 0;

int log2_exact(std::size_t n) {
  if (n < 1 || (n & (n - 1)) != 0)
    throw ContractError("length " + std::to_string(n) +
                        " is not a power of two");
  return __builtin_ctzll(n);
}

Code order_code(std::uint64_t n, WalshOrder order, int width) {
  switch (order) {
    case WalshOrder::binary: return n;
    case WalshOrder::brgc: return brgc_encode(n, width);
    case WalshOrder::sequency: return bit_reverse(brgc_encode(n, width), width);
  }
  return n;
}

}  // namespace

std::string_view to_string(WalshOrder o) {
  switch (o) {
    case WalshOrder::binary: return "binary";
    case WalshOrder::brgc: return "brgc";
    case WalshOrder::sequency: return "sequency";
  }
  return "?";
}

WalshOrder parse_walsh_order(std::string_view s) {
  if (s == "binary") return WalshOrder::binary;
  if (s == "brgc") return WalshOrder::brgc;
  if (s == "sequency") return WalshOrder::sequency;
  throw ConfigError("unknown Walsh order '" + std::string(s) + "'");
}

int rademacher(int n, double t) {
  if (n < 0) throw ContractError("Rademacher index must be >= 0");
  const double f = std::floor(std::ldexp(t, n + 1));
  return (static_cast<long long>(f) & 1) ? -1 : 1;
}

Code walsh_mask(const WalshIndex& idx) {
  if (idx.width < 1 || idx.width > kMaxStateWidth || idx.n > width_mask(idx.width))
    throw ContractError("Walsh index " + std::to_string(idx.n) +
                        " out of range for width " + std::to_string(idx.width));
  return order_code(idx.n, idx.order, idx.width);
}

std::vector<int> walsh_vector(const WalshIndex& idx) {
  const Code g = walsh_mask(idx);
  std::vector<int> v(std::size_t{1} << idx.width);
  for (std::size_t m = 0; m < v.size(); ++m)
    v[m] = (popcount(g & m) & 1) ? -1 : 1;
  return v;
}

WalshCoefficients fwht(std::span<const double> v, WalshOrder order) {
  const int width = log2_exact(v.size());
  std::vector<double> h(v.begin(), v.end());
  g_butterflies += kernels::active().fwht(h.data(), h.size());
  const double inv = 1.0 / static_cast<double>(h.size());
  WalshCoefficients c{std::vector<double>(h.size()), order, width};
  for (std::size_t n = 0; n < h.size(); ++n)
    c.coeffs[n] = h[order_code(n, order, width)] * inv;
  return c;
}

std::vector<double> inverse_fwht(const WalshCoefficients& c) {
  const int width = log2_exact(c.coeffs.size());
  std::vector<double> h(c.coeffs.size());
  for (std::size_t n = 0; n < h.size(); ++n)
    h[order_code(n, c.order, width)] = c.coeffs[n];
  g_butterflies += kernels::active().fwht(h.data(), h.size());
  return h;
}

std::uint64_t fwht_butterfly_count() { return g_butterflies; }
void reset_fwht_butterfly_count() { g_butterflies = 0; }

int sequency_of(std::span<const int> v) {
  int changes = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if ((v[i] < 0) != (v[i - 1] < 0)) ++changes;
  return changes;
}

std::string z_string(Code mask, int width) {
  std::string s(width, 'I');
  for (int q = 0; q < width; ++q)
    if ((mask >> q) & 1) s[width - 1 - q] = 'Z';
  return s;
}

OperatorSum to_operator(const WalshCoefficients& c, double chop) {
  std::vector<OperatorSum::Term> terms;
  for (std::size_t n = 0; n < c.coeffs.size(); ++n) {
    if (std::abs(c.coeffs[n]) <= chop) continue;
    terms.push_back({{0, order_code(n, c.order, c.width)}, c.coeffs[n]});
  }
  return OperatorSum(c.width, std::move(terms));
}

std::string coefficient_csv(const WalshCoefficients& c, double chop) {
  std::string out = "index,order,coefficient,z_string\n";
  char buf[64];
  for (std::size_t n = 0; n < c.coeffs.size(); ++n) {
    if (std::abs(c.coeffs[n]) <= chop) continue;
    std::snprintf(buf, sizeof buf, "%.17g", c.coeffs[n]);
    out += std::to_string(n) + "," + std::string(to_string(c.order)) + "," +
           buf + "," + z_string(order_code(n, c.order, c.width), c.width) +
           "\n";
  }
  return out;
}

// ---------------------------------------------------------------- grids

std::string_view to_string(CoarseGrainMethod m) {
  return m == CoarseGrainMethod::averaging ? "averaging" : "decimation";
}

CoarseGrainMethod parse_coarse_grain_method(std::string_view s) {
  if (s == "averaging") return CoarseGrainMethod::averaging;
  if (s == "decimation") return CoarseGrainMethod::decimation;
  throw ConfigError("unknown coarse-grain method '" + std::string(s) + "'");
}

PotentialGrid sample(const PotentialFn& v, const Box& box, std::size_t n) {
  PotentialGrid g{std::vector<double>(n), box};
  for (std::size_t m = 0; m < n; ++m) {
    g.samples[m] = v(box.sample_x(m, n));
    if (!std::isfinite(g.samples[m]))
      throw NumericalError("potential is not finite at x = " +
                           std::to_string(box.sample_x(m, n)));
  }
  return g;
}

PotentialGrid coarse_grain(const PotentialGrid& fine,
                           const CoarseGrainSpec& spec) {
  const int width = log2_exact(fine.samples.size());
  if (spec.coarse_width < 1 || spec.coarse_width > width)
    throw ContractError("coarse width must lie in [1, " +
                        std::to_string(width) + "]");
  const std::size_t nc = std::size_t{1} << spec.coarse_width;
  const std::size_t stride = fine.samples.size() / nc;
  PotentialGrid out{std::vector<double>(nc), fine.box};
  for (std::size_t k = 0; k < nc; ++k) {
    const double* block = fine.samples.data() + k * stride;
    if (spec.method == CoarseGrainMethod::averaging) {
      out.samples[k] = std::accumulate(block, block + stride, 0.0) /
                       static_cast<double>(stride);
    } else {
      out.samples[k] =
          fine.box.point == SamplePoint::left_edge ? block[0] : block[stride - 1];
    }
  }
  return out;
}

PotentialGrid coarse_grain(const PotentialFn& v, const Box& box, int width,
                           const CoarseGrainSpec& spec) {
  if (spec.coarse_width < 1 || spec.coarse_width > width)
    throw ContractError("coarse width must lie in [1, " +
                        std::to_string(width) + "]");
  const std::size_t nc = std::size_t{1} << spec.coarse_width;
  if (spec.method == CoarseGrainMethod::decimation) return sample(v, box, nc);
  if (!spec.integral)
    return coarse_grain(sample(v, box, std::size_t{1} << width), spec);
  PotentialGrid out{std::vector<double>(nc), box};
  const double a = box.spacing(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const double lo = box.x_min + static_cast<double>(k) * a;
    out.samples[k] = spec.integral(lo, lo + a) / a;
  }
  return out;
}

std::vector<double> hold_piecewise(const PotentialGrid& coarse,
                                   int fine_width) {
  const std::size_t nf = std::size_t{1} << fine_width;
  if (coarse.samples.empty() || coarse.samples.size() > nf)
    throw ContractError("hold_piecewise: fine grid smaller than coarse grid");
  const std::size_t stride = nf / coarse.samples.size();
  std::vector<double> out(nf);
  for (std::size_t m = 0; m < nf; ++m) out[m] = coarse.samples[m / stride];
  return out;
}

double l1_error_per_dof(std::span<const double> approx,
                        std::span<const double> ref) {
  if (approx.size() != ref.size() || approx.empty())
    throw ContractError("l1_error_per_dof: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i) s += std::abs(approx[i] - ref[i]);
  return s / static_cast<double>(ref.size());
}

// ---------------------------------------------------------------- compile

std::vector<double> potential_code_values(
    std::span<const double> samples, std::span<const EncodingTable> tables,
    std::optional<DontCareFill> fill) {
  if (tables.empty()) throw ContractError("no encoding tables given");
  if (tables.size() == 1) return reencode_vector(samples, tables[0], fill);

  std::size_t positions = 1;
  int total = 0;
  bool any_prohibited = false;
  for (const auto& t : tables) {
    positions *= t.positions();
    total += t.width();
    any_prohibited |= !t.prohibited().empty();
  }
  if (samples.size() != positions)
    throw ContractError("potential has " + std::to_string(samples.size()) +
                        " samples for " + std::to_string(positions) +
                        " lattice points");
  if (any_prohibited && !fill)
    throw ContractError("prohibited codes present; supply a don't-care fill");
  if (total > kMaxStateWidth) throw ContractError("total width too large");

  // Per dimension: code -> position, or the nearest valid position.
  std::vector<std::vector<std::int64_t>> lookup;
  for (const auto& t : tables) {
    std::vector<std::int64_t> l(t.code_space(), -1);
    for (Code c = 0; c < t.code_space(); ++c) {
      if (auto p = t.position_of(c)) {
        l[c] = static_cast<std::int64_t>(*p);
      } else if (fill == DontCareFill::nearest_valid) {
        int best = 1 << 30;
        for (std::size_t m = 0; m < t.positions(); ++m)
          if (hamming(c, t.code(m)) < best)
            best = hamming(c, t.code(m)), l[c] = static_cast<std::int64_t>(m);
      }
    }
    lookup.push_back(std::move(l));
  }

  std::vector<double> out(std::size_t{1} << total, 0.0);
  for (Code c = 0; c < out.size(); ++c) {
    std::size_t index = 0, stride = 1;
    int shift = 0;
    bool valid = true;
    for (std::size_t d = 0; d < tables.size(); ++d) {
      const Code part = (c >> shift) & width_mask(tables[d].width());
      const std::int64_t p = lookup[d][part];
      if (p < 0) {
        valid = false;
        break;
      }
      index += static_cast<std::size_t>(p) * stride;
      stride *= tables[d].positions();
      shift += tables[d].width();
    }
    if (valid) out[c] = samples[index];
  }
  return out;
}

OperatorSum compile_potential(std::span<const double> samples,
                              std::span<const EncodingTable> tables,
                              std::optional<DontCareFill> fill, double chop) {
  const auto values = potential_code_values(samples, tables, fill);
  return to_operator(fwht(values, WalshOrder::binary), chop);
}

OperatorSum compile_potential(std::span<const double> samples,
                              const EncodingTable& table,
                              std::optional<DontCareFill> fill, double chop) {
  return compile_potential(samples, std::span<const EncodingTable>(&table, 1),
                           fill, chop);
}

}  // namespace graylap
