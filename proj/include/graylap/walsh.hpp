#pragma once

// Walsh functions, the fast Walsh-Hadamard transform and compilation of
// sampled potentials into diagonal Z-string operators.
//
// Index n in order G selects the mask G(n); the sampled function is
// W(m) = (-1)^{|G(n) & m|}. Mask bit q is sigma_z on qubit q, which is the
// Rademacher factor R_{A-1-q}.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "graylap/encodings.hpp"
#include "graylap/pauli.hpp"

namespace graylap {

enum class WalshOrder { binary, brgc, sequency };

std::string_view to_string(WalshOrder o);
WalshOrder parse_walsh_order(std::string_view s);

struct WalshIndex {
  std::uint64_t n = 0;
  WalshOrder order = WalshOrder::binary;
  int width = 1;
};

// (-1)^floor(2^{n+1} t), i.e. sign sin(2^{n+1} pi t) away from its zeros.
int rademacher(int n, double t);

Code walsh_mask(const WalshIndex& idx);
std::vector<int> walsh_vector(const WalshIndex& idx);

struct WalshCoefficients {
  std::vector<double> coeffs;  // coeffs[n] multiplies W^order_n
  WalshOrder order = WalshOrder::binary;
  int width = 0;
};

// Forward transform with the 1/2^A normalization.
WalshCoefficients fwht(std::span<const double> v, WalshOrder order);
std::vector<double> inverse_fwht(const WalshCoefficients& c);

// Butterflies executed by fwht/inverse_fwht on this thread.
std::uint64_t fwht_butterfly_count();
void reset_fwht_butterfly_count();

// Sign changes along a +-1 vector.
int sequency_of(std::span<const int> v);

// Z-string for mask G(n), qubit A-1 leftmost.
std::string z_string(Code mask, int width);

// Diagonal operator sum_n c_n Z^{G(n)}; entries with |c| <= chop dropped.
OperatorSum to_operator(const WalshCoefficients& c, double chop = 0.0);

// CSV "index,order,coefficient,z_string".
std::string coefficient_csv(const WalshCoefficients& c, double chop = 0.0);

// ---------------------------------------------------------------- grids

enum class SamplePoint { left_edge, right_edge };

// Cells [x_min + m a, x_min + (m+1) a], a = length / positions. Samples sit
// on the left edge, or on the right edge for radial boxes on (0, L].
struct Box {
  double x_min = 0.0;
  double length = 1.0;
  SamplePoint point = SamplePoint::left_edge;

  double spacing(std::size_t positions) const {
    return length / static_cast<double>(positions);
  }
  double sample_x(std::size_t m, std::size_t positions) const {
    const double a = spacing(positions);
    return x_min + (static_cast<double>(m) +
                    (point == SamplePoint::right_edge ? 1.0 : 0.0)) *
                       a;
  }
};

struct PotentialGrid {
  std::vector<double> samples;
  Box box;
  double spacing() const { return box.spacing(samples.size()); }
};

using PotentialFn = std::function<double(double)>;
// Integral of V over [lo, hi].
using BlockIntegral = std::function<double(double, double)>;

enum class CoarseGrainMethod { averaging, decimation };

std::string_view to_string(CoarseGrainMethod m);
CoarseGrainMethod parse_coarse_grain_method(std::string_view s);

struct CoarseGrainSpec {
  CoarseGrainMethod method = CoarseGrainMethod::averaging;
  int coarse_width = 1;
  BlockIntegral integral;  // optional closed-form block integral
};

PotentialGrid sample(const PotentialFn& v, const Box& box, std::size_t n);

// Block means (averaging) or the fine samples that coincide with the coarse
// sample points (decimation).
PotentialGrid coarse_grain(const PotentialGrid& fine,
                           const CoarseGrainSpec& spec);
// Analytic variant: averaging uses spec.integral when present and falls back
// to block means of the width-A sampling.
PotentialGrid coarse_grain(const PotentialFn& v, const Box& box, int width,
                           const CoarseGrainSpec& spec);

// Coarse samples repeated onto 2^fine_width points.
std::vector<double> hold_piecewise(const PotentialGrid& coarse,
                                   int fine_width);

// (1/N) sum |a - b|.
double l1_error_per_dof(std::span<const double> approx,
                        std::span<const double> ref);

// Diagonal of V in the code basis. samples are in position order with
// dimension 0 varying fastest; tables[d] encodes dimension d on the qubit
// block starting at sum of earlier widths.
std::vector<double> potential_code_values(
    std::span<const double> samples, std::span<const EncodingTable> tables,
    std::optional<DontCareFill> fill);

OperatorSum compile_potential(std::span<const double> samples,
                              std::span<const EncodingTable> tables,
                              std::optional<DontCareFill> fill = {},
                              double chop = 0.0);
OperatorSum compile_potential(std::span<const double> samples,
                              const EncodingTable& table,
                              std::optional<DontCareFill> fill = {},
                              double chop = 0.0);

}  // namespace graylap
