#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace graylap {

using cplx = std::complex<double>;
using Code = std::uint64_t;

// Symbolic operators pack one bit per qubit into 64-bit masks.
inline constexpr int kMaxWidth = 62;
// Largest state vector the simulator will allocate.
inline constexpr int kMaxStateWidth = 30;
// Dense realizations are for oracles only.
inline constexpr int kDenseLimit = 14;

inline constexpr double kHbarC = 197.3269804;  // MeV fm

// Caller broke a precondition (width mismatch, index out of range, ...).
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Requested something the library deliberately does not provide.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline int popcount(std::uint64_t v) { return __builtin_popcountll(v); }

inline std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

}  // namespace graylap
