#pragma once

// Low-level loops behind operator application, the FWHT and the propagators.
// Complex data is passed as interleaved (re, im) doubles so the AVX2
// translation unit never instantiates std::complex code.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace graylap::kernels {

enum class Isa { scalar, avx2 };

struct Table {
  Isa isa;
  const char* name;
  // out[r] += s * diag[r] * in[r ^ flip]  for r < n, with s = (s_re, s_im)
  void (*flip_accumulate)(const double* in, double* out, const double* diag,
                          std::uint64_t flip, std::size_t n, double s_re,
                          double s_im);
  // out[r] += s * w[r] * in[r ^ flip] with a real weight vector
  void (*flip_accumulate_real)(const double* in, double* out, const double* w,
                               std::uint64_t flip, std::size_t n, double s_re,
                               double s_im);
  // Unnormalized in-place Walsh-Hadamard butterflies, n a power of two.
  // Returns the number of butterflies executed.
  std::uint64_t (*fwht)(double* v, std::size_t n);
  // y += a * x
  void (*axpy)(double a_re, double a_im, const double* x, double* y,
               std::size_t n);
  // sum conj(a[r]) * b[r]
  void (*dot)(const double* a, const double* b, std::size_t n, double* re,
              double* im);
};

const Table& scalar_table();
// nullptr when the build or the CPU lacks AVX2.
const Table* avx2_table();

bool cpu_has_avx2();

// Active table: AVX2 when available unless GRAYLAP_SIMD=scalar is set.
const Table& active();
const Table& table_for(Isa isa);
std::string_view isa_name(Isa isa);

}  // namespace graylap::kernels
