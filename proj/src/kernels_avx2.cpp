// Compiled with -mavx2 -mfma. Only reached after a runtime CPU check, so this
// file must not include headers that instantiate shared inline code.
#include <immintrin.h>

#include "graylap/kernels.hpp"

namespace graylap::kernels {
namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0x5); }

// Two complex products per register.
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d re = _mm256_movedup_pd(b);
  const __m256d im = _mm256_permute_pd(b, 0xF);
  return _mm256_addsub_pd(_mm256_mul_pd(a, re),
                          _mm256_mul_pd(swap_pairs(a), im));
}

// in[r ^ flip], in[(r + 1) ^ flip] for even r.
inline __m256d load_flipped(const double* in, std::size_t r,
                            std::uint64_t flip) {
  const std::size_t c = r ^ flip;
  if ((flip & 1) == 0) return _mm256_loadu_pd(in + 2 * c);
  const __m256d v = _mm256_loadu_pd(in + 2 * (c - 1));
  return _mm256_permute2f128_pd(v, v, 0x01);
}

void flip_accumulate_avx2(const double* in, double* out, const double* diag,
                          std::uint64_t flip, std::size_t n, double s_re,
                          double s_im) {
  const __m256d s = _mm256_setr_pd(s_re, s_im, s_re, s_im);
  for (std::size_t r = 0; r < n; r += 2) {
    const __m256d w = cmul(_mm256_loadu_pd(diag + 2 * r), s);
    const __m256d x = load_flipped(in, r, flip);
    const __m256d o = _mm256_loadu_pd(out + 2 * r);
    _mm256_storeu_pd(out + 2 * r, _mm256_add_pd(o, cmul(x, w)));
  }
}

void flip_accumulate_real_avx2(const double* in, double* out, const double* w,
                               std::uint64_t flip, std::size_t n, double s_re,
                               double s_im) {
  const __m256d sr = _mm256_set1_pd(s_re);
  const __m256d si = _mm256_setr_pd(-s_im, s_im, -s_im, s_im);
  for (std::size_t r = 0; r < n; r += 2) {
    const __m128d w2 = _mm_loadu_pd(w + r);
    const __m256d wd =
        _mm256_permute4x64_pd(_mm256_castpd128_pd256(w2), 0x50);
    const __m256d x = _mm256_mul_pd(load_flipped(in, r, flip), wd);
    __m256d o = _mm256_loadu_pd(out + 2 * r);
    o = _mm256_fmadd_pd(sr, x, o);
    o = _mm256_fmadd_pd(si, swap_pairs(x), o);
    _mm256_storeu_pd(out + 2 * r, o);
  }
}

std::uint64_t fwht_avx2(double* v, std::size_t n) {
  std::uint64_t ops = 0;
  std::size_t h = 1;
  for (; h < n && h < 4; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = v[j], w = v[j + h];
        v[j] = u + w;
        v[j + h] = u - w;
      }
      ops += h;
    }
  }
  for (; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; j += 4) {
        const __m256d u = _mm256_loadu_pd(v + j);
        const __m256d w = _mm256_loadu_pd(v + j + h);
        _mm256_storeu_pd(v + j, _mm256_add_pd(u, w));
        _mm256_storeu_pd(v + j + h, _mm256_sub_pd(u, w));
      }
      ops += h;
    }
  }
  return ops;
}

void axpy_avx2(double a_re, double a_im, const double* x, double* y,
               std::size_t n) {
  const __m256d ar = _mm256_set1_pd(a_re);
  const __m256d ai = _mm256_setr_pd(-a_im, a_im, -a_im, a_im);
  std::size_t r = 0;
  for (; r + 2 <= n; r += 2) {
    const __m256d xv = _mm256_loadu_pd(x + 2 * r);
    __m256d yv = _mm256_loadu_pd(y + 2 * r);
    yv = _mm256_fmadd_pd(ar, xv, yv);
    yv = _mm256_fmadd_pd(ai, swap_pairs(xv), yv);
    _mm256_storeu_pd(y + 2 * r, yv);
  }
  for (; r < n; ++r) {
    const double xr = x[2 * r], xi = x[2 * r + 1];
    y[2 * r] += a_re * xr - a_im * xi;
    y[2 * r + 1] += a_re * xi + a_im * xr;
  }
}

void dot_avx2(const double* a, const double* b, std::size_t n, double* re,
              double* im) {
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t r = 0;
  for (; r + 2 <= n; r += 2) {
    const __m256d av = _mm256_loadu_pd(a + 2 * r);
    const __m256d bv = _mm256_loadu_pd(b + 2 * r);
    acc_re = _mm256_fmadd_pd(av, bv, acc_re);
    acc_im = _mm256_fmadd_pd(av, swap_pairs(bv), acc_im);
  }
  alignas(32) double tr[4], ti[4];
  _mm256_store_pd(tr, acc_re);
  _mm256_store_pd(ti, acc_im);
  double sr = tr[0] + tr[1] + tr[2] + tr[3];
  double si = (ti[0] - ti[1]) + (ti[2] - ti[3]);
  for (; r < n; ++r) {
    const double xr = a[2 * r], xi = a[2 * r + 1];
    sr += xr * b[2 * r] + xi * b[2 * r + 1];
    si += xr * b[2 * r + 1] - xi * b[2 * r];
  }
  *re = sr;
  *im = si;
}

}  // namespace

extern const Table kAvx2Table;
const Table kAvx2Table{Isa::avx2,
                       "avx2",
                       flip_accumulate_avx2,
                       flip_accumulate_real_avx2,
                       fwht_avx2,
                       axpy_avx2,
                       dot_avx2};

}  // namespace graylap::kernels
