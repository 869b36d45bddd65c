#include "graylap/kernels.hpp"

namespace graylap::kernels {
namespace {

void flip_accumulate_scalar(const double* in, double* out, const double* diag,
                            std::uint64_t flip, std::size_t n, double s_re,
                            double s_im) {
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = r ^ flip;
    const double dr = diag[2 * r], di = diag[2 * r + 1];
    const double wr = s_re * dr - s_im * di;
    const double wi = s_re * di + s_im * dr;
    const double xr = in[2 * c], xi = in[2 * c + 1];
    out[2 * r] += wr * xr - wi * xi;
    out[2 * r + 1] += wr * xi + wi * xr;
  }
}

void flip_accumulate_real_scalar(const double* in, double* out,
                                 const double* w, std::uint64_t flip,
                                 std::size_t n, double s_re, double s_im) {
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t c = r ^ flip;
    const double xr = in[2 * c] * w[r], xi = in[2 * c + 1] * w[r];
    out[2 * r] += s_re * xr - s_im * xi;
    out[2 * r + 1] += s_re * xi + s_im * xr;
  }
}

std::uint64_t fwht_scalar(double* v, std::size_t n) {
  std::uint64_t ops = 0;
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double u = v[j], w = v[j + h];
        v[j] = u + w;
        v[j + h] = u - w;
      }
      ops += h;
    }
  }
  return ops;
}

void axpy_scalar(double a_re, double a_im, const double* x, double* y,
                 std::size_t n) {
  for (std::size_t r = 0; r < n; ++r) {
    const double xr = x[2 * r], xi = x[2 * r + 1];
    y[2 * r] += a_re * xr - a_im * xi;
    y[2 * r + 1] += a_re * xi + a_im * xr;
  }
}

void dot_scalar(const double* a, const double* b, std::size_t n, double* re,
                double* im) {
  double sr = 0.0, si = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    const double ar = a[2 * r], ai = a[2 * r + 1];
    const double br = b[2 * r], bi = b[2 * r + 1];
    sr += ar * br + ai * bi;
    si += ar * bi - ai * br;
  }
  *re = sr;
  *im = si;
}

const Table kScalar{Isa::scalar,        "scalar",    flip_accumulate_scalar,
                    flip_accumulate_real_scalar, fwht_scalar, axpy_scalar,
                    dot_scalar};

}  // namespace

const Table& scalar_table() { return kScalar; }

}  // namespace graylap::kernels
