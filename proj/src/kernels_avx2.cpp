#include <immintrin.h>

#include <cmath>
#include <vector>

#include "kernels_internal.hpp"

namespace plab::kernels::detail {

namespace {

inline __m256d abs_pd(__m256d x) {
  const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
  return _mm256_and_pd(x, mask);
}

}  // namespace

void gradsq_field_avx2(const StencilGeom& g, const double* v, const uint8_t* inside, double* out) {
  const int n = g.n_phi;
  const size_t cells = static_cast<size_t>(g.n_r) * n;
  // inside flags as full-width blend masks
  std::vector<uint64_t> bits(cells + n, 0);  // one zero ring appended for the radial edges
  for (size_t k = 0; k < cells; ++k) bits[k] = inside[k] ? ~uint64_t{0} : uint64_t{0};
  std::vector<double> zeros(static_cast<size_t>(n), 0.0);
  const double* zero_ring = zeros.data();
  const uint64_t* zero_bits = bits.data() + cells;

  for (int i = 0; i < g.n_r; ++i) {
    const double* ring = v + static_cast<size_t>(i) * n;
    const double* rin = i > 0 ? v + static_cast<size_t>(i - 1) * n : zero_ring;
    const double* rout = i + 1 < g.n_r ? v + static_cast<size_t>(i + 1) * n : zero_ring;
    const uint64_t* bring = bits.data() + static_cast<size_t>(i) * n;
    const uint64_t* bin = i > 0 ? bits.data() + static_cast<size_t>(i - 1) * n : zero_bits;
    const uint64_t* bout = i + 1 < g.n_r ? bits.data() + static_cast<size_t>(i + 1) * n : zero_bits;
    double* o = out + static_cast<size_t>(i) * n;

    const __m256d ain = _mm256_set1_pd(g.a_in[i]);
    const __m256d aout = _mm256_set1_pd(g.a_out[i]);
    const __m256d idr2 = _mm256_set1_pd(g.inv_dr2);
    const __m256d cphi = _mm256_set1_pd(g.c_phi[i]);
    const __m256d two = _mm256_set1_pd(2.0);

    auto mask_at = [](const uint64_t* p, int off) {
      return _mm256_castsi256_pd(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(p + off)));
    };

    o[0] = gradsq_cell(g, v, inside, i, 0);
    int j = 1;
    for (; j + 4 <= n - 1; j += 4) {
      __m256d c = _mm256_loadu_pd(ring + j);
      __m256d gin = _mm256_mul_pd(two, c);
      __m256d ngin = _mm256_sub_pd(_mm256_setzero_pd(), gin);
      __m256d din = _mm256_blendv_pd(gin, _mm256_sub_pd(c, _mm256_loadu_pd(rin + j)), mask_at(bin, j));
      __m256d dout = _mm256_blendv_pd(ngin, _mm256_sub_pd(_mm256_loadu_pd(rout + j), c), mask_at(bout, j));
      __m256d dl = _mm256_blendv_pd(gin, _mm256_sub_pd(c, _mm256_loadu_pd(ring + j - 1)), mask_at(bring, j - 1));
      __m256d dr = _mm256_blendv_pd(ngin, _mm256_sub_pd(_mm256_loadu_pd(ring + j + 1), c), mask_at(bring, j + 1));
      __m256d rad = _mm256_add_pd(_mm256_mul_pd(ain, _mm256_mul_pd(din, din)),
                                  _mm256_mul_pd(aout, _mm256_mul_pd(dout, dout)));
      __m256d ang = _mm256_add_pd(_mm256_mul_pd(dl, dl), _mm256_mul_pd(dr, dr));
      _mm256_storeu_pd(o + j, _mm256_add_pd(_mm256_mul_pd(rad, idr2), _mm256_mul_pd(ang, cphi)));
    }
    for (; j < n; ++j) o[j] = gradsq_cell(g, v, inside, i, j);
  }
}

void half_power_terms_avx2(const double* x, int n, double p, double eps2, double* out) {
  const __m256d e2 = _mm256_set1_pd(eps2);
  int k = 0;
  if (p == 2.0) {
    for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, _mm256_add_pd(_mm256_loadu_pd(x + k), e2));
  } else if (p == 1.0) {
    for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, _mm256_sqrt_pd(_mm256_add_pd(_mm256_loadu_pd(x + k), e2)));
  } else if (p == 4.0) {
    for (; k + 4 <= n; k += 4) {
      __m256d t = _mm256_add_pd(_mm256_loadu_pd(x + k), e2);
      _mm256_storeu_pd(out + k, _mm256_mul_pd(t, t));
    }
  } else if (p == 3.0) {
    for (; k + 4 <= n; k += 4) {
      __m256d t = _mm256_add_pd(_mm256_loadu_pd(x + k), e2);
      _mm256_storeu_pd(out + k, _mm256_mul_pd(t, _mm256_sqrt_pd(t)));
    }
  } else if (p == 1.5) {
    for (; k + 4 <= n; k += 4) {
      __m256d t = _mm256_add_pd(_mm256_loadu_pd(x + k), e2);
      __m256d s = _mm256_sqrt_pd(t);
      _mm256_storeu_pd(out + k, _mm256_mul_pd(s, _mm256_sqrt_pd(s)));
    }
  } else {
    half_power_terms_scalar(x, n, p, eps2, out);
    return;
  }
  if (k < n) half_power_terms_scalar(x + k, n - k, p, eps2, out + k);
}

void abs_power_terms_avx2(const double* v, int n, double p, double* out) {
  int k = 0;
  if (p == 2.0) {
    for (; k + 4 <= n; k += 4) {
      __m256d a = _mm256_loadu_pd(v + k);
      _mm256_storeu_pd(out + k, _mm256_mul_pd(a, a));
    }
  } else if (p == 4.0) {
    for (; k + 4 <= n; k += 4) {
      __m256d a = _mm256_loadu_pd(v + k);
      __m256d s = _mm256_mul_pd(a, a);
      _mm256_storeu_pd(out + k, _mm256_mul_pd(s, s));
    }
  } else if (p == 3.0) {
    for (; k + 4 <= n; k += 4) {
      __m256d a = abs_pd(_mm256_loadu_pd(v + k));
      _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_mul_pd(a, a), a));
    }
  } else if (p == 1.5) {
    for (; k + 4 <= n; k += 4) {
      __m256d a = abs_pd(_mm256_loadu_pd(v + k));
      _mm256_storeu_pd(out + k, _mm256_mul_pd(a, _mm256_sqrt_pd(a)));
    }
  } else {
    abs_power_terms_scalar(v, n, p, out);
    return;
  }
  if (k < n) abs_power_terms_scalar(v + k, n - k, p, out + k);
}

void axpy_avx2(double a, const double* x, double* y, int n) {
  const __m256d av = _mm256_set1_pd(a);
  int k = 0;
  for (; k + 4 <= n; k += 4) {
    __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + k), _mm256_mul_pd(av, _mm256_loadu_pd(x + k)));
    _mm256_storeu_pd(y + k, r);
  }
  for (; k < n; ++k) y[k] = y[k] + a * x[k];
}

void scale_avx2(double a, double* x, int n) {
  const __m256d av = _mm256_set1_pd(a);
  int k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(x + k, _mm256_mul_pd(av, _mm256_loadu_pd(x + k)));
  for (; k < n; ++k) x[k] = a * x[k];
}

double dot_avx2(const double* x, const double* y, int n) {
  __m256d acc = _mm256_setzero_pd();
  int m = n - (n % 4);
  for (int k = 0; k < m; k += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  alignas(32) double p[4];
  _mm256_store_pd(p, acc);
  if (m + 0 < n) p[0] += x[m] * y[m];
  if (m + 1 < n) p[1] += x[m + 1] * y[m + 1];
  if (m + 2 < n) p[2] += x[m + 2] * y[m + 2];
  return (p[0] + p[1]) + (p[2] + p[3]);
}

}  // namespace plab::kernels::detail
