#include <cmath>

#include "kernels_internal.hpp"

namespace plab::kernels::detail {

void gradsq_field_scalar(const StencilGeom& g, const double* v, const uint8_t* inside, double* out) {
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) out[static_cast<size_t>(i) * g.n_phi + j] = gradsq_cell(g, v, inside, i, j);
}

void half_power_terms_scalar(const double* x, int n, double p, double eps2, double* out) {
  if (p == 2.0) {
    for (int k = 0; k < n; ++k) out[k] = x[k] + eps2;
  } else if (p == 1.0) {
    for (int k = 0; k < n; ++k) out[k] = std::sqrt(x[k] + eps2);
  } else if (p == 4.0) {
    for (int k = 0; k < n; ++k) {
      double t = x[k] + eps2;
      out[k] = t * t;
    }
  } else if (p == 3.0) {
    for (int k = 0; k < n; ++k) {
      double t = x[k] + eps2;
      out[k] = t * std::sqrt(t);
    }
  } else if (p == 1.5) {
    for (int k = 0; k < n; ++k) {
      double t = x[k] + eps2;
      double s = std::sqrt(t);
      out[k] = s * std::sqrt(s);
    }
  } else {
    double e = 0.5 * p;
    for (int k = 0; k < n; ++k) out[k] = std::pow(x[k] + eps2, e);
  }
}

void abs_power_terms_scalar(const double* v, int n, double p, double* out) {
  if (p == 2.0) {
    for (int k = 0; k < n; ++k) out[k] = v[k] * v[k];
  } else if (p == 4.0) {
    for (int k = 0; k < n; ++k) {
      double s = v[k] * v[k];
      out[k] = s * s;
    }
  } else if (p == 3.0) {
    for (int k = 0; k < n; ++k) {
      double a = std::abs(v[k]);
      out[k] = (a * a) * a;
    }
  } else if (p == 1.5) {
    for (int k = 0; k < n; ++k) {
      double a = std::abs(v[k]);
      out[k] = a * std::sqrt(a);
    }
  } else {
    for (int k = 0; k < n; ++k) out[k] = std::pow(std::abs(v[k]), p);
  }
}

void axpy_scalar(double a, const double* x, double* y, int n) {
  for (int k = 0; k < n; ++k) y[k] = y[k] + a * x[k];
}

void scale_scalar(double a, double* x, int n) {
  for (int k = 0; k < n; ++k) x[k] = a * x[k];
}

double dot_scalar(const double* x, const double* y, int n) {
  double p0 = 0.0, p1 = 0.0, p2 = 0.0, p3 = 0.0;
  int m = n - (n % 4);
  for (int k = 0; k < m; k += 4) {
    p0 += x[k] * y[k];
    p1 += x[k + 1] * y[k + 1];
    p2 += x[k + 2] * y[k + 2];
    p3 += x[k + 3] * y[k + 3];
  }
  if (m + 0 < n) p0 += x[m] * y[m];
  if (m + 1 < n) p1 += x[m + 1] * y[m + 1];
  if (m + 2 < n) p2 += x[m + 2] * y[m + 2];
  return (p0 + p1) + (p2 + p3);
}

}  // namespace plab::kernels::detail
