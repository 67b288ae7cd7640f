#pragma once

#include "plab/kernels.hpp"

// Backend entry points. Each pair implements the identical element-wise
// operation sequence; see kernels.hpp.
namespace plab::kernels::detail {

void gradsq_field_scalar(const StencilGeom&, const double*, const uint8_t*, double*);
void half_power_terms_scalar(const double*, int, double, double, double*);
void abs_power_terms_scalar(const double*, int, double, double*);
void axpy_scalar(double, const double*, double*, int);
void scale_scalar(double, double*, int);
double dot_scalar(const double*, const double*, int);

void gradsq_field_avx2(const StencilGeom&, const double*, const uint8_t*, double*);
void half_power_terms_avx2(const double*, int, double, double, double*);
void abs_power_terms_avx2(const double*, int, double, double*);
void axpy_avx2(double, const double*, double*, int);
void scale_avx2(double, double*, int);
double dot_avx2(const double*, const double*, int);

// Scalar helper shared by both backends for ring edges and tails.
inline double gradsq_cell(const StencilGeom& g, const double* v, const uint8_t* inside, int i, int j) {
  const int n = g.n_phi;
  const size_t c0 = static_cast<size_t>(i) * n + j;
  double c = v[c0];
  double gin = 2.0 * c;  // Dirichlet wall on the face: slope over the half cell
  size_t kin = c0 - n;
  size_t kout = c0 + n;
  size_t kl = static_cast<size_t>(i) * n + (j == 0 ? n - 1 : j - 1);
  size_t kr = static_cast<size_t>(i) * n + (j == n - 1 ? 0 : j + 1);
  double din = (i > 0 && inside[kin]) ? c - v[kin] : gin;
  double dout = (i + 1 < g.n_r && inside[kout]) ? v[kout] - c : -gin;
  double dl = inside[kl] ? c - v[kl] : gin;
  double dr = inside[kr] ? v[kr] - c : -gin;
  double rad = g.a_in[i] * (din * din) + g.a_out[i] * (dout * dout);
  double ang = dl * dl + dr * dr;
  return rad * g.inv_dr2 + ang * g.c_phi[i];
}

}  // namespace plab::kernels::detail
