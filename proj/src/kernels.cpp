#include "plab/kernels.hpp"

#include <stdexcept>

#include "kernels_internal.hpp"

namespace plab::kernels {

namespace {

Backend g_backend = backend_available(Backend::avx2) ? Backend::avx2 : Backend::scalar;

}  // namespace

bool backend_available(Backend b) {
  switch (b) {
    case Backend::scalar:
      return true;
    case Backend::avx2:
      return __builtin_cpu_supports("avx2") != 0;
  }
  return false;
}

Backend active_backend() { return g_backend; }

void set_backend(Backend b) {
  if (!backend_available(b)) throw std::runtime_error("kernel backend not available on this CPU: " + backend_name(b));
  g_backend = b;
}

std::string backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

StencilGeom make_stencil_geom(const PolarGrid& g) {
  StencilGeom s;
  s.n_r = g.n_r;
  s.n_phi = g.n_phi;
  s.inv_dr2 = 1.0 / (g.dr * g.dr);
  s.a_in.resize(g.n_r);
  s.a_out.resize(g.n_r);
  s.c_phi.resize(g.n_r);
  s.w.resize(g.n_r);
  for (int i = 0; i < g.n_r; ++i) {
    double denom = 2.0 * i + 1.0;
    s.a_in[i] = i / denom;
    s.a_out[i] = (i + 1.0) / denom;
    double r = g.r(i);
    s.c_phi[i] = 1.0 / (2.0 * r * r * g.dphi * g.dphi);
    s.w[i] = r * g.dr * g.dphi;
  }
  return s;
}

void gradsq_field(const StencilGeom& geom, const double* v, const uint8_t* inside, double* out) {
  if (g_backend == Backend::avx2)
    detail::gradsq_field_avx2(geom, v, inside, out);
  else
    detail::gradsq_field_scalar(geom, v, inside, out);
}

void half_power_terms(const double* x, int n, double p, double eps2, double* out) {
  if (g_backend == Backend::avx2)
    detail::half_power_terms_avx2(x, n, p, eps2, out);
  else
    detail::half_power_terms_scalar(x, n, p, eps2, out);
}

void abs_power_terms(const double* v, int n, double p, double* out) {
  if (g_backend == Backend::avx2)
    detail::abs_power_terms_avx2(v, n, p, out);
  else
    detail::abs_power_terms_scalar(v, n, p, out);
}

void axpy(double a, const double* x, double* y, int n) {
  if (g_backend == Backend::avx2)
    detail::axpy_avx2(a, x, y, n);
  else
    detail::axpy_scalar(a, x, y, n);
}

void scale(double a, double* x, int n) {
  if (g_backend == Backend::avx2)
    detail::scale_avx2(a, x, n);
  else
    detail::scale_scalar(a, x, n);
}

double dot(const double* x, const double* y, int n) {
  return g_backend == Backend::avx2 ? detail::dot_avx2(x, y, n) : detail::dot_scalar(x, y, n);
}

}  // namespace plab::kernels
