#include <doctest.h>

#include <cstring>
#include <vector>

#include "plab/kernels.hpp"
#include "plab/lab.hpp"

using namespace plab;
using kernels::Backend;

namespace {

struct BackendGuard {
  Backend saved = kernels::active_backend();
  ~BackendGuard() { kernels::set_backend(saved); }
};

std::vector<double> random_values(size_t n, uint64_t seed, double lo = -2.0, double hi = 2.0) {
  lab::Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

}  // namespace

TEST_CASE("scalar backend is always available and selectable") {
  BackendGuard guard;
  CHECK(kernels::backend_available(Backend::scalar));
  kernels::set_backend(Backend::scalar);
  CHECK(kernels::active_backend() == Backend::scalar);
  CHECK(kernels::backend_name(Backend::avx2) == "avx2");
}

TEST_CASE("vector backend matches the scalar reference bit for bit") {
  if (!kernels::backend_available(Backend::avx2)) return;  // nothing to compare on this host
  BackendGuard guard;

  PolarGrid g = build_grid(0.0, 1.3, 24, 44);  // n_phi not a multiple of 4: exercises the tails
  auto geom = kernels::make_stencil_geom(g);
  size_t n = static_cast<size_t>(g.n_r) * g.n_phi;
  auto v = random_values(n, 5);
  // ragged inside pattern so the wall blending is exercised everywhere
  std::vector<uint8_t> inside(n);
  {
    lab::Rng rng(77);
    for (size_t k = 0; k < n; ++k) inside[k] = rng.uniform() < 0.8 ? 1 : 0;
  }

  std::vector<double> a(n), b(n);
  kernels::set_backend(Backend::scalar);
  kernels::gradsq_field(geom, v.data(), inside.data(), a.data());
  kernels::set_backend(Backend::avx2);
  kernels::gradsq_field(geom, v.data(), inside.data(), b.data());
  CHECK(std::memcmp(a.data(), b.data(), n * sizeof(double)) == 0);

  for (double p : {1.5, 2.0, 3.0, 4.0, 2.7}) {
    kernels::set_backend(Backend::scalar);
    kernels::half_power_terms(a.data(), static_cast<int>(n), p, 1e-12, b.data());
    std::vector<double> c(n);
    kernels::set_backend(Backend::avx2);
    kernels::half_power_terms(a.data(), static_cast<int>(n), p, 1e-12, c.data());
    CHECK(std::memcmp(b.data(), c.data(), n * sizeof(double)) == 0);

    kernels::set_backend(Backend::scalar);
    kernels::abs_power_terms(v.data(), static_cast<int>(n), p, b.data());
    kernels::set_backend(Backend::avx2);
    kernels::abs_power_terms(v.data(), static_cast<int>(n), p, c.data());
    CHECK(std::memcmp(b.data(), c.data(), n * sizeof(double)) == 0);
  }

  auto y0 = random_values(n, 6);
  auto y1 = y0;
  kernels::set_backend(Backend::scalar);
  kernels::axpy(0.37, v.data(), y0.data(), static_cast<int>(n));
  double d0 = kernels::dot(v.data(), y0.data(), static_cast<int>(n));
  kernels::set_backend(Backend::avx2);
  kernels::axpy(0.37, v.data(), y1.data(), static_cast<int>(n));
  double d1 = kernels::dot(v.data(), y1.data(), static_cast<int>(n));
  CHECK(std::memcmp(y0.data(), y1.data(), n * sizeof(double)) == 0);
  CHECK(d0 == d1);

  // odd lengths take the remainder path in both backends
  for (int len : {1, 2, 3, 5, 7, 9}) {
    kernels::set_backend(Backend::scalar);
    double s0 = kernels::dot(v.data(), y0.data(), len);
    kernels::set_backend(Backend::avx2);
    double s1 = kernels::dot(v.data(), y0.data(), len);
    CHECK(s0 == s1);
  }
}

TEST_CASE("stencil geometry constants") {
  PolarGrid g = build_grid(0.0, 2.0, 10, 12);
  auto geom = kernels::make_stencil_geom(g);
  CHECK(geom.a_in[0] == 0.0);  // no inner face on the first ring
  for (int i = 0; i < g.n_r; ++i) {
    CHECK(geom.a_in[i] + geom.a_out[i] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(geom.w[i] == doctest::Approx(g.r(i) * g.dr * g.dphi).epsilon(1e-15));
  }
}
