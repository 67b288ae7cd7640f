#pragma once

#include <string>
#include <vector>

#include "plab/polar_grid.hpp"

namespace plab::kernels {

/// Runtime-selected compute backend. Both backends implement the same
/// element-wise operation sequences (plain IEEE mul/add/sqrt, no FMA), so
/// their outputs are bit-identical; the equivalence tests assert that.
enum class Backend { scalar, avx2 };

bool backend_available(Backend b);
Backend active_backend();
void set_backend(Backend b);
std::string backend_name(Backend b);

/// Per-ring stencil constants for the symmetric face-difference gradient.
struct StencilGeom {
  int n_r = 0;
  int n_phi = 0;
  double inv_dr2 = 0.0;
  std::vector<double> a_in;   // inner radial face weight  i/(2i+1)
  std::vector<double> a_out;  // outer radial face weight  (i+1)/(2i+1)
  std::vector<double> c_phi;  // 1/(2 r_i^2 dphi^2)
  std::vector<double> w;      // quadrature weight r_i dr dphi
};

StencilGeom make_stencil_geom(const PolarGrid& g);

/// Squared gradient magnitude per cell:
///   G = (a_in*dIn^2 + a_out*dOut^2)*inv_dr2 + (dL^2 + dR^2)*c_phi
/// with face differences against radial and angular neighbors. A face whose
/// neighbor lies outside the inside set is a Dirichlet wall on the face
/// itself: the difference there is 2*(0 - v_c), i.e. the slope over the half
/// cell. Neighbors beyond the grid count as outside; the angular direction
/// wraps. Fills all cells.
void gradsq_field(const StencilGeom& geom, const double* v, const uint8_t* inside, double* out);

/// out[k] = (x[k] + eps2)^(p/2); exact sqrt-ladder fast paths for
/// p in {1.5, 2, 3, 4}, std::pow otherwise.
void half_power_terms(const double* x, int n, double p, double eps2, double* out);

/// out[k] = |v[k]|^p with the same fast-path ladder.
void abs_power_terms(const double* v, int n, double p, double* out);

void axpy(double a, const double* x, double* y, int n);
void scale(double a, double* x, int n);

/// Dot product with a fixed 4-accumulator scheme shared by both backends.
double dot(const double* x, const double* y, int n);

}  // namespace plab::kernels
