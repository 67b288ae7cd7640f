#pragma once

#include <optional>
#include <utility>

#include "plab/grid_function.hpp"

namespace plab {

/// Reflection plane through the symmetry center at angle theta, restricted to
/// the half-step lattice 2*theta = k*dphi so that the angular reflection
/// j -> k - 1 - j (mod n_phi) maps cell centers to cell centers exactly.
/// Off-lattice angles are rejected rather than interpolated.
class PolarizationPlane {
 public:
  static PolarizationPlane from_index(const PolarGrid& g, int k);
  static PolarizationPlane from_theta(const PolarGrid& g, double theta);

  int index() const { return k_; }
  int n_phi() const { return n_phi_; }
  double theta() const { return 0.5 * k_ * (2.0 * pi / n_phi_); }

  int reflect_j(int j) const {
    int m = (k_ - 1 - j) % n_phi_;
    return m < 0 ? m + n_phi_ : m;
  }

  enum class Side { plus, minus, on_plane };
  /// Sign of sin(theta - phi_j); plus is the half-plane where the defining
  /// linear form (x - a) sin(theta) - y cos(theta) is positive.
  Side side(int j) const {
    int q = (k_ - 2 * j - 1) % (2 * n_phi_);
    if (q < 0) q += 2 * n_phi_;
    if (q == 0 || q == n_phi_) return Side::on_plane;
    return q > n_phi_ ? Side::plus : Side::minus;
  }

  /// Same geometric plane with the half-space roles exchanged.
  PolarizationPlane opposite() const;

 private:
  PolarizationPlane(int k, int n_phi) : k_(k), n_phi_(n_phi) {}
  int k_ = 0;
  int n_phi_ = 0;
};

enum class PolVariant { P, PTilde };

struct PolarizedFunction {
  GridFunction values;
  PolarizationPlane plane;
  PolVariant variant;
};

/// Reflection of a cell across the plane; an involution. The radius is
/// unchanged and the angular index wraps.
Cell reflect_point(const PolarizationPlane& plane, Cell c);

/// Two-point rearrangement of the values: on the plus side the smaller of
/// {v(x), v(sigma x)} is kept (P) or the larger (PTilde); cells on the plane
/// are unchanged. The result keeps the input's mask attachment.
GridFunction polarize_function(const GridFunction& v, const PolarizationPlane& plane, PolVariant variant);

PolarizedFunction make_polarized(const GridFunction& v, const PolarizationPlane& plane, PolVariant variant);

/// Set rearrangement via the characteristic function. The result can be
/// disconnected, so it is returned as a raw cell set.
CellSet polarize_mask(const DomainMask& mask, const PolarizationPlane& plane, PolVariant variant);
CellSet polarize_cells(const PolarGrid& g, const CellSet& cells, const PolarizationPlane& plane, PolVariant variant);

struct SymmetryWitness {
  double theta = 0.0;
  int plane_index = 0;
  Cell cell;
};

struct SymmetryCheck {
  bool symmetric = false;
  std::optional<SymmetryWitness> witness;
};

/// True iff the complementary polarization fixes the mask for every lattice
/// plane with theta in [0, pi]; on failure the witness names the first
/// violating plane and cell.
SymmetryCheck is_circularly_symmetric(const DomainMask& mask);

namespace detail {
// The three equivalent symmetry characterizations; the public check uses
// condition (iii). Exposed so the suites can assert their agreement.
SymmetryCheck symmetry_condition_i(const DomainMask& mask);
SymmetryCheck symmetry_condition_ii(const DomainMask& mask);
SymmetryCheck symmetry_condition_iii(const DomainMask& mask);
}  // namespace detail

}  // namespace plab
