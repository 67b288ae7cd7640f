#include "plab/nodal.hpp"

#include <cmath>
#include <stdexcept>

namespace plab {

namespace {

constexpr double kTauScale = 1e-6;

bool touches(const CellSet& a, const CellSet& layer) {
  for (int i = 0; i < a.n_r(); ++i)
    for (int j = 0; j < a.n_phi(); ++j)
      if (a.contains(i, j) && layer.contains(i, j)) return true;
  return false;
}

}  // namespace

NodalReport nodal_sets(const GridFunction& u, const DomainMask& mask) {
  const PolarGrid& g = mask.grid();
  NodalReport rep;
  rep.tau = kTauScale * max_abs(u);
  if (max_abs(u) == 0.0) throw std::invalid_argument("nodal_sets: no sign information");

  CellSet raw_plus(g), raw_minus(g), small(g);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      if (!mask.is_inside(i, j)) continue;
      double x = u.at(i, j);
      if (x > rep.tau)
        raw_plus.insert(i, j);
      else if (x < -rep.tau)
        raw_minus.insert(i, j);
      else
        small.insert(i, j);
    }

  // Inside endpoints of sign-change edges join the nodal set, standing in
  // for the closure of the zero level set.
  CellSet interface(g);
  Cell nb[4];
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      if (!raw_plus.contains(i, j)) continue;
      int n = cell_neighbors(g, {i, j}, nb);
      for (int k = 0; k < n; ++k)
        if (raw_minus.contains(nb[k])) {
          interface.insert(i, j);
          interface.insert(nb[k]);
        }
    }

  rep.zero_cells = set_union(small, interface);
  rep.plus_cells = CellSet(g);
  rep.minus_cells = CellSet(g);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      if (raw_plus.contains(i, j) && !interface.contains(i, j)) rep.plus_cells.insert(i, j);
      if (raw_minus.contains(i, j) && !interface.contains(i, j)) rep.minus_cells.insert(i, j);
    }

  for (int i = 0; i + 1 < g.n_r && !rep.fat_nodal_flag; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      int jr = g.wrap_j(j + 1);
      if (small.contains(i, j) && small.contains(i, jr) && small.contains(i + 1, j) && small.contains(i + 1, jr)) {
        rep.fat_nodal_flag = true;
        break;
      }
    }
  return rep;
}

double nodal_boundary_distance(const NodalReport& report, const DomainMask& mask, const BoundarySet& boundary) {
  if (report.zero_cells.empty()) throw std::invalid_argument("nodal_boundary_distance: empty nodal set");
  return cell_distance(mask, report.zero_cells, boundary.cells);
}

int theta_index_of_point(const DomainMask& mask, Cell cell) {
  const PolarGrid& g = mask.grid();
  if (!mask.is_inside(cell.i, cell.j)) throw std::invalid_argument("theta_of_point: cell is not inside the domain");
  for (int k = 1; k <= g.n_phi; ++k) {
    auto plane = PolarizationPlane::from_index(g, k);
    Cell r = reflect_point(plane, cell);
    if (!mask.is_inside(r.i, r.j)) return k;
  }
  throw std::runtime_error("theta_of_point: no reflection leaves the domain for theta in (0, pi]; full-circle sections are excluded");
}

double theta_of_point(const DomainMask& mask, Cell cell) {
  return 0.5 * theta_index_of_point(mask, cell) * mask.grid().dphi;
}

std::optional<GridFunction> normalize_boundary_sign(const GridFunction& u, NodalReport& report, const DomainMask& mask) {
  CellSet layer = mask.boundary_layer();
  bool plus_touches = touches(report.plus_cells, layer);
  bool minus_touches = touches(report.minus_cells, layer);
  if (plus_touches && minus_touches) return std::nullopt;
  if (!plus_touches) return u;
  GridFunction flipped = u;
  for (double& x : flipped.values) x = -x;
  std::swap(report.plus_cells, report.minus_cells);
  report.flipped = !report.flipped;
  return flipped;
}

ThetaStarResult theta_star(const DomainMask& mask, const NodalReport& report) {
  const PolarGrid& g = mask.grid();
  if (report.plus_cells.empty() && report.zero_cells.empty())
    throw std::invalid_argument("theta_star: no positive or nodal cells");
  CellSet layer = mask.boundary_layer();
  if (touches(report.plus_cells, layer)) throw std::invalid_argument("theta_star: no sign is interior");

  ThetaStarResult out;
  double two_h = 2.0 * g.h();
  if (!report.zero_cells.empty()) {
    double d = cell_distance(mask, report.zero_cells, boundary_of(mask).cells);
    if (d <= two_h) {
      out.degenerate = true;
      return out;
    }
  }

  CellSet scan = set_union(report.plus_cells, report.zero_cells);
  int best_k = g.n_phi + 1;
  std::vector<Cell> argmin;
  for (const Cell& c : scan.cells()) {
    int k = theta_index_of_point(mask, c);
    if (k < best_k) {
      best_k = k;
      argmin.clear();
    }
    if (k == best_k) argmin.push_back(c);
  }
  out.plane_index = best_k;
  out.theta_star = 0.5 * best_k * g.dphi;

  CellSet y(g);
  for (const Cell& c : argmin)
    if (report.zero_cells.contains(c)) y.insert(c);
  if (y.empty())
    for (const Cell& c : argmin) y.insert(c);  // quantization can push the contact off the nodal set
  out.y_cells = y;
  out.y_singleton = y.count() == 1;

  CellSet ybd(g);
  for (const Cell& c : y.cells()) {
    bool edge = false;
    for (int di = -1; di <= 1 && !edge; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        if (di == 0 && dj == 0) continue;
        int ni = c.i + di;
        if (ni < 0 || ni >= g.n_r) continue;
        Cell nbc{ni, g.wrap_j(c.j + dj)};
        if (report.zero_cells.contains(nbc) && !y.contains(nbc)) {
          edge = true;
          break;
        }
      }
    if (edge) ybd.insert(c);
  }
  out.y_boundary_cells = ybd;
  return out;
}

MovingPolarizationReport moving_polarization_experiment(const DomainMask& mask, const GridFunction& u,
                                                        const EnergyConfig& cfg) {
  const PolarGrid& g = mask.grid();
  MovingPolarizationReport rep;
  rep.two_h = 2.0 * g.h();

  NodalReport nodal = nodal_sets(u, mask);
  auto flipped = normalize_boundary_sign(u, nodal, mask);
  if (!flipped) throw std::invalid_argument("moving_polarization_experiment: no sign is interior");
  GridFunction v = *flipped;

  BoundarySet boundary = boundary_of(mask);
  rep.dist_before = nodal_boundary_distance(nodal, mask, boundary);
  if (rep.dist_before <= rep.two_h) {
    rep.skipped = true;
    rep.message = "nodal set already touches the boundary at grid scale; moving-polarization step has nothing to move";
    rep.nodal = std::move(nodal);
    return rep;
  }

  ThetaStarResult ts = theta_star(mask, nodal);
  rep.theta_star = ts.theta_star;
  rep.plane_index = ts.plane_index;
  nodal.theta_star = ts.theta_star;
  nodal.theta_star_index = ts.plane_index;
  nodal.y_cells = ts.y_cells;
  nodal.y_boundary_cells = ts.y_boundary_cells;
  nodal.y_singleton = ts.y_singleton;

  auto plane = PolarizationPlane::from_index(g, ts.plane_index);
  DomainMaskPtr container = container_mask(g);
  GridFunction v_ext = rebind_domain(v, container);
  GridFunction w = polarize_function(v_ext, plane, PolVariant::P);

  rep.support_contained = true;
  for (int i = 0; i < g.n_r && rep.support_contained; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (w.at(i, j) != 0.0 && !mask.is_inside(i, j)) {
        rep.support_contained = false;
        break;
      }

  CellSet target = set_union(polarize_cells(g, positive_support(v), plane, PolVariant::P),
                             polarize_cells(g, negative_support(v), plane, PolVariant::PTilde));
  rep.part_containment = support_of(w).is_subset_of(target);

  auto [up, um] = split_signs(v_ext);
  auto [wp, wm] = split_signs(w);
  double mass_up = mass(up, cfg), mass_wp = mass(wp, cfg);
  double mass_um = mass(um, cfg), mass_wm = mass(wm, cfg);
  rep.mass_exact_plus = mass_up == mass_wp;
  rep.mass_exact_minus = mass_um == mass_wm;
  double e_up = energy(up, cfg), e_wp = energy(wp, cfg);
  double e_um = energy(um, cfg), e_wm = energy(wm, cfg);
  rep.energy_plus_rel = e_up == 0.0 ? std::abs(e_wp - e_up) : std::abs(e_wp - e_up) / e_up;
  rep.energy_minus_rel = e_um == 0.0 ? std::abs(e_wm - e_um) : std::abs(e_wm - e_um) / e_um;
  rep.rayleigh_plus = mass_wp > 0.0 ? e_wp / mass_wp : 0.0;
  rep.rayleigh_minus = mass_wm > 0.0 ? e_wm / mass_wm : 0.0;

  NodalReport nodal_w = nodal_sets(w, mask);
  rep.dist_after = nodal_boundary_distance(nodal_w, mask, boundary);
  rep.touches_after = rep.dist_after <= rep.two_h;

  rep.w = std::move(w);
  rep.nodal = std::move(nodal);
  return rep;
}

std::vector<ProbeEstimate> normal_derivative_probe(const GridFunction& w, const DomainMask& mask,
                                                   const CellSet& probe_cells) {
  const PolarGrid& g = mask.grid();
  BoundarySet boundary = boundary_of(mask);
  std::vector<ProbeEstimate> out;
  for (const Cell& b : probe_cells.cells()) {
    if (!boundary.cells.contains(b)) throw std::invalid_argument("normal_derivative_probe: probe cell is not on the boundary");
    struct Dir {
      int di, dj;
      char orient;
    };
    const Dir dirs[4] = {{-1, 0, 'r'}, {1, 0, 'r'}, {0, -1, 'a'}, {0, 1, 'a'}};
    for (const Dir& d : dirs) {
      int i1 = b.i + d.di;
      int j1 = d.dj == 0 ? b.j : g.wrap_j(b.j + d.dj);
      if (i1 < 0 || i1 >= g.n_r || !mask.is_inside(i1, j1)) continue;
      double h = d.orient == 'r' ? g.dr : g.r(i1) * g.dphi;
      double u1 = w.at(i1, j1);
      int i2 = i1 + d.di;
      int j2 = d.dj == 0 ? j1 : g.wrap_j(j1 + d.dj);
      ProbeEstimate e;
      e.cell = b;
      e.orientation = d.orient;
      if (i2 >= 0 && i2 < g.n_r && mask.is_inside(i2, j2)) {
        double u2 = w.at(i2, j2);
        // quadratic through the zero face and the two inside centers,
        // differentiated at the face, oriented outward
        e.estimate = (u2 - 9.0 * u1) / (3.0 * h);
        e.second_order = true;
      } else {
        e.estimate = -2.0 * u1 / h;
        e.second_order = false;
      }
      out.push_back(e);
    }
  }
  return out;
}

}  // namespace plab
