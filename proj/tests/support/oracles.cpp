#include "support/oracles.hpp"

#include <cmath>
#include <deque>
#include <stdexcept>

namespace oracle {

using plab::Cell;
using plab::CellSet;
using plab::DomainMask;
using plab::DomainMaskPtr;
using plab::GridFunction;
using plab::PolarGrid;

double bessel_zero(int nu, double lo, double hi) {
  auto f = [nu](double x) { return std::cyl_bessel_j(static_cast<double>(nu), x); };
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw std::runtime_error("bessel_zero: interval does not bracket a root");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if (flo * fm <= 0.0) {
      hi = mid;
      fhi = fm;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

struct Assembly {
  Eigen::MatrixXd K;
  Eigen::VectorXd D;
  std::vector<int> cells;
  std::vector<int> dof;  // flat cell -> dof or -1
};

Assembly assemble(const DomainMask& mask) {
  const PolarGrid& g = mask.grid();
  Assembly a;
  a.dof.assign(static_cast<size_t>(g.n_r) * g.n_phi, -1);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask.is_inside(i, j)) {
        a.dof[static_cast<size_t>(i) * g.n_phi + j] = static_cast<int>(a.cells.size());
        a.cells.push_back(i * g.n_phi + j);
      }
  int n = static_cast<int>(a.cells.size());
  a.K = Eigen::MatrixXd::Zero(n, n);
  a.D = Eigen::VectorXd::Zero(n);

  auto face = [&](int row, int i_nb, int j_nb, double kappa) {
    // interior faces carry the face conductance; a Dirichlet wall on the
    // face doubles it (the slope is taken over the half cell)
    if (i_nb >= 0 && i_nb < g.n_r && mask.is_inside(i_nb, j_nb)) {
      int col = a.dof[static_cast<size_t>(i_nb) * g.n_phi + j_nb];
      a.K(row, row) += kappa;
      a.K(row, col) -= kappa;
    } else {
      a.K(row, row) += 2.0 * kappa;
    }
  };

  for (int row = 0; row < n; ++row) {
    int ci = a.cells[row] / g.n_phi;
    int cj = a.cells[row] % g.n_phi;
    a.D[row] = g.r(ci) * g.dr * g.dphi;
    if (ci > 0) face(row, ci - 1, cj, ci * g.dphi);
    face(row, ci + 1, cj, (ci + 1) * g.dphi);
    double ang = g.dr / (g.r(ci) * g.dphi);
    face(row, ci, g.wrap_j(cj - 1), ang);
    face(row, ci, g.wrap_j(cj + 1), ang);
  }
  return a;
}

}  // namespace

DenseEig dense_p2_eigs(const DomainMask& mask, int count) {
  Assembly a = assemble(mask);
  int n = static_cast<int>(a.cells.size());
  Eigen::MatrixXd B = a.D.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(a.K, B);
  if (solver.info() != Eigen::Success) throw std::runtime_error("dense_p2_eigs: eigensolver failed");
  DenseEig out;
  out.cells = a.cells;
  count = std::min(count, n);
  for (int k = 0; k < count; ++k) {
    out.eigenvalues.push_back(solver.eigenvalues()[k]);
    std::vector<double> vec(n);
    for (int d = 0; d < n; ++d) vec[d] = solver.eigenvectors()(d, k);
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

double dense_p2_rayleigh(const DomainMask& mask, const GridFunction& v) {
  Assembly a = assemble(mask);
  int n = static_cast<int>(a.cells.size());
  Eigen::VectorXd x(n);
  for (int d = 0; d < n; ++d) x[d] = v.values[a.cells[d]];
  double num = x.dot(a.K * x);
  double den = x.dot(a.D.asDiagonal() * x);
  return num / den;
}

GridFunction to_grid_function(const DomainMaskPtr& mask, const DenseEig& eig, int which) {
  GridFunction f = plab::make_zero_function(mask);
  const auto& vec = eig.vectors.at(which);
  for (size_t d = 0; d < vec.size(); ++d) f.values[eig.cells[d]] = vec[d];
  return f;
}

plab::PolarGrid half_disk_grid(int n_r, int n_phi) {
  return plab::build_grid(0.0, static_cast<double>(n_r) / (n_r - 2.0), n_r, n_phi);
}

DomainMaskPtr half_disk(int n_r, int n_phi) {
  PolarGrid g = half_disk_grid(n_r, n_phi);
  CellSet inside(g);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (g.r(i) < 1.0 && std::abs(g.phi(j)) < plab::pi / 2.0) inside.insert(i, j);
  return plab::make_mask(g, std::move(inside));
}

double brute_force_distance(const PolarGrid& g, const std::vector<Cell>& a, const std::vector<Cell>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (const Cell& ca : a)
    for (const Cell& cb : b) {
      double xa = g.r(ca.i) * std::cos(g.phi(ca.j));
      double ya = g.r(ca.i) * std::sin(g.phi(ca.j));
      double xb = g.r(cb.i) * std::cos(g.phi(cb.j));
      double yb = g.r(cb.i) * std::sin(g.phi(cb.j));
      best = std::min(best, std::hypot(xa - xb, ya - yb));
    }
  return best;
}

DomainMaskPtr random_blob_mask(const PolarGrid& g, uint64_t seed, int target_cells) {
  uint64_t state = seed;
  auto next = [&state]() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  CellSet inside(g);
  int i0 = g.n_r / 3 + static_cast<int>(next() % std::max(1, g.n_r / 4));
  int j0 = static_cast<int>(next() % static_cast<uint64_t>(g.n_phi));
  inside.insert(i0, j0);
  std::vector<Cell> frontier{{i0, j0}};
  Cell nb[4];
  while (inside.count() < target_cells && !frontier.empty()) {
    size_t pick = next() % frontier.size();
    Cell c = frontier[pick];
    int n = plab::cell_neighbors(g, c, nb);
    bool grew = false;
    for (int k = 0; k < n; ++k) {
      Cell cand = nb[(k + next()) % n];
      if (cand.i + 1 >= g.n_r) continue;  // keep the outer ring empty
      if (!inside.contains(cand)) {
        inside.insert(cand);
        frontier.push_back(cand);
        grew = true;
        break;
      }
    }
    if (!grew) frontier.erase(frontier.begin() + static_cast<long>(pick));
  }
  return plab::make_mask(g, std::move(inside));
}

}  // namespace oracle
