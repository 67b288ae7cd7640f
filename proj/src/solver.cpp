#include "plab/solver.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <random>
#include <cstdlib>
#include <cstdio>
#include <stdexcept>

namespace plab {

void validate(const SolverConfig& cfg) {
  if (cfg.max_iters <= 0) throw std::invalid_argument("SolverConfig: max_iters must be positive");
  if (!(cfg.tol_lambda > 0.0)) throw std::invalid_argument("SolverConfig: tol_lambda must be positive");
  if (!(cfg.tol_residual > 0.0)) throw std::invalid_argument("SolverConfig: tol_residual must be positive");
  if (!(cfg.step0 > 0.0) || !(cfg.backtrack > 0.0) || cfg.backtrack >= 1.0)
    throw std::invalid_argument("SolverConfig: invalid line-search parameters");
  if (cfg.restarts < 1) throw std::invalid_argument("SolverConfig: restarts must be at least 1");
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

double p_norm_factor(double m, double p) { return std::pow(m, -1.0 / p); }

void normalize_mass(GridFunction& v, const EnergyConfig& cfg) {
  double m = mass(v, cfg);
  if (m == 0.0) throw std::runtime_error("solver: iterate vanished");
  double f = p_norm_factor(m, cfg.p);
  kernels::scale(f, v.values.data(), static_cast<int>(v.values.size()));
}

double l2dot(const std::vector<double>& a, const std::vector<double>& b) {
  return kernels::dot(a.data(), b.data(), static_cast<int>(a.size()));
}

bool has_both_signs(const GridFunction& v) {
  bool pos = false, neg = false;
  for (double x : v.values) {
    pos = pos || x > 0.0;
    neg = neg || x < 0.0;
    if (pos && neg) return true;
  }
  return false;
}

struct DofMap {
  std::vector<int> dof;  // cell index -> dof or -1
  std::vector<int> cell; // dof -> cell index
};

DofMap make_dof_map(const DomainMask& mask) {
  const PolarGrid& g = mask.grid();
  DofMap m;
  m.dof.assign(static_cast<size_t>(g.n_r) * g.n_phi, -1);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask.is_inside(i, j)) {
        m.dof[static_cast<size_t>(i) * g.n_phi + j] = static_cast<int>(m.cell.size());
        m.cell.push_back(i * g.n_phi + j);
      }
  return m;
}

// Diagonal of the weak-form mass term, frozen at v. For p < 2 the weight
// |v|^(p-2) blows up at zeros, so it is capped; the cap only affects the
// linearized solves, never the residual that decides convergence.
std::vector<double> frozen_mass_diag(const GridFunction& v, const EnergyConfig& cfg) {
  const PolarGrid& g = v.grid;
  std::vector<double> d(v.values.size(), 0.0);
  double floor_v = 1e-4 * std::max(max_abs(v), 1e-300);
  for (int i = 0; i < g.n_r; ++i) {
    double w = g.r(i) * g.dr * g.dphi;
    for (int j = 0; j < g.n_phi; ++j) {
      if (!v.domain->is_inside(i, j)) continue;
      double a = std::abs(v.at(i, j));
      if (cfg.p < 2.0) a = std::max(a, floor_v);
      double weight = cfg.p == 2.0 ? 1.0 : std::pow(a, cfg.p - 2.0);
      d[static_cast<size_t>(i) * g.n_phi + j] = weight * w;
    }
  }
  return d;
}

// Assembles the operator linearized at frozen conductances, shifted by
// -shift * diag(mass); the 5-point conductance structure of the energy.
SpMat assemble_shifted(const GridFunction& v, const EnergyConfig& cfg, const DofMap& dofs,
                       const std::vector<double>& sigma, const std::vector<double>& mdiag, double shift) {
  const PolarGrid& g = v.grid;
  auto geom = kernels::make_stencil_geom(g);
  const int n = g.n_phi;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(dofs.cell.size() * 5);
  double diag_floor = 0.0;
  for (size_t t = 0; t < dofs.cell.size(); ++t) diag_floor += sigma[dofs.cell[t]];
  diag_floor = 1e-14 * diag_floor / std::max<size_t>(dofs.cell.size(), 1);

  for (int row = 0; row < static_cast<int>(dofs.cell.size()); ++row) {
    int cidx = dofs.cell[row];
    int i = cidx / n, j = cidx % n;
    size_t c = static_cast<size_t>(cidx);
    double diag = diag_floor - shift * mdiag[c];

    auto couple = [&](size_t nb, double interior_kappa, double wall_kappa) {
      int col = dofs.dof[nb];
      if (col >= 0) {
        diag += interior_kappa;
        trip.emplace_back(row, col, -interior_kappa);
      } else {
        diag += wall_kappa;
      }
    };

    if (i > 0) {
      size_t nb = c - n;
      couple(nb, geom.inv_dr2 * (sigma[c] * geom.a_in[i] + sigma[nb] * geom.a_out[i - 1]),
             4.0 * geom.inv_dr2 * sigma[c] * geom.a_in[i]);
    }
    if (i + 1 < g.n_r) {
      size_t nb = c + n;
      couple(nb, geom.inv_dr2 * (sigma[c] * geom.a_out[i] + sigma[nb] * geom.a_in[i + 1]),
             4.0 * geom.inv_dr2 * sigma[c] * geom.a_out[i]);
    } else {
      diag += 4.0 * geom.inv_dr2 * sigma[c] * geom.a_out[i];
    }
    size_t cl = static_cast<size_t>(i) * n + (j == 0 ? n - 1 : j - 1);
    size_t cr = static_cast<size_t>(i) * n + (j == n - 1 ? 0 : j + 1);
    couple(cl, geom.c_phi[i] * (sigma[c] + sigma[cl]), 4.0 * geom.c_phi[i] * sigma[c]);
    couple(cr, geom.c_phi[i] * (sigma[c] + sigma[cr]), 4.0 * geom.c_phi[i] * sigma[c]);

    trip.emplace_back(row, row, diag);
  }
  SpMat A(static_cast<int>(dofs.cell.size()), static_cast<int>(dofs.cell.size()));
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

struct LinearStep {
  Eigen::SparseLU<SpMat> lu;
  bool ok = false;
};

void factorize(LinearStep& ls, const SpMat& A) {
  ls.lu.compute(A);
  ls.ok = ls.lu.info() == Eigen::Success;
}

// One inverse-iteration step: solve (L - shift D) x = D v on the dofs.
bool inverse_step(const LinearStep& ls, const DofMap& dofs, const std::vector<double>& mdiag, GridFunction& v) {
  Eigen::VectorXd rhs(static_cast<int>(dofs.cell.size()));
  for (size_t t = 0; t < dofs.cell.size(); ++t) rhs[static_cast<int>(t)] = mdiag[dofs.cell[t]] * v.values[dofs.cell[t]];
  Eigen::VectorXd x = ls.lu.solve(rhs);
  if (!x.allFinite()) return false;
  // keep the orientation of the previous iterate
  double align = 0.0;
  for (size_t t = 0; t < dofs.cell.size(); ++t) align += x[static_cast<int>(t)] * v.values[dofs.cell[t]];
  double s = align < 0.0 ? -1.0 : 1.0;
  std::fill(v.values.begin(), v.values.end(), 0.0);
  for (size_t t = 0; t < dofs.cell.size(); ++t) v.values[dofs.cell[t]] = s * x[static_cast<int>(t)];
  return true;
}

void take_abs(GridFunction& v) {
  for (double& x : v.values) x = std::abs(x);
}

void canonical_sign(GridFunction& v) {
  for (double x : v.values) {
    if (x != 0.0) {
      if (x < 0.0)
        for (double& y : v.values) y = -y;
      return;
    }
  }
}

double part_quotient(const GridFunction& part, const EnergyConfig& cfg) { return rayleigh(part, cfg); }

}  // namespace

namespace solver_detail {

std::vector<double> rayleigh_gradient(const GridFunction& v, const EnergyConfig& cfg) {
  double m = mass(v, cfg);
  double lam = energy(v, cfg) / m;
  auto a = p_operator(v, cfg);
  auto md = mass_density(v, cfg);
  std::vector<double> g(a.size());
  for (size_t k = 0; k < a.size(); ++k) g[k] = cfg.p * (a[k] - lam * md[k]) / m;
  return g;
}

std::vector<double> two_sided_subgradient(const GridFunction& v, const EnergyConfig& cfg) {
  auto [plus, minus] = split_signs(v);
  double rp = rayleigh(plus, cfg);
  double rm = rayleigh(minus, cfg);
  double tie = 1e-9 * std::max(std::abs(rp), std::abs(rm));
  std::vector<double> g(v.values.size(), 0.0);
  if (rp >= rm - tie) {
    auto gp = rayleigh_gradient(plus, cfg);
    for (size_t k = 0; k < g.size(); ++k)
      if (v.values[k] > 0.0) g[k] += gp[k];
  }
  if (rm >= rp - tie) {
    auto gm = rayleigh_gradient(minus, cfg);
    for (size_t k = 0; k < g.size(); ++k)
      if (v.values[k] < 0.0) g[k] += gm[k];
  }
  return g;
}

std::pair<double, double> sided_quotients(const GridFunction& v, const EnergyConfig& cfg) {
  auto a = p_operator(v, cfg);
  const PolarGrid& g = v.grid;
  double num_p = 0.0, den_p = 0.0, num_m = 0.0, den_m = 0.0;
  for (int i = 0; i < g.n_r; ++i) {
    double w = g.r(i) * g.dr * g.dphi;
    for (int j = 0; j < g.n_phi; ++j) {
      size_t k = static_cast<size_t>(i) * g.n_phi + j;
      double x = v.values[k];
      if (x > 0.0) {
        num_p += a[k] * x;
        den_p += std::pow(x, cfg.p) * w;
      } else if (x < 0.0) {
        num_m += a[k] * x;
        den_m += std::pow(-x, cfg.p) * w;
      }
    }
  }
  if (den_p == 0.0 || den_m == 0.0) throw std::runtime_error("sided_quotients: function does not change sign");
  return {num_p / den_p, num_m / den_m};
}

std::pair<GridFunction, double> balance_signs(const GridFunction& v, const EnergyConfig& cfg) {
  auto [plus, minus] = split_signs(v);
  auto with_t = [&](double t) {
    GridFunction w = plus;
    for (size_t k = 0; k < w.values.size(); ++k) w.values[k] += t * minus.values[k];
    return w;
  };
  auto gap = [&](double t) {
    auto [qp, qm] = sided_quotients(with_t(t), cfg);
    return qp - qm;
  };
  double lo = 1e-6, hi = 1e6;
  double glo = gap(lo), ghi = gap(hi);
  if (glo * ghi > 0.0) return {v, 1.0};  // no crossing: keep as is
  for (int it = 0; it < 60; ++it) {
    double mid = std::sqrt(lo * hi);
    double gm = gap(mid);
    if (glo * gm <= 0.0) {
      hi = mid;
      ghi = gm;
    } else {
      lo = mid;
      glo = gm;
    }
  }
  double t = std::sqrt(lo * hi);
  GridFunction w = with_t(t);
  return {w, t};
}

GridFunction antisymmetric_seed(const DomainMaskPtr& mask) {
  const PolarGrid& g = mask->grid();
  GridFunction v = make_zero_function(mask);
  // mean half-width of the angular sections
  double beta_sum = 0.0;
  int rings = 0;
  int i_lo = g.n_r, i_hi = -1;
  for (int i = 0; i < g.n_r; ++i) {
    double bmax = 0.0;
    bool any = false;
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j)) {
        any = true;
        bmax = std::max(bmax, std::abs(g.phi(j)) + 0.5 * g.dphi);
      }
    if (any) {
      beta_sum += bmax;
      ++rings;
      i_lo = std::min(i_lo, i);
      i_hi = std::max(i_hi, i);
    }
  }
  double beta_bar = rings > 0 ? beta_sum / rings : pi;
  for (int i = i_lo; i <= i_hi; ++i) {
    double rho = std::sin(pi * (i - i_lo + 0.5) / (i_hi - i_lo + 1));
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j)) v.at(i, j) = rho * std::sin(g.phi(j) * pi / beta_bar);
  }
  return v;
}

GridFunction random_seed(const DomainMaskPtr& mask, uint64_t seed) {
  const PolarGrid& g = mask->grid();
  GridFunction v = make_zero_function(mask);
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j)) {
        double u = (rng() >> 11) * (1.0 / 9007199254740992.0);
        v.at(i, j) = 2.0 * u - 1.0;
      }
  return v;
}

}  // namespace solver_detail

using namespace solver_detail;

namespace {

// Projected descent on the plain Rayleigh quotient with |.| projection.
// Returns accepted iteration count.
int descend_first(GridFunction& v, const EnergyConfig& cfg, const SolverConfig& scfg, int budget,
                  std::vector<IterationRecord>& log) {
  int accepted = 0;
  double lam = rayleigh(v, cfg);
  double stall = std::max(scfg.tol_lambda, 1e-6);  // the polish phase owns the endgame
  double step = scfg.step0;
  for (int it = 0; it < budget; ++it) {
    auto grad = rayleigh_gradient(v, cfg);
    double gn = std::sqrt(l2dot(grad, grad));
    if (gn == 0.0) break;
    step = std::min(step * 2.0, 1e3 * scfg.step0);
    bool ok = false;
    for (int bt = 0; bt < scfg.max_backtracks; ++bt, step *= scfg.backtrack) {
      GridFunction trial = v;
      kernels::axpy(-step / gn, grad.data(), trial.values.data(), static_cast<int>(trial.values.size()));
      take_abs(trial);
      double m = mass(trial, cfg);
      if (m == 0.0) continue;
      double f = p_norm_factor(m, cfg.p);
      kernels::scale(f, trial.values.data(), static_cast<int>(trial.values.size()));
      double lam_t = rayleigh(trial, cfg);
      if (lam_t < lam) {
        v = std::move(trial);
        double rel = std::abs(lam - lam_t) / std::max(lam_t, 1e-300);
        lam = lam_t;
        ++accepted;
        log.push_back({accepted, lam, step, '+', "descent"});
        ok = rel >= stall;
        break;
      }
    }
    if (!ok) break;
  }
  return accepted;
}

EigenpairResult run_first(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg,
                          GridFunction v) {
  EigenpairResult res;
  normalize_mass(v, cfg);
  take_abs(v);
  if (mass(v, cfg) == 0.0) throw std::runtime_error("solve_first: seed vanished");

  int descent_budget = std::min(scfg.max_iters / 2, 80);
  int iters = descend_first(v, cfg, scfg, descent_budget, res.log);

  DofMap dofs = make_dof_map(*mask);
  double lam = weak_rayleigh(v, cfg);
  double residual = weak_residual(v, lam, cfg);
  int polish_budget = std::max(8, scfg.max_iters / 8);
  for (int outer = 0; outer < polish_budget; ++outer) {
    auto sigma = energy_detail::conductance_field(v, cfg);
    auto mdiag = frozen_mass_diag(v, cfg);
    LinearStep ls;
    factorize(ls, assemble_shifted(v, cfg, dofs, sigma, mdiag, 0.0));
    if (!ls.ok) break;
    GridFunction target = v;
    if (!inverse_step(ls, dofs, mdiag, target)) break;
    take_abs(target);

    // damped step: the raw frozen-coefficient update can overshoot away
    // from p = 2, so backtrack on the weak-form defect
    bool accepted = false;
    double lam_new = lam, res_new = residual;
    for (double t = 1.0; t >= 1.0 / 4096.0; t *= 0.5) {
      GridFunction trial = v;
      for (size_t k = 0; k < trial.values.size(); ++k)
        trial.values[k] = (1.0 - t) * v.values[k] + t * target.values[k];
      take_abs(trial);
      double m = mass(trial, cfg);
      if (m == 0.0) continue;
      kernels::scale(p_norm_factor(m, cfg.p), trial.values.data(), static_cast<int>(trial.values.size()));
      double lam_t = weak_rayleigh(trial, cfg);
      double res_t = weak_residual(trial, lam_t, cfg);
      if (res_t < residual) {
        v = std::move(trial);
        lam_new = lam_t;
        res_new = res_t;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    residual = res_new;
    ++iters;
    res.log.push_back({iters, lam_new, 0.0, '+', "polish"});
    bool stalled = std::abs(lam_new - lam) <= scfg.tol_lambda * std::max(std::abs(lam_new), 1e-300);
    lam = lam_new;
    if (residual < scfg.tol_residual && stalled) break;
  }

  normalize_mass(v, cfg);
  lam = weak_rayleigh(v, cfg);
  residual = weak_residual(v, lam, cfg);

  bool strictly_positive = true;
  const PolarGrid& g = mask->grid();
  for (int i = 0; i < g.n_r && strictly_positive; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j) && !(v.at(i, j) > 0.0)) {
        strictly_positive = false;
        break;
      }

  res.lambda = lam;
  res.u = std::move(v);
  res.residual = residual;
  res.iterations = iters;
  res.converged = residual < scfg.tol_residual && strictly_positive;
  return res;
}

struct SecondCandidate {
  EigenpairResult result;
  bool collapsed = true;
};

SecondCandidate run_second(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg,
                           GridFunction v, double lam1) {
  SecondCandidate cand;
  EigenpairResult& res = cand.result;
  if (!has_both_signs(v)) return cand;
  normalize_mass(v, cfg);

  // Phase 1: subgradient descent on the two-sided max quotient. The sign
  // split is recomputed after every accepted step.
  auto two_sided = [&](const GridFunction& w) {
    auto [plus, minus] = split_signs(w);
    return std::max(part_quotient(plus, cfg), part_quotient(minus, cfg));
  };
  double j_cur = two_sided(v);
  int iters = 0;
  int descent_budget = std::min(scfg.max_iters / 2, 80);
  double stall = std::max(scfg.tol_lambda, 1e-6);
  double step = scfg.step0;
  for (int it = 0; it < descent_budget; ++it) {
    auto grad = two_sided_subgradient(v, cfg);
    double gn = std::sqrt(l2dot(grad, grad));
    if (gn == 0.0) break;
    auto [rp, rm] = std::pair<double, double>{part_quotient(split_signs(v).first, cfg),
                                              part_quotient(split_signs(v).second, cfg)};
    char active = std::abs(rp - rm) <= 1e-9 * std::max(rp, rm) ? '*' : (rp > rm ? '+' : '-');
    step = std::min(step * 2.0, 1e3 * scfg.step0);
    bool improved = false;
    for (int bt = 0; bt < scfg.max_backtracks; ++bt, step *= scfg.backtrack) {
      GridFunction trial = v;
      kernels::axpy(-step / gn, grad.data(), trial.values.data(), static_cast<int>(trial.values.size()));
      if (!has_both_signs(trial)) continue;
      double m = mass(trial, cfg);
      if (m == 0.0) continue;
      double f = p_norm_factor(m, cfg.p);
      kernels::scale(f, trial.values.data(), static_cast<int>(trial.values.size()));
      double j_t = two_sided(trial);
      if (j_t < j_cur) {
        v = std::move(trial);
        double rel = (j_cur - j_t) / std::max(j_t, 1e-300);
        j_cur = j_t;
        ++iters;
        res.log.push_back({iters, j_cur, step, active, "descent"});
        improved = rel >= stall;
        break;
      }
    }
    if (!improved) break;
  }
  if (!has_both_signs(v)) return cand;

  // Phase 2: recombine so both sign parts carry the same one-sided weak
  // quotient, then polish with frozen-coefficient shift-inverted iterations
  // whose fixed points satisfy the discrete weak form.
  canonical_sign(v);
  {
    auto [w, t] = balance_signs(v, cfg);
    v = std::move(w);
    normalize_mass(v, cfg);
  }
  DofMap dofs = make_dof_map(*mask);
  // The two-sided objective is the trustworthy eigenvalue estimate for the
  // first shift: the full quotient of the recombined iterate is inflated by
  // the interface kink and would park the shift at a higher eigenvalue.
  double lam = std::min(weak_rayleigh(v, cfg), j_cur);
  double residual = weak_residual(v, lam, cfg);
  int polish_budget = std::max(10, scfg.max_iters / 10);
  for (int outer = 0; outer < polish_budget; ++outer) {
    auto sigma = energy_detail::conductance_field(v, cfg);
    auto mdiag = frozen_mass_diag(v, cfg);
    double margin = std::max(0.3 * (lam - lam1), 0.02 * std::abs(lam));
    double shift = lam - margin;
    LinearStep ls;
    factorize(ls, assemble_shifted(v, cfg, dofs, sigma, mdiag, shift));
    if (!ls.ok) break;
    GridFunction target = v;
    if (!inverse_step(ls, dofs, mdiag, target)) break;

    bool accepted = false;
    bool sign_died = false;
    double lam_new = lam, res_new = residual;
    for (double t = 1.0; t >= 1.0 / 4096.0; t *= 0.5) {
      GridFunction trial = v;
      for (size_t k = 0; k < trial.values.size(); ++k)
        trial.values[k] = (1.0 - t) * v.values[k] + t * target.values[k];
      if (!has_both_signs(trial)) {
        sign_died = true;
        continue;
      }
      double m = mass(trial, cfg);
      if (m == 0.0) continue;
      kernels::scale(p_norm_factor(m, cfg.p), trial.values.data(), static_cast<int>(trial.values.size()));
      double lam_t = weak_rayleigh(trial, cfg);
      double res_t = weak_residual(trial, lam_t, cfg);
      if (res_t < residual) {
        v = std::move(trial);
        lam_new = lam_t;
        res_new = res_t;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (sign_died && residual > scfg.tol_residual) {
        cand.collapsed = true;
        return cand;
      }
      break;
    }
    residual = res_new;
    ++iters;
    res.log.push_back({iters, lam_new, 0.0, '*', "polish"});
    bool stalled = std::abs(lam_new - lam) <= scfg.tol_lambda * std::max(std::abs(lam_new), 1e-300);
    lam = lam_new;
    if (residual < scfg.tol_residual && stalled) break;
  }
  if (!has_both_signs(v)) return cand;

  canonical_sign(v);
  double t_fin = 1.0;
  {
    // final recombination; a no-op at an exact eigenpair, so revert if it
    // degrades the weak-form defect
    auto [w_fin, t] = balance_signs(v, cfg);
    double m_fin = mass(w_fin, cfg);
    double c0 = p_norm_factor(m_fin, cfg.p);
    kernels::scale(c0, w_fin.values.data(), static_cast<int>(w_fin.values.size()));
    double lam_b = weak_rayleigh(w_fin, cfg);
    double res_b = weak_residual(w_fin, lam_b, cfg);
    if (res_b <= std::max(residual, scfg.tol_residual)) {
      v = std::move(w_fin);
      t_fin = t;
    }
  }
  normalize_mass(v, cfg);
  lam = weak_rayleigh(v, cfg);
  residual = weak_residual(v, lam, cfg);
  auto [qp, qm] = sided_quotients(v, cfg);
  auto parts = split_signs(v);

  double c = p_norm_factor(mass(v, cfg), cfg.p);  // parts were already normalized jointly
  cand.collapsed = false;
  res.lambda = lam;
  res.u = std::move(v);
  res.residual = residual;
  res.iterations = iters;
  res.converged = residual < scfg.tol_residual;
  res.alpha = c;
  res.beta = c * t_fin;
  res.sided_plus = qp;
  res.sided_minus = qm;
  res.j_value = std::max(part_quotient(parts.first, cfg), part_quotient(parts.second, cfg));
  return cand;
}

double sign_aligned_distance(const GridFunction& a, const GridFunction& b, const EnergyConfig& cfg) {
  GridFunction diff = a, sum = a;
  for (size_t k = 0; k < a.values.size(); ++k) {
    diff.values[k] -= b.values[k];
    sum.values[k] += b.values[k];
  }
  double dm = std::min(mass(diff, cfg), mass(sum, cfg));
  return std::pow(dm, 1.0 / cfg.p);
}

}  // namespace

EigenpairResult solve_first(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg) {
  validate(cfg);
  validate(scfg);
  EigenpairResult best;
  bool have = false;
  for (int restart = 0; restart < scfg.restarts; ++restart) {
    GridFunction seed = make_zero_function(mask);
    if (restart == 0) {
      for (int i = 0; i < mask->grid().n_r; ++i)
        for (int j = 0; j < mask->grid().n_phi; ++j)
          if (mask->is_inside(i, j)) seed.at(i, j) = 1.0;
    } else {
      seed = random_seed(mask, scfg.seed + 17 * restart);
      take_abs(seed);
    }
    EigenpairResult r = run_first(mask, cfg, scfg, std::move(seed));
    if (!have || (r.converged && !best.converged) || (r.converged == best.converged && r.lambda < best.lambda)) {
      best = std::move(r);
      have = true;
    }
    if (best.converged) break;
  }
  return best;
}

EigenpairResult solve_second(const DomainMaskPtr& mask, const EnergyConfig& cfg, const SolverConfig& scfg) {
  validate(cfg);
  validate(scfg);

  SolverConfig first_cfg = scfg;
  first_cfg.tol_lambda = std::max(scfg.tol_lambda, 1e-9);
  first_cfg.tol_residual = std::max(scfg.tol_residual, 1e-7);
  first_cfg.restarts = 1;
  EigenpairResult first = solve_first(mask, cfg, first_cfg);
  double lam1 = first.lambda;

  // coordinate-modulated copies of the first eigenfunction: sign-changing
  // seeds biased toward the second eigenspace
  const PolarGrid& g = mask->grid();
  auto modulated_seed = [&](bool use_y) {
    GridFunction v = make_zero_function(mask);
    double num = 0.0, den = 0.0;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j)
        if (mask->is_inside(i, j)) {
          double x, y;
          g.cartesian(i, j, x, y);
          double c = use_y ? y : x;
          double w = std::abs(first.u.at(i, j)) * g.r(i);
          num += c * w;
          den += w;
        }
    double mean = den > 0.0 ? num / den : 0.0;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j)
        if (mask->is_inside(i, j)) {
          double x, y;
          g.cartesian(i, j, x, y);
          double c = use_y ? y : x;
          v.at(i, j) = (c - mean) * first.u.at(i, j);
        }
    return v;
  };

  std::vector<EigenpairResult> finished;
  for (int restart = 0; restart < scfg.restarts; ++restart) {
    GridFunction seed = restart == 0   ? antisymmetric_seed(mask)
                        : restart == 1 ? modulated_seed(false)
                        : restart == 2 ? modulated_seed(true)
                                       : random_seed(mask, scfg.seed + 101 * restart);
    SecondCandidate cand = run_second(mask, cfg, scfg, std::move(seed), lam1);
    if (!cand.collapsed) finished.push_back(std::move(cand.result));
  }
  if (finished.empty()) throw std::runtime_error("solve_second: collapsed to one sign on every restart");

  int best_idx = 0;
  for (int k = 1; k < static_cast<int>(finished.size()); ++k) {
    const auto& a = finished[k];
    const auto& b = finished[best_idx];
    bool better = (a.converged && !b.converged) || (a.converged == b.converged && a.lambda < b.lambda);
    if (better) best_idx = k;
  }

  // distinct minimizers: converged candidates at the same eigenvalue level
  // whose functions differ after sign alignment
  int distinct = 1;
  EnergyConfig dc = cfg;
  double lam_best = finished[best_idx].lambda;
  for (int k = 0; k < static_cast<int>(finished.size()); ++k) {
    if (k == best_idx || !finished[k].converged) continue;
    if (std::abs(finished[k].lambda - lam_best) > 1e-6 * std::abs(lam_best)) continue;
    bool is_new = sign_aligned_distance(finished[k].u, finished[best_idx].u, dc) > 1e-3;
    for (int l = 0; l < k && is_new; ++l)
      if (l != best_idx && finished[l].converged &&
          std::abs(finished[l].lambda - lam_best) <= 1e-6 * std::abs(lam_best))
        is_new = sign_aligned_distance(finished[k].u, finished[l].u, dc) > 1e-3;
    if (is_new) ++distinct;
  }

  EigenpairResult res = std::move(finished[best_idx]);
  res.distinct_minimizers = distinct;
  return res;
}

}  // namespace plab
