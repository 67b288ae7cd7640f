#include "plab/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace plab {

void validate(const EnergyConfig& cfg) {
  if (!(cfg.p > 1.0)) throw std::invalid_argument("EnergyConfig: p must exceed 1");
  if (cfg.epsilon_reg < 0.0) throw std::invalid_argument("EnergyConfig: epsilon_reg must be nonnegative");
  if (cfg.epsilon_reg == 0.0 && cfg.p < 2.0)
    throw std::invalid_argument("EnergyConfig: epsilon_reg = 0 is only permitted for p >= 2");
}

namespace {

// Value-sorted sequential sum: permutation-invariant, so rearranging values
// within a ring cannot change the rounded result.
double sorted_sum(std::vector<double>& buf) {
  std::sort(buf.begin(), buf.end());
  double s = 0.0;
  for (double t : buf) s += t;
  return s;
}

}  // namespace

double energy(const GridFunction& v, const EnergyConfig& cfg) {
  validate(cfg);
  if (!v.domain) throw std::invalid_argument("energy: function has no domain mask");
  if (!vanishes_outside_domain(v)) throw std::invalid_argument("energy: function does not vanish outside its domain mask");
  const PolarGrid& g = v.grid;
  auto geom = kernels::make_stencil_geom(g);
  std::vector<double> gsq(v.values.size());
  kernels::gradsq_field(geom, v.values.data(), v.domain->inside().flags().data(), gsq.data());
  std::vector<double> terms(v.values.size());
  double eps2 = cfg.epsilon_reg * cfg.epsilon_reg;
  kernels::half_power_terms(gsq.data(), static_cast<int>(gsq.size()), cfg.p, eps2, terms.data());
  double total = 0.0;
  std::vector<double> ring;
  ring.reserve(g.n_phi);
  for (int i = 0; i < g.n_r; ++i) {
    ring.clear();
    for (int j = 0; j < g.n_phi; ++j)
      if (v.domain->is_inside(i, j)) ring.push_back(terms[static_cast<size_t>(i) * g.n_phi + j]);
    if (!ring.empty()) total += geom.w[i] * sorted_sum(ring);
  }
  return total;
}

double mass(const GridFunction& v, const EnergyConfig& cfg) {
  validate(cfg);
  const PolarGrid& g = v.grid;
  std::vector<double> terms(v.values.size());
  kernels::abs_power_terms(v.values.data(), static_cast<int>(v.values.size()), cfg.p, terms.data());
  double total = 0.0;
  std::vector<double> ring(static_cast<size_t>(g.n_phi));
  for (int i = 0; i < g.n_r; ++i) {
    std::copy_n(terms.begin() + static_cast<size_t>(i) * g.n_phi, g.n_phi, ring.begin());
    double w = g.r(i) * g.dr * g.dphi;
    total += w * sorted_sum(ring);
  }
  return total;
}

double rayleigh(const GridFunction& v, const EnergyConfig& cfg) {
  double m = mass(v, cfg);
  if (m == 0.0) throw std::invalid_argument("rayleigh: function is identically zero");
  return energy(v, cfg) / m;
}

namespace energy_detail {

std::vector<double> conductance_field(const GridFunction& v, const EnergyConfig& cfg) {
  const PolarGrid& g = v.grid;
  auto geom = kernels::make_stencil_geom(g);
  std::vector<double> gsq(v.values.size());
  kernels::gradsq_field(geom, v.values.data(), v.domain->inside().flags().data(), gsq.data());
  std::vector<double> sigma(v.values.size(), 0.0);
  double eps2 = cfg.epsilon_reg * cfg.epsilon_reg;
  if (cfg.p == 2.0) {
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j)
        if (v.domain->is_inside(i, j)) sigma[static_cast<size_t>(i) * g.n_phi + j] = geom.w[i];
    return sigma;
  }
  std::vector<double> hp(v.values.size());
  kernels::half_power_terms(gsq.data(), static_cast<int>(gsq.size()), cfg.p - 2.0, eps2, hp.data());
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (v.domain->is_inside(i, j)) {
        size_t k = static_cast<size_t>(i) * g.n_phi + j;
        sigma[k] = geom.w[i] * hp[k];
      }
  return sigma;
}

std::vector<double> apply_frozen_operator(const PolarGrid& g, const DomainMask& mask,
                                          const kernels::StencilGeom& geom, const std::vector<double>& sigma,
                                          const std::vector<double>& x) {
  std::vector<double> out(x.size(), 0.0);
  const int n = g.n_phi;
  for (int i = 0; i < g.n_r; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!mask.is_inside(i, j)) continue;
      size_t c = static_cast<size_t>(i) * n + j;
      double xc = x[c];
      double acc = 0.0;

      // inner radial face (vanishes at ring 0 through a_in = 0)
      if (i > 0 && mask.is_inside(i - 1, j))
        acc += geom.inv_dr2 * (sigma[c] * geom.a_in[i] + sigma[c - n] * geom.a_out[i - 1]) * (xc - x[c - n]);
      else
        acc += 4.0 * geom.inv_dr2 * sigma[c] * geom.a_in[i] * xc;

      // outer radial face
      if (i + 1 < g.n_r && mask.is_inside(i + 1, j))
        acc += geom.inv_dr2 * (sigma[c] * geom.a_out[i] + sigma[c + n] * geom.a_in[i + 1]) * (xc - x[c + n]);
      else
        acc += 4.0 * geom.inv_dr2 * sigma[c] * geom.a_out[i] * xc;

      // angular faces (wrapping)
      int jl = j == 0 ? n - 1 : j - 1;
      int jr = j == n - 1 ? 0 : j + 1;
      size_t cl = static_cast<size_t>(i) * n + jl;
      size_t cr = static_cast<size_t>(i) * n + jr;
      if (mask.is_inside(i, jl))
        acc += geom.c_phi[i] * (sigma[c] + sigma[cl]) * (xc - x[cl]);
      else
        acc += 4.0 * geom.c_phi[i] * sigma[c] * xc;
      if (mask.is_inside(i, jr))
        acc += geom.c_phi[i] * (sigma[c] + sigma[cr]) * (xc - x[cr]);
      else
        acc += 4.0 * geom.c_phi[i] * sigma[c] * xc;

      out[c] = acc;
    }
  }
  return out;
}

}  // namespace energy_detail

std::vector<double> p_operator(const GridFunction& v, const EnergyConfig& cfg) {
  validate(cfg);
  auto geom = kernels::make_stencil_geom(v.grid);
  auto sigma = energy_detail::conductance_field(v, cfg);
  return energy_detail::apply_frozen_operator(v.grid, *v.domain, geom, sigma, v.values);
}

std::vector<double> mass_density(const GridFunction& v, const EnergyConfig& cfg) {
  validate(cfg);
  const PolarGrid& g = v.grid;
  std::vector<double> out(v.values.size(), 0.0);
  for (int i = 0; i < g.n_r; ++i) {
    double w = g.r(i) * g.dr * g.dphi;
    for (int j = 0; j < g.n_phi; ++j) {
      if (!v.domain->is_inside(i, j)) continue;
      double x = v.at(i, j);
      // |x|^(p-2) x written as sign(x) |x|^(p-1): finite for every p > 1.
      double m = x == 0.0 ? 0.0 : std::copysign(std::pow(std::abs(x), cfg.p - 1.0), x);
      out[static_cast<size_t>(i) * g.n_phi + j] = m * w;
    }
  }
  return out;
}

double weak_residual(const GridFunction& u, double lambda, const EnergyConfig& cfg) {
  auto a = p_operator(u, cfg);
  auto m = mass_density(u, cfg);
  const PolarGrid& g = u.grid;
  double worst = 0.0;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (u.domain->is_inside(i, j)) {
        size_t k = static_cast<size_t>(i) * g.n_phi + j;
        worst = std::max(worst, std::abs(a[k] - lambda * m[k]));
      }
  return worst;
}

double weak_rayleigh(const GridFunction& v, const EnergyConfig& cfg) {
  auto a = p_operator(v, cfg);
  double num = kernels::dot(a.data(), v.values.data(), static_cast<int>(a.size()));
  double den = mass(v, cfg);
  if (den == 0.0) throw std::invalid_argument("weak_rayleigh: function is identically zero");
  return num / den;
}

}  // namespace plab
