#include "plab/lab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace plab::lab {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// configuration

DomainSpec domain_from_doc(const cfg::Document& doc, const std::string& prefix) {
  DomainSpec d;
  d.center_a = doc.number(prefix + "center_a");
  d.r_max = doc.number(prefix + "r_max");
  d.n_r = doc.has(prefix + "n_r") ? static_cast<int>(doc.number(prefix + "n_r")) : 0;
  d.n_phi = doc.has(prefix + "n_phi") ? static_cast<int>(doc.number(prefix + "n_phi")) : 0;
  for (const auto& pt : doc.get(prefix + "points").as_array()) {
    const auto& pair = pt.as_array();
    if (pair.size() != 2) throw std::runtime_error("domain spec: control points must be [r, beta] pairs");
    d.points.emplace_back(pair[0].as_number(), pair[1].as_number());
  }
  return d;
}

DomainSpec load_domain_spec(const std::string& path) {
  return domain_from_doc(cfg::Document::parse_file(path), "");
}

ExperimentKind kind_from_string(const std::string& s) {
  if (s == "first") return ExperimentKind::first;
  if (s == "second") return ExperimentKind::second;
  if (s == "nodal") return ExperimentKind::nodal;
  if (s == "moving-polarization") return ExperimentKind::moving_polarization;
  if (s == "symmetry-check") return ExperimentKind::symmetry_check;
  if (s == "lemma-suite") return ExperimentKind::lemma_suite;
  if (s == "refinement-sweep") return ExperimentKind::refinement_sweep;
  throw std::runtime_error("unknown experiment kind: " + s);
}

std::string kind_to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::first: return "first";
    case ExperimentKind::second: return "second";
    case ExperimentKind::nodal: return "nodal";
    case ExperimentKind::moving_polarization: return "moving-polarization";
    case ExperimentKind::symmetry_check: return "symmetry-check";
    case ExperimentKind::lemma_suite: return "lemma-suite";
    case ExperimentKind::refinement_sweep: return "refinement-sweep";
  }
  return "?";
}

ExperimentConfig parse_experiment(const cfg::Document& doc, const std::string& base_dir) {
  ExperimentConfig c;
  c.kind = kind_from_string(doc.get("kind").as_string());
  c.output_dir = doc.get("output").as_string();
  c.seed = static_cast<uint64_t>(doc.number_or("seed", 1));
  c.config_hash = doc.hash();

  if (doc.has("p")) {
    for (const auto& v : doc.get("p").as_array()) c.p_list.push_back(v.as_number());
  }
  if (c.p_list.empty()) throw std::runtime_error("experiment config: nothing to run (empty p list)");
  for (double p : c.p_list)
    if (!(p > 1.0)) throw std::runtime_error("experiment config: every p must exceed 1");

  if (doc.has("domain_file")) {
    fs::path p = doc.get("domain_file").as_string();
    if (p.is_relative() && !base_dir.empty()) p = fs::path(base_dir) / p;
    c.domain = load_domain_spec(p.string());
  } else {
    c.domain = domain_from_doc(doc, "domain.");
  }

  if (doc.has("grids")) {
    for (const auto& g : doc.get("grids").as_array()) {
      const auto& pair = g.as_array();
      if (pair.size() != 2) throw std::runtime_error("experiment config: grids must be [n_r, n_phi] pairs");
      c.grids.emplace_back(static_cast<int>(pair[0].as_number()), static_cast<int>(pair[1].as_number()));
    }
  } else if (c.domain.n_r > 0 && c.domain.n_phi > 0) {
    c.grids.emplace_back(c.domain.n_r, c.domain.n_phi);
  }
  if (c.grids.empty()) throw std::runtime_error("experiment config: nothing to run (no grids)");
  for (auto [nr, np] : c.grids) build_grid(c.domain.center_a, c.domain.r_max, nr, np);  // validate early

  c.solver.max_iters = static_cast<int>(doc.number_or("solver.max_iters", c.solver.max_iters));
  c.solver.tol_lambda = doc.number_or("solver.tol_lambda", c.solver.tol_lambda);
  c.solver.tol_residual = doc.number_or("solver.tol_residual", c.solver.tol_residual);
  c.solver.restarts = static_cast<int>(doc.number_or("solver.restarts", c.solver.restarts));
  c.solver.seed = static_cast<uint64_t>(doc.number_or("solver.seed", static_cast<double>(c.seed)));
  validate(c.solver);

  if (doc.has("epsilon_reg")) c.epsilon_reg = doc.number("epsilon_reg");
  c.suite_masks = static_cast<int>(doc.number_or("suite.masks", c.suite_masks));
  c.suite_functions = static_cast<int>(doc.number_or("suite.functions", c.suite_functions));
  if (c.suite_masks < 1 || c.suite_functions < 1)
    throw std::runtime_error("experiment config: corpus sizes must be at least 1");
  return c;
}

ExperimentConfig load_experiment(const std::string& path) {
  auto doc = cfg::Document::parse_file(path);
  return parse_experiment(doc, fs::path(path).parent_path().string());
}

std::string resolve_output_dir(const std::string& dir) {
  fs::path p = dir;
  if (p.is_relative()) {
    if (const char* root = std::getenv("PLAB_OUTPUT_ROOT")) p = fs::path(root) / p;
  }
  return p.string();
}

// ---------------------------------------------------------------------------
// helpers

namespace {

EnergyConfig energy_config_for(const ExperimentConfig& c, double p) {
  EnergyConfig e;
  e.p = p;
  if (c.epsilon_reg)
    e.epsilon_reg = *c.epsilon_reg;
  else
    e.epsilon_reg = p < 2.0 ? 1e-8 / (2.0 * c.domain.r_max) : 0.0;
  return e;
}

std::string solver_log_text(const EigenpairResult& r) {
  std::ostringstream os;
  for (const auto& rec : r.log) {
    char line[160];
    std::snprintf(line, sizeof line, "iter=%d value=%.17g step=%.6g active=%c phase=%s\n", rec.iteration, rec.value,
                  rec.step, rec.active, rec.phase);
    os << line;
  }
  return os.str();
}

std::string eigen_summary(const EigenpairResult& r, bool second) {
  std::ostringstream os;
  char buf[256];
  std::snprintf(buf, sizeof buf, "lambda = %.17g\nresidual = %.17g\niterations = %d\nconverged = %s\n", r.lambda,
                r.residual, r.iterations, r.converged ? "true" : "false");
  os << buf;
  if (second) {
    std::snprintf(buf, sizeof buf,
                  "alpha = %.17g\nbeta = %.17g\nsided_plus = %.17g\nsided_minus = %.17g\nj_value = %.17g\n"
                  "distinct_minimizers = %d\n",
                  r.alpha, r.beta, r.sided_plus, r.sided_minus, r.j_value, r.distinct_minimizers);
    os << buf;
  }
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// corpus generators

Rng::Rng(uint64_t seed) : state(seed * 0x9e3779b97f4a7c15ULL + 0x243f6a8885a308d3ULL) {}

uint64_t Rng::next() {
  // splitmix64: deterministic across platforms and standard libraries
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return (next() >> 11) * (1.0 / 9007199254740992.0); }
double Rng::uniform(double a, double b) { return a + (b - a) * uniform(); }
int Rng::uniform_int(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1)); }

RadialProfile random_profile(const PolarGrid& grid, Rng& rng) {
  double r_lim = grid.r_max * (grid.n_r - 2.0) / grid.n_r * 0.98;
  double beta_floor = std::max(2.0 * grid.dphi, 0.2);
  int n_pts = rng.uniform_int(2, 4);
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < n_pts; ++k)
    pts.emplace_back(rng.uniform(0.2 * r_lim, r_lim), rng.uniform(beta_floor, 0.92 * pi));
  std::sort(pts.begin(), pts.end());
  pts.front().first = 1e-9;  // reach the center
  return RadialProfile(pts);
}

DomainMaskPtr random_symmetric_mask(const PolarGrid& grid, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      return make_profile_mask(grid, random_profile(grid, rng));
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::runtime_error("random_symmetric_mask: could not generate a valid mask");
}

DomainMaskPtr perturb_one_cell(const DomainMaskPtr& mask, Rng& rng) {
  const PolarGrid& g = mask->grid();
  CellSet layer = mask->boundary_layer();
  std::vector<Cell> candidates;
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (mask->is_inside(i, j) && g.phi(j) > 0.0 && !layer.contains(i, j)) candidates.push_back({i, j});
  if (candidates.empty()) {
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j)
        if (mask->is_inside(i, j) && g.phi(j) > 0.0) candidates.push_back({i, j});
  }
  if (candidates.empty()) throw std::runtime_error("perturb_one_cell: no cell at phi > 0 to remove");
  int start = rng.uniform_int(0, static_cast<int>(candidates.size()) - 1);
  for (size_t k = 0; k < candidates.size(); ++k) {
    Cell c = candidates[(start + k) % candidates.size()];
    CellSet inside = mask->inside();
    inside.erase(c.i, c.j);
    try {
      return make_mask(g, std::move(inside));
    } catch (const std::invalid_argument&) {
      continue;  // removal disconnected the domain; try another cell
    }
  }
  throw std::runtime_error("perturb_one_cell: every removal disconnects the domain");
}

DomainMaskPtr reversed_arc_mask(const PolarGrid& grid, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    RadialProfile prof = random_profile(grid, rng);
    CellSet inside(grid);
    for (int i = 0; i < grid.n_r; ++i) {
      double b = prof.beta(grid.r(i));
      if (b <= 0.0) continue;
      for (int j = 0; j < grid.n_phi; ++j) {
        double d = std::abs(grid.phi(j));
        double from_pi = pi - d;  // angular distance to phi = pi
        if (from_pi < b) inside.insert(i, j);
      }
    }
    try {
      return make_mask(grid, std::move(inside));
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::runtime_error("reversed_arc_mask: could not generate a valid mask");
}

GridFunction random_function(const DomainMaskPtr& support_mask, Rng& rng) {
  GridFunction f = make_zero_function(container_mask(support_mask->grid()));
  const PolarGrid& g = support_mask->grid();
  for (int i = 0; i < g.n_r; ++i)
    for (int j = 0; j < g.n_phi; ++j)
      if (support_mask->is_inside(i, j)) f.at(i, j) = rng.uniform(-1.0, 1.0);
  return f;
}

std::pair<DomainMaskPtr, DomainMaskPtr> random_nested_masks(const PolarGrid& grid, Rng& rng) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      RadialProfile outer = random_profile(grid, rng);
      double s = rng.uniform(0.45, 0.9);
      std::vector<std::pair<double, double>> inner_pts;
      for (auto [r, b] : outer.control_points()) inner_pts.emplace_back(r, s * b);
      RadialProfile inner(inner_pts);
      auto big = make_profile_mask(grid, outer);
      auto small = make_profile_mask(grid, inner);
      if (!small->inside().is_subset_of(big->inside())) continue;
      return {small, big};
    } catch (const std::invalid_argument&) {
      continue;
    }
  }
  throw std::runtime_error("random_nested_masks: could not generate a valid pair");
}

// ---------------------------------------------------------------------------
// lemma suite

namespace {

struct PolOps {
  // pairing index used by the suite's own rearrangement; the mutation hook
  // replaces it with a deliberately wrong one
  std::function<int(const PolarizationPlane&, int)> reflect_j;

  GridFunction polarize(const GridFunction& v, const PolarizationPlane& plane, PolVariant variant) const {
    GridFunction out = v;
    const PolarGrid& g = v.grid;
    for (int i = 0; i < g.n_r; ++i)
      for (int j = 0; j < g.n_phi; ++j) {
        if (plane.side(j) != PolarizationPlane::Side::plus) continue;
        int jr = reflect_j(plane, j);
        double a = v.at(i, j), b = v.at(i, jr);
        double lo = std::min(a, b), hi = std::max(a, b);
        if (variant == PolVariant::P) {
          out.at(i, j) = lo;
          out.at(i, jr) = hi;
        } else {
          out.at(i, j) = hi;
          out.at(i, jr) = lo;
        }
      }
    return out;
  }
};

PolOps make_ops(SuiteMutation m) {
  PolOps ops;
  if (m == SuiteMutation::none)
    ops.reflect_j = [](const PolarizationPlane& p, int j) { return p.reflect_j(j); };
  else
    ops.reflect_j = [](const PolarizationPlane& p, int j) {  // off by one: pairs are not mirror images
      int n = p.n_phi();
      int r = (p.index() - j) % n;
      return r < 0 ? r + n : r;
    };
  return ops;
}

struct PropertyOutcome {
  long cases = 0;
  long failures = 0;
  std::string first_witness;
};

using PropertyFn = std::function<PropertyOutcome(int n_r, int n_phi)>;

PropertyResult evaluate_property(const std::string& name, const SuiteOptions& opt, const PropertyFn& fn) {
  PropertyResult res;
  res.name = name;
  PropertyOutcome full = fn(opt.n_r, opt.n_phi);
  res.cases = full.cases;
  res.passes = full.cases - full.failures;
  if (full.failures == 0) return res;

  // minimize the witness by halving the grid while the property still fails
  int nr = opt.n_r, np = opt.n_phi;
  std::string witness = "grid " + std::to_string(nr) + "x" + std::to_string(np) + ": " + full.first_witness;
  while (nr / 2 >= 8 && np / 2 >= 8 && (np / 2) % 2 == 0) {
    PropertyOutcome smaller = fn(nr / 2, np / 2);
    if (smaller.failures == 0) break;
    nr /= 2;
    np /= 2;
    witness = "grid " + std::to_string(nr) + "x" + std::to_string(np) + ": " + smaller.first_witness;
  }
  res.witness = witness;
  return res;
}

std::string cell_str(Cell c) { return "(" + std::to_string(c.i) + "," + std::to_string(c.j) + ")"; }

}  // namespace

SuiteRecord lemma_suite(const SuiteOptions& opt) {
  if (opt.masks < 1 || opt.functions < 1) throw std::invalid_argument("lemma_suite: corpus sizes must be at least 1");
  SuiteRecord record;
  PolOps ops = make_ops(opt.mutation);
  const double p_values[2] = {2.0, 3.0};

  auto grid_for = [&](int nr, int np) { return build_grid(0.0, 1.0, nr, np); };

  // 1 + 2: exact rearrangement of the p-mass and commutation with the sign split
  record.properties.push_back(evaluate_property("mass-rearrangement", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed);
    for (int f = 0; f < opt.functions; ++f) {
      auto mask = random_symmetric_mask(g, rng);
      GridFunction v = random_function(mask, rng);
      auto [vp, vm] = split_signs(v);
      EnergyConfig ec[2] = {{p_values[0], 0.0}, {p_values[1], 0.0}};
      double mp[2] = {mass(vp, ec[0]), mass(vp, ec[1])};
      double mm[2] = {mass(vm, ec[0]), mass(vm, ec[1])};
      for (int k = 0; k < 2 * np; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        for (PolVariant var : {PolVariant::P, PolVariant::PTilde}) {
          GridFunction pp = ops.polarize(vp, plane, var);
          GridFunction pm = ops.polarize(vm, plane, var);
          for (int e = 0; e < 2; ++e) {
            ++out.cases;
            bool ok = mass(pp, ec[e]) == mp[e] && mass(pm, ec[e]) == mm[e];
            if (!ok && ++out.failures == 1)
              out.first_witness = "function " + std::to_string(f) + " plane k=" + std::to_string(k) +
                                  " p=" + std::to_string(p_values[e]) + ": p-mass changed";
          }
        }
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("sign-split-commutes", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 1);
    for (int f = 0; f < opt.functions; ++f) {
      auto mask = random_symmetric_mask(g, rng);
      GridFunction v = random_function(mask, rng);
      auto [vp, vm] = split_signs(v);
      for (int k = 0; k < 2 * np; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        for (PolVariant var : {PolVariant::P, PolVariant::PTilde}) {
          ++out.cases;
          GridFunction w = ops.polarize(v, plane, var);
          auto [wp, wm] = split_signs(w);
          GridFunction pvp = ops.polarize(vp, plane, var);
          GridFunction pvm = ops.polarize(vm, plane, var);
          bool ok = wp.values == pvp.values && wm.values == pvm.values;
          if (!ok && ++out.failures == 1)
            out.first_witness =
                "function " + std::to_string(f) + " plane k=" + std::to_string(k) + ": split does not commute";
        }
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("complement-identities", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 2);
    int n_funcs = std::max(1, opt.functions / 4);
    for (int f = 0; f < n_funcs; ++f) {
      auto mask = random_symmetric_mask(g, rng);
      GridFunction v = random_function(mask, rng);
      for (int k = 0; k < 2 * np; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        ++out.cases;
        GridFunction tilde = ops.polarize(v, plane, PolVariant::PTilde);
        GridFunction neg = v;
        for (double& x : neg.values) x = -x;
        GridFunction via_neg = ops.polarize(neg, plane, PolVariant::P);
        for (double& x : via_neg.values) x = -x;
        GridFunction via_shift = ops.polarize(v, plane.opposite(), PolVariant::P);
        bool ok = tilde.values == via_neg.values && tilde.values == via_shift.values;
        if (!ok && ++out.failures == 1)
          out.first_witness = "function " + std::to_string(f) + " plane k=" + std::to_string(k) +
                              ": complementary polarization identities broke";
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("energy-reflection", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 3);
    int n_funcs = std::max(1, opt.functions / 4);
    for (int f = 0; f < n_funcs; ++f) {
      auto mask = random_symmetric_mask(g, rng);
      GridFunction v = random_function(mask, rng);
      for (int k = 0; k < 2 * np; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        for (double p : p_values) {
          EnergyConfig ec{p, 0.0};
          ++out.cases;
          // anti-polarize first, so the subsequent polarization is a pure
          // reflection of every pair: the energy must be preserved exactly
          GridFunction aligned = ops.polarize(v, plane, PolVariant::PTilde);
          GridFunction swapped = ops.polarize(aligned, plane, PolVariant::P);
          double e0 = energy(aligned, ec);
          double e1 = energy(swapped, ec);
          bool ok = std::abs(e1 - e0) <= 10.0 * std::numeric_limits<double>::epsilon() * std::abs(e0);
          if (!ok && ++out.failures == 1)
            out.first_witness = "function " + std::to_string(f) + " plane k=" + std::to_string(k) +
                                " p=" + std::to_string(p) + ": energy changed under aligned polarization";
        }
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("involution", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    for (int k = 0; k < 2 * np; ++k) {
      auto plane = PolarizationPlane::from_index(g, k);
      ++out.cases;
      for (int j = 0; j < np; ++j) {
        int jr = ops.reflect_j(plane, j);
        if (ops.reflect_j(plane, jr) != j || plane.side(j) == plane.side(jr) ||
            (plane.side(j) == PolarizationPlane::Side::on_plane) != (jr == j)) {
          if (++out.failures == 1)
            out.first_witness = "plane k=" + std::to_string(k) + " j=" + std::to_string(j) + ": reflection is not a"
                                " side-swapping involution";
          break;
        }
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("mask-monotonicity", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 4);
    for (int m = 0; m < opt.masks; ++m) {
      auto [inner, outer] = random_nested_masks(g, rng);
      for (int k = 0; k < 2 * np; ++k) {
        auto plane = PolarizationPlane::from_index(g, k);
        for (PolVariant var : {PolVariant::P, PolVariant::PTilde}) {
          ++out.cases;
          CellSet pi = polarize_mask(*inner, plane, var);
          CellSet po = polarize_mask(*outer, plane, var);
          if (!pi.is_subset_of(po) && ++out.failures == 1)
            out.first_witness = "pair " + std::to_string(m) + " plane k=" + std::to_string(k) + ": inclusion lost";
        }
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("symmetry-three-way", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 5);
    auto classify = [&](const DomainMask& mask, bool expect) -> std::optional<std::string> {
      auto a = detail::symmetry_condition_i(mask);
      auto b = detail::symmetry_condition_ii(mask);
      auto c = detail::symmetry_condition_iii(mask);
      if (a.symmetric != b.symmetric || b.symmetric != c.symmetric) return "conditions disagree";
      if (c.symmetric != expect) {
        if (!expect && c.witness) return std::nullopt;  // impossible branch, witness only on false
        return expect ? std::optional<std::string>("symmetric mask classified as asymmetric")
                      : std::optional<std::string>("perturbed mask classified as symmetric");
      }
      if (!expect && !c.witness) return "asymmetric verdict without witness";
      return std::nullopt;
    };
    for (int m = 0; m < opt.masks; ++m) {
      auto sym = random_symmetric_mask(g, rng);
      ++out.cases;
      if (auto w = classify(*sym, true)) {
        if (++out.failures == 1) out.first_witness = "mask " + std::to_string(m) + ": " + *w;
      }
      auto pert = perturb_one_cell(sym, rng);
      ++out.cases;
      if (auto w = classify(*pert, false)) {
        if (++out.failures == 1) out.first_witness = "perturbed mask " + std::to_string(m) + ": " + *w;
      }
    }
    return out;
  }));

  record.properties.push_back(evaluate_property("support-containment", opt, [&](int nr, int np) {
    PropertyOutcome out;
    PolarGrid g = grid_for(nr, np);
    Rng rng(opt.seed + 6);
    int n_funcs = std::max(1, opt.functions);
    for (int f = 0; f < n_funcs; ++f) {
      auto mask = random_symmetric_mask(g, rng);
      GridFunction v = random_function(mask, rng);
      int k = static_cast<int>(rng.next() % static_cast<uint64_t>(2 * np));
      auto plane = PolarizationPlane::from_index(g, k);
      ++out.cases;
      GridFunction w = ops.polarize(v, plane, PolVariant::P);
      CellSet target = set_union(polarize_cells(g, positive_support(v), plane, PolVariant::P),
                                 polarize_cells(g, negative_support(v), plane, PolVariant::PTilde));
      if (!support_of(w).is_subset_of(target) && ++out.failures == 1)
        out.first_witness = "function " + std::to_string(f) + " plane k=" + std::to_string(k) + ": support escaped";
    }
    return out;
  }));

  CsvWriter csv({"property", "cases", "passes", "witness"});
  for (const auto& p : record.properties) {
    record.all_pass = record.all_pass && p.ok();
    csv.begin_row();
    csv.set("property", p.name);
    csv.set("cases", static_cast<double>(p.cases));
    csv.set("passes", static_cast<double>(p.passes));
    csv.set("witness", p.witness);
  }
  record.csv = csv.str();
  return record;
}

// ---------------------------------------------------------------------------
// experiment runner

namespace {

struct RunContext {
  const ExperimentConfig& config;
  fs::path out;
  CsvWriter csv;
  RunRecord record;
};

std::string run_dir_name(int idx, double p, int nr, int np) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "run_%03d_p%g_%dx%d", idx, p, nr, np);
  return buf;
}

void write_nodal_outputs(const fs::path& dir, const PolarGrid& g, const NodalReport& rep) {
  export_raster(rep.zero_cells, g, (dir / "nodal.pgm").string());
  if (!rep.y_cells.empty()) export_raster(rep.y_cells, g, (dir / "ycells.pgm").string());
  std::ostringstream os;
  os << "tau = " << rep.tau << "\nflipped = " << (rep.flipped ? "true" : "false")
     << "\nfat_nodal = " << (rep.fat_nodal_flag ? "true" : "false") << "\ndist_to_boundary = " << rep.dist_to_boundary
     << "\n";
  if (rep.theta_star) os << "theta_star = " << *rep.theta_star << "\n";
  os << "y_cells = " << rep.y_cells.count() << "\ny_boundary_cells = " << rep.y_boundary_cells.count()
     << "\ny_singleton = " << (rep.y_singleton ? "true" : "false")
     << "\ndegenerate = " << (rep.degenerate ? "true" : "false") << "\nregularity = " << rep.regularity_note << "\n";
  write_text_file((dir / "nodal.txt").string(), os.str());
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
  auto t0 = std::chrono::steady_clock::now();

  fs::path out = resolve_output_dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw std::runtime_error("run: cannot create output directory " + out.string());
  // probe writability before any solve
  write_text_file((out / "record.txt").string(), "config_hash = " + config.config_hash + "\n");

  RunRecord record;
  record.config_hash = config.config_hash;

  if (config.kind == ExperimentKind::lemma_suite) {
    SuiteOptions opt;
    opt.seed = config.seed;
    opt.masks = config.suite_masks;
    opt.functions = config.suite_functions;
    SuiteRecord suite = lemma_suite(opt);
    record.csv = suite.csv;
    if (!suite.all_pass) {
      ++record.errors;
      for (const auto& p : suite.properties)
        if (!p.ok()) record.notes.push_back(p.name + " failed: " + p.witness);
    }
    write_text_file((out / "runs.csv").string(), record.csv);
  } else if (config.kind == ExperimentKind::symmetry_check) {
    CsvWriter csv({"n_r", "n_phi", "symmetric", "witness_theta", "witness_i", "witness_j"});
    for (auto [nr, np] : config.grids) {
      PolarGrid g = build_grid(config.domain.center_a, config.domain.r_max, nr, np);
      auto mask = make_profile_mask(g, config.domain.profile());
      auto check = is_circularly_symmetric(*mask);
      csv.begin_row();
      csv.set("n_r", static_cast<double>(nr));
      csv.set("n_phi", static_cast<double>(np));
      csv.set("symmetric", check.symmetric);
      if (check.witness) {
        csv.set("witness_theta", check.witness->theta);
        csv.set("witness_i", static_cast<double>(check.witness->cell.i));
        csv.set("witness_j", static_cast<double>(check.witness->cell.j));
      }
      RunRow row;
      row.n_r = nr;
      row.n_phi = np;
      row.symmetric = check.symmetric;
      record.rows.push_back(row);
    }
    record.csv = csv.str();
    write_text_file((out / "runs.csv").string(), record.csv);
  } else {
    CsvWriter csv({"p", "n_r", "n_phi", "lambda1", "lambda2", "dist_Z_boundary", "theta_star", "converged1",
                   "converged2"});
    int idx = 0;
    for (double p : config.p_list) {
      for (auto [nr, np] : config.grids) {
        PolarGrid g = build_grid(config.domain.center_a, config.domain.r_max, nr, np);
        auto mask = make_profile_mask(g, config.domain.profile());
        EnergyConfig ecfg = energy_config_for(config, p);
        fs::path dir = out / run_dir_name(idx, p, nr, np);
        fs::create_directories(dir);
        export_raster(mask->inside(), g, (dir / "mask.pgm").string());

        RunRow row;
        row.p = p;
        row.n_r = nr;
        row.n_phi = np;
        csv.begin_row();
        csv.set("p", p);
        csv.set("n_r", static_cast<double>(nr));
        csv.set("n_phi", static_cast<double>(np));

        try {
          EigenpairResult r1 = solve_first(mask, ecfg, config.solver);
          row.lambda1 = r1.lambda;
          row.converged1 = r1.converged;
          write_dump(r1.u, (dir / "u1.dat").string());
          export_raster(r1.u, (dir / "u1.pgm").string());
          write_text_file((dir / "solver1.log").string(), solver_log_text(r1));
          write_text_file((dir / "result1.txt").string(), eigen_summary(r1, false));

          if (config.kind != ExperimentKind::first) {
            EigenpairResult r2 = solve_second(mask, ecfg, config.solver);
            row.lambda2 = r2.lambda;
            row.converged2 = r2.converged;
            write_dump(r2.u, (dir / "u2.dat").string());
            export_raster(r2.u, (dir / "u2.pgm").string());
            write_text_file((dir / "solver2.log").string(), solver_log_text(r2));
            write_text_file((dir / "result2.txt").string(), eigen_summary(r2, true));

            NodalReport nrep = nodal_sets(r2.u, *mask);
            BoundarySet boundary = boundary_of(*mask);
            nrep.dist_to_boundary = nodal_boundary_distance(nrep, *mask, boundary);
            row.dist = nrep.dist_to_boundary;

            if (config.kind == ExperimentKind::nodal || config.kind == ExperimentKind::moving_polarization) {
              auto flipped = normalize_boundary_sign(r2.u, nrep, *mask);
              if (flipped) {
                ThetaStarResult ts = theta_star(*mask, nrep);
                nrep.degenerate = ts.degenerate;
                if (!ts.degenerate) {
                  nrep.theta_star = ts.theta_star;
                  nrep.theta_star_index = ts.plane_index;
                  nrep.y_cells = ts.y_cells;
                  nrep.y_boundary_cells = ts.y_boundary_cells;
                  nrep.y_singleton = ts.y_singleton;
                  row.theta_star = ts.theta_star;
                }
              }
              CellSet probes = boundary.cells;
              nrep.normal_derivative_probes = normal_derivative_probe(r2.u, *mask, probes);
              write_nodal_outputs(dir, g, nrep);
            }

            if (config.kind == ExperimentKind::moving_polarization) {
              MovingPolarizationReport mrep = moving_polarization_experiment(*mask, r2.u, ecfg);
              std::ostringstream os;
              os << "skipped = " << (mrep.skipped ? "true" : "false") << "\n";
              if (mrep.skipped)
                os << "message = " << mrep.message << "\n";
              else {
                os << "theta_star = " << mrep.theta_star << "\nsupport_contained = "
                   << (mrep.support_contained ? "true" : "false")
                   << "\npart_containment = " << (mrep.part_containment ? "true" : "false")
                   << "\nmass_exact_plus = " << (mrep.mass_exact_plus ? "true" : "false")
                   << "\nmass_exact_minus = " << (mrep.mass_exact_minus ? "true" : "false")
                   << "\nenergy_plus_rel = " << mrep.energy_plus_rel << "\nenergy_minus_rel = " << mrep.energy_minus_rel
                   << "\ndist_after = " << mrep.dist_after << "\ntouches_after = "
                   << (mrep.touches_after ? "true" : "false") << "\n";
              }
              write_text_file((dir / "moving.txt").string(), os.str());
            }
          }
        } catch (const std::exception& e) {
          ++record.errors;
          record.notes.push_back(run_dir_name(idx, p, nr, np) + ": " + e.what());
        }

        if (row.lambda1) csv.set("lambda1", *row.lambda1);
        if (row.lambda2) csv.set("lambda2", *row.lambda2);
        if (row.dist) csv.set("dist_Z_boundary", *row.dist);
        if (row.theta_star) csv.set("theta_star", *row.theta_star);
        if (row.converged1) csv.set("converged1", *row.converged1);
        if (row.converged2) csv.set("converged2", *row.converged2);
        record.rows.push_back(row);
        ++idx;
      }
    }
    record.csv = csv.str();
    write_text_file((out / "runs.csv").string(), record.csv);
  }

  auto t1 = std::chrono::steady_clock::now();
  record.wall_seconds = std::chrono::duration<double>(t1 - t0).count();

  std::ostringstream rec;
  rec << "config_hash = " << record.config_hash << "\nkind = " << kind_to_string(config.kind)
      << "\nerrors = " << record.errors << "\nwall_seconds = " << record.wall_seconds << "\n";
  for (const auto& n : record.notes) rec << "note = " << n << "\n";
  write_text_file((out / "record.txt").string(), rec.str());
  return record;
}

}  // namespace plab::lab
