#include "dayflow/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "dayflow/errors.hpp"
#include "dayflow/lp.hpp"

namespace dayflow {

std::string kind_name(const DefectKind& kind) {
  if (std::holds_alternative<TvDefect>(kind)) return "tv";
  if (std::holds_alternative<BlipDefectKind>(kind)) return "blip";
  return "weak";
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::FeasibleSuboptimal: return "feasible-suboptimal";
    case LpStatus::CapHit: return "cap-hit";
  }
  return "unknown";
}

double defect(const MolecularMeasure& mu, const Element& s, const DefectKind& kind) {
  if (std::holds_alternative<TvDefect>(kind)) return tv_norm(mu - convolve_left(s, mu));
  if (const auto* b = std::get_if<BlipDefectKind>(&kind)) return defect_blip(mu, s, b->ball).value;
  return defect_weak(mu, s, std::get<WeakDefectKind>(kind).family);
}

MolecularMeasure folner_uniform(const GroupSpec& group, std::size_t radius, std::size_t cap) {
  const auto support = ball(group, radius, cap);
  return uniform_mean(group, support);
}

namespace {

std::vector<Generator> selected_generators(const GroupSpec& group,
                                           std::span<const std::string> names) {
  if (names.empty()) return group.generators();
  std::vector<Generator> out;
  for (const auto& n : names) out.push_back(group.generator(n));
  return out;
}

bool translation_invariant(const GroupSpec& group, const DefectKind& kind) {
  if (!group.has_inverses()) return false;
  if (std::holds_alternative<TvDefect>(kind)) return true;
  if (const auto* b = std::get_if<BlipDefectKind>(&kind))
    return !std::holds_alternative<MetricTable>(b->ball.metric);
  return false;
}

}  // namespace

double max_generator_defect(const MolecularMeasure& mu, const DefectKind& kind,
                            std::span<const std::string> generators) {
  double worst = 0.0;
  for (const auto& g : selected_generators(mu.group(), generators))
    worst = std::max(worst, defect(mu, g.element, kind));
  return worst;
}

DefectReport solve_invariant_mean(const GroupSpec& group, const SolveConfig& config) {
  if (!(config.tolerance > 0.0)) throw InvalidArgument("solver tolerance must be positive");
  const auto start = std::chrono::steady_clock::now();
  const auto gens = selected_generators(group, config.generators);
  const auto support = ball(group, config.radius, config.cap);
  const std::size_t n = support.size();

  // For TV and left-invariant metrics, defect(mu, s^-1) = defect(mu, s), so
  // one generator of each inverse pair is enough.
  std::vector<Generator> constrained;
  if (translation_invariant(group, config.kind)) {
    std::set<std::string> kept;
    std::set<std::string> selected;
    for (const auto& g : gens) selected.insert(g.name);
    for (const auto& g : gens) {
      if (g.inverse_name != g.name && selected.contains(g.inverse_name) &&
          kept.contains(g.inverse_name))
        continue;
      kept.insert(g.name);
      constrained.push_back(g);
    }
  } else {
    constrained = gens;
  }

  lp::Problem p;
  p.add_variables(n);  // mu
  const std::size_t t = p.add_variable(1.0);

  {
    std::vector<lp::Term> mass;
    for (std::size_t i = 0; i < n; ++i) mass.push_back({i, 1.0});
    p.add_row(std::move(mass), lp::Sense::Equal, 1.0);
  }

  for (const auto& g : constrained) {
    if (const auto* weak = std::get_if<WeakDefectKind>(&config.kind)) {
      for (const auto& f : weak->family) {
        // (mu - s*mu)(f) = sum_y mu(y) (f(y) - f(s y))
        std::vector<lp::Term> plus, minus;
        for (std::size_t i = 0; i < n; ++i) {
          const double coef = f(support[i]) - f(group.multiply(g.element, support[i]));
          plus.push_back({i, coef});
          minus.push_back({i, -coef});
        }
        plus.push_back({t, -1.0});
        minus.push_back({t, -1.0});
        p.add_row(std::move(plus), lp::Sense::LessEqual, 0.0);
        p.add_row(std::move(minus), lp::Sense::LessEqual, 0.0);
      }
      continue;
    }

    // nu(x) = mu(x) - sum_{y : s y = x} mu(y) over U = B u sB, written as
    // a - b + (outflow - inflow) of a transport plan w; the cost
    // cap*sum(a + b) + L*sum(rho w) is the dual of the bounded-Lipschitz LP.
    std::map<Element, std::vector<lp::Term>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      rows[support[i]].push_back({i, -1.0});
      rows[group.multiply(g.element, support[i])].push_back({i, 1.0});
    }
    std::vector<Element> pts;
    for (const auto& [x, terms] : rows) pts.push_back(x);
    const std::size_t k = pts.size();

    double cap_value = 1.0, lip = 1.0;
    std::vector<double> dist;
    if (const auto* b = std::get_if<BlipDefectKind>(&config.kind)) {
      cap_value = b->ball.sup_cap;
      lip = b->ball.lipschitz_cap;
      if (!(cap_value > 0.0) || !(lip > 0.0))
        throw InvalidArgument("Lipschitz ball caps must be positive");
      dist = pairwise_distances(group, b->ball.metric, pts, 2.0 * cap_value / lip);
    }

    std::vector<lp::Term> cost{{t, -1.0}};
    std::vector<std::vector<lp::Term>> balance(k);
    for (std::size_t x = 0; x < k; ++x) {
      balance[x] = std::move(rows[pts[x]]);
      const std::size_t a = p.add_variable();
      const std::size_t b = p.add_variable();
      balance[x].push_back({a, 1.0});
      balance[x].push_back({b, -1.0});
      cost.push_back({a, cap_value});
      cost.push_back({b, cap_value});
    }
    if (!dist.empty()) {
      for (std::size_t x = 0; x < k; ++x)
        for (std::size_t y = 0; y < k; ++y) {
          if (x == y) continue;
          const double c = lip * dist[x * k + y];
          if (c >= 2.0 * cap_value) continue;
          const std::size_t w = p.add_variable();
          balance[x].push_back({w, 1.0});
          balance[y].push_back({w, -1.0});
          cost.push_back({w, c});
        }
    }
    for (auto& row : balance) p.add_row(std::move(row), lp::Sense::Equal, 0.0);
    p.add_row(std::move(cost), lp::Sense::LessEqual, 0.0);
  }

  lp::Options options;
  options.feasibility_tol = std::min(1e-9, config.tolerance);
  options.optimality_tol = std::min(1e-9, config.tolerance);
  const auto sol = lp::solve(p, options);

  DefectReport report{MolecularMeasure(group), {}};
  report.radius = config.radius;
  report.lp_variables = p.num_variables();
  report.lp_rows = p.num_rows();
  report.iterations = sol.iterations;
  if (sol.status == lp::Status::Infeasible || sol.status == lp::Status::Unbounded)
    throw SolverError("invariant-mean LP ended with status " + lp::to_string(sol.status));
  if (sol.status == lp::Status::IterationLimit) {
    report.status = LpStatus::CapHit;
  } else {
    const double scale = 1.0 + std::abs(sol.objective);
    const bool certified = sol.gap <= config.tolerance * scale &&
                           sol.dual_infeasibility <= config.tolerance * scale &&
                           sol.primal_infeasibility <= config.tolerance * scale;
    report.status = certified ? LpStatus::Optimal : LpStatus::FeasibleSuboptimal;
  }
  report.lp_objective = sol.x[t];
  report.gap = sol.gap;

  std::map<Element, double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = sol.x[i];
    if (w < -1e-7) throw SolverError("LP returned a negative weight");
    if (w > 0.0) {
      weights.emplace(support[i], w);
      total += w;
    }
  }
  if (!(total > 0.0)) throw SolverError("LP returned an empty mean");
  for (auto& [x, w] : weights) w /= total;
  report.mean = MolecularMeasure(group, std::move(weights));

  for (const auto& g : gens) {
    const double d = defect(report.mean, g.element, config.kind);
    report.defects[g.name] = d;
    report.max_defect = std::max(report.max_defect, d);
  }
  report.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<ProfileRow> defect_profile(const GroupSpec& group, std::size_t r_max,
                                       const DefectKind& kind, std::size_t jobs) {
  // Fail fast on an oversized largest ball before spawning any work.
  (void)ball(group, r_max);
  std::vector<ProfileRow> rows(r_max + 1);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t r = next++; r <= r_max; r = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        ProfileRow row;
        row.radius = r;
        row.folner_defect = max_generator_defect(folner_uniform(group, r), kind);
        SolveConfig cfg;
        cfg.radius = r;
        cfg.kind = kind;
        const auto report = solve_invariant_mean(group, cfg);
        row.lp_defect = report.max_defect;
        row.status = report.status;
        row.millis = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                               start)
                         .count();
        rows[r] = row;
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = r_max + 1;
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, r_max + 1);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

ConvexifyResult day_convexify(std::span<const Vector> points, const AffineAction& action) {
  if (points.empty()) throw InvalidArgument("day_convexify needs at least one point");
  const auto dim = static_cast<Eigen::Index>(action.dimension());
  for (const auto& x : points) {
    if (x.size() != dim) throw InvalidArgument("day_convexify: point has the wrong dimension");
    if (!in_domain(action.domain(), x))
      throw PreconditionViolation("day_convexify: point outside the action's domain");
  }
  const auto& gens = action.group().generators();
  const std::size_t k = points.size();

  // The residual of sum_i l_i x_i is sum_i l_i (x_i - s.x_i) because s acts
  // affinely and the weights sum to one.
  lp::Problem p;
  p.add_variables(k);
  const std::size_t t = p.add_variable(1.0);
  {
    std::vector<lp::Term> mass;
    for (std::size_t i = 0; i < k; ++i) mass.push_back({i, 1.0});
    p.add_row(std::move(mass), lp::Sense::Equal, 1.0);
  }
  for (const auto& g : gens) {
    std::vector<Vector> r(k);
    for (std::size_t i = 0; i < k; ++i) r[i] = points[i] - action.act_generator(g.name, points[i]);
    for (Eigen::Index d = 0; d < dim; ++d) {
      std::vector<lp::Term> plus{{t, -1.0}}, minus{{t, -1.0}};
      for (std::size_t i = 0; i < k; ++i) {
        plus.push_back({i, r[i](d)});
        minus.push_back({i, -r[i](d)});
      }
      p.add_row(std::move(plus), lp::Sense::LessEqual, 0.0);
      p.add_row(std::move(minus), lp::Sense::LessEqual, 0.0);
    }
  }
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    throw SolverError("day_convexify LP ended with status " + lp::to_string(sol.status));

  ConvexifyResult out;
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    out.weights.push_back(std::max(0.0, sol.x[i]));
    total += out.weights.back();
  }
  for (auto& w : out.weights) w /= total;
  out.point = Vector::Zero(dim);
  for (std::size_t i = 0; i < k; ++i) out.point += out.weights[i] * points[i];
  for (const auto& g : gens) {
    const Vector res = out.point - action.act_generator(g.name, out.point);
    const double r_inf = res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
    out.residuals[g.name] = r_inf;
    out.residuals_euclidean[g.name] = res.norm();
    out.max_residual = std::max(out.max_residual, r_inf);
  }
  return out;
}

}  // namespace dayflow
