#include "dayflow/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>

#include "dayflow/errors.hpp"
#include "dayflow/lp.hpp"

namespace dayflow {

namespace {

// The unique t with s*t = x (left) or t*s = x (right), if any. Every kind
// here is cancellative, so the answer is unique when it exists.
std::optional<Element> divide(const GroupSpec& group, const Element& s, const Element& x, bool left) {
  if (group.has_inverses()) {
    const Element s_inv = group.invert(s);
    return left ? group.multiply(s_inv, x) : group.multiply(x, s_inv);
  }
  if (group.kind() == GroupKind::Naturals) {
    if (x.nf[0] < s.nf[0]) return std::nullopt;
    return Element{{x.nf[0] - s.nf[0]}};
  }
  if (group.kind() == GroupKind::DirectProduct) {
    const auto ss = group.split(s), xs = group.split(x);
    std::vector<Element> parts;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      auto t = divide(group.factors()[i], ss[i], xs[i], left);
      if (!t) return std::nullopt;
      parts.push_back(std::move(*t));
    }
    return group.join(parts);
  }
  throw UnsupportedOperation("no division in " + group.name());
}

TestFunction translate(const Element& s, const TestFunction& f, bool left) {
  const GroupSpec& group = f.group();
  group.check(s);
  std::map<Element, double> values;
  for (const auto& [x, v] : f.values())
    if (auto t = divide(group, s, x, left)) values.emplace(std::move(*t), v);
  return TestFunction(group, std::move(values), f.default_value());
}

}  // namespace

TestFunction left_translate(const Element& s, const TestFunction& f) { return translate(s, f, true); }

TestFunction right_translate(const Element& s, const TestFunction& f) { return translate(s, f, false); }

MetricTable::MetricTable(std::vector<Element> points, std::vector<double> distances)
    : points_(std::move(points)), dist_(std::move(distances)) {
  if (dist_.size() != points_.size() * points_.size())
    throw InvalidArgument("metric table has the wrong number of entries");
  if (std::set<Element>(points_.begin(), points_.end()).size() != points_.size())
    throw InvalidArgument("metric table points must be distinct");
}

std::optional<std::size_t> MetricTable::index(const Element& x) const {
  const auto it = std::find(points_.begin(), points_.end(), x);
  if (it == points_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - points_.begin());
}

MetricTable pseudometric_from_family(std::span<const TestFunction> family,
                                     std::span<const Element> pts) {
  for (const auto& f : family)
    if (f.sup_bound() > 1.0)
      throw InvalidArgument("pseudometric_from_family: functions must be bounded by 1");
  const std::size_t n = pts.size();
  std::vector<double> dist(n * n, 0.0);
  for (const auto& f : family) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(pts[i]);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        dist[i * n + j] = std::max(dist[i * n + j], std::abs(v[i] - v[j]));
  }
  return MetricTable({pts.begin(), pts.end()}, std::move(dist));
}

namespace {

bool closed_form_distance(const GroupSpec& g) {
  switch (g.kind()) {
    case GroupKind::Integers:
    case GroupKind::Cyclic:
    case GroupKind::Free:
    case GroupKind::Naturals: return true;
    case GroupKind::DirectProduct:
      return std::all_of(g.factors().begin(), g.factors().end(), closed_form_distance);
    default: return false;
  }
}

// Distances from `source` to each target, exploring right multiplication up
// to `depth` steps. Unreached targets stay at kUnreachable.
std::vector<double> truncated_bfs(const GroupSpec& group, const Element& source,
                                  std::span<const Element> targets, std::size_t depth) {
  std::map<Element, std::size_t> wanted;
  for (std::size_t i = 0; i < targets.size(); ++i) wanted.emplace(targets[i], i);
  std::vector<double> out(targets.size(), kUnreachable);
  std::size_t found = 0;
  auto visit = [&](const Element& x, std::size_t d) {
    if (const auto it = wanted.find(x); it != wanted.end() && out[it->second] == kUnreachable) {
      out[it->second] = static_cast<double>(d);
      ++found;
    }
  };
  std::set<Element> seen{source};
  std::vector<Element> frontier{source};
  visit(source, 0);
  const std::size_t cap = default_enumeration_cap();
  for (std::size_t d = 1; d <= depth && found < targets.size() && !frontier.empty(); ++d) {
    std::vector<Element> next;
    for (const auto& x : frontier)
      for (const auto& g : group.generators()) {
        Element y = group.multiply(x, g.element);
        if (!seen.insert(y).second) continue;
        if (seen.size() > cap)
          throw ResourceLimit("metric search in " + group.name() + " exceeded the cap");
        visit(y, d);
        next.push_back(std::move(y));
      }
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

std::vector<double> pairwise_distances(const GroupSpec& group, const MetricSource& metric,
                                       std::span<const Element> pts, double horizon) {
  const std::size_t n = pts.size();
  std::vector<double> dist(n * n, 0.0);
  if (const auto* table = std::get_if<MetricTable>(&metric)) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = table->index(pts[i]);
      if (!k)
        throw PreconditionViolation("point " + group.format(pts[i]) +
                                    " is outside the metric table's domain");
      idx[i] = *k;
    }
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = (*table)(idx[i], idx[j]);
    return dist;
  }
  if (const auto* discrete = std::get_if<DiscreteMetric>(&metric)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = i == j ? 0.0 : discrete->separation;
    return dist;
  }
  if (closed_form_distance(group)) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) {
        const auto a = group.distance(pts[i], pts[j]);
        const auto b = group.has_inverses() ? a : group.distance(pts[j], pts[i]);
        double d = kUnreachable;
        if (a) d = static_cast<double>(*a);
        if (b) d = std::min(d, static_cast<double>(*b));
        dist[i * n + j] = dist[j * n + i] = d;
      }
    return dist;
  }
  // Integer distances below the horizon are all that matter.
  const double ceiling = std::ceil(horizon);
  const std::size_t depth =
      ceiling >= 1.0 ? static_cast<std::size_t>(std::min(ceiling - 1.0, 1e6)) : 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = truncated_bfs(group, pts[i], pts, depth);
    for (std::size_t j = 0; j < n; ++j) dist[i * n + j] = row[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] = std::min(dist[i * n + j], dist[j * n + i]);
  return dist;
}

double defect_weak(const MolecularMeasure& mu, const Element& s,
                   std::span<const TestFunction> family) {
  const MolecularMeasure shifted = convolve_left(s, mu);
  double worst = 0.0;
  for (const auto& f : family) worst = std::max(worst, std::abs(evaluate(mu, f) - evaluate(shifted, f)));
  return worst;
}

BlipDefect blip_norm(const MolecularMeasure& nu, const LipschitzBallSpec& spec) {
  if (!(spec.sup_cap > 0.0) || !(spec.lipschitz_cap > 0.0))
    throw InvalidArgument("Lipschitz ball caps must be positive");
  const GroupSpec& group = nu.group();
  const auto pts = nu.support();
  const std::size_t n = pts.size();
  if (n == 0) return {0.0, TestFunction(group), 0.0};

  const double c = spec.sup_cap;
  const double lip = spec.lipschitz_cap;
  const double horizon = 2.0 * c / lip;
  const auto dist = pairwise_distances(group, spec.metric, pts, horizon);

  // g = f + c ranges over [0, 2c].
  lp::Problem p;
  std::vector<double> weights(n);
  double mass = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    weights[i] = nu.weight(pts[i]);
    mass += weights[i];
    p.add_variable(-weights[i]);
  }
  for (std::size_t i = 0; i < n; ++i) p.add_row({{i, 1.0}}, lp::Sense::LessEqual, 2.0 * c);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double bound = lip * dist[i * n + j];
      if (bound >= 2.0 * c) continue;
      p.add_row({{i, 1.0}, {j, -1.0}}, lp::Sense::LessEqual, bound);
    }
  const auto sol = lp::solve(p);
  if (sol.status != lp::Status::Optimal)
    throw InternalError("bounded-Lipschitz LP ended with status " + lp::to_string(sol.status));

  std::map<Element, double> values;
  for (std::size_t i = 0; i < n; ++i) values.emplace(pts[i], sol.x[i] - c);
  return {-sol.objective - c * mass, TestFunction(group, std::move(values), 0.0), sol.gap};
}

BlipDefect defect_blip(const MolecularMeasure& mu, const Element& s, const LipschitzBallSpec& spec) {
  return blip_norm(mu - convolve_left(s, mu), spec);
}

TestFunction lipschitz_extension(const TestFunction& f, const LipschitzBallSpec& spec) {
  if (!(spec.sup_cap > 0.0) || !(spec.lipschitz_cap > 0.0))
    throw InvalidArgument("Lipschitz ball caps must be positive");
  const GroupSpec& group = f.group();
  const double c = spec.sup_cap;
  const double lip = spec.lipschitz_cap;
  std::vector<Element> pts;
  std::vector<double> vals;
  for (const auto& [x, v] : f.values()) {
    pts.push_back(x);
    vals.push_back(v);
  }
  if (pts.empty()) return TestFunction(group, std::clamp(f.default_value(), -c, c));

  // F(y) = clamp(min_i f(x_i) + L rho(y, x_i), -c, c)
  auto mcshane = [&](const std::vector<double>& dist_to_support) {
    double best = kUnreachable;
    for (std::size_t i = 0; i < pts.size(); ++i) best = std::min(best, vals[i] + lip * dist_to_support[i]);
    return std::clamp(best, -c, c);
  };
  std::map<Element, double> out(f.values().begin(), f.values().end());

  if (const auto* discrete = std::get_if<DiscreteMetric>(&spec.metric)) {
    const std::vector<double> far(pts.size(), discrete->separation);
    return TestFunction(group, std::move(out), mcshane(far));
  }
  if (const auto* table = std::get_if<MetricTable>(&spec.metric)) {
    // the metric only exists on the table; off it the value is c
    std::vector<std::size_t> idx;
    for (const auto& x : pts) {
      const auto k = table->index(x);
      if (!k) throw PreconditionViolation("point " + group.format(x) + " is outside the metric table");
      idx.push_back(*k);
    }
    for (std::size_t j = 0; j < table->size(); ++j) {
      const auto& y = table->points()[j];
      if (out.count(y)) continue;
      std::vector<double> d(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) d[i] = (*table)(j, idx[i]);
      out.emplace(y, mcshane(d));
    }
    return TestFunction(group, std::move(out), c);
  }

  // Word metric: beyond distance 2c/L of every support point F is c, so only
  // the neighbourhood within that radius needs explicit values.
  const auto reach = static_cast<std::size_t>(std::ceil(2.0 * c / lip));
  std::map<Element, std::vector<double>> near;
  if (group.has_inverses()) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (const auto& w : ball(group, reach)) {
        auto& d = near.try_emplace(group.multiply(pts[i], w), pts.size(), kUnreachable).first->second;
        d[i] = std::min(d[i], static_cast<double>(*group.distance(group.identity(), w)));
      }
  } else {
    std::size_t longest = 0;
    for (const auto& x : pts) longest = std::max<std::size_t>(longest, shortest_word(group, x).size());
    std::vector<Element> cand = ball(group, longest + reach);
    const std::size_t m = cand.size();
    const auto dist = pairwise_distances(group, spec.metric, cand, 2.0 * c / lip);
    std::vector<std::size_t> idx;
    for (const auto& x : pts)
      idx.push_back(static_cast<std::size_t>(std::lower_bound(cand.begin(), cand.end(), x) - cand.begin()));
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<double> d(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) d[i] = dist[j * m + idx[i]];
      near.emplace(cand[j], std::move(d));
    }
  }
  for (const auto& [y, d] : near) {
    if (out.count(y)) continue;
    const double v = mcshane(d);
    if (v != c) out.emplace(y, v);
  }
  return TestFunction(group, std::move(out), c);
}

TestFunction pullback_functional(const Vector& xi, const AffineAction& action, const Vector& x0,
                                 std::size_t radius, double orbit_limit) {
  if (static_cast<std::size_t>(xi.size()) != action.dimension())
    throw InvalidArgument("functional has the wrong dimension");
  OrbitMap phi(action, x0);
  std::map<Element, double> values;
  for (const auto& w : ball(action.group(), radius)) {
    const Vector& p = phi(w);
    if (p.cwiseAbs().maxCoeff() > orbit_limit)
      throw PreconditionViolation("orbit of x0 leaves the bound " + std::to_string(orbit_limit) +
                                  " within radius " + std::to_string(radius));
    values.emplace(w, xi.dot(p));
  }
  return TestFunction(action.group(), std::move(values), xi.dot(x0));
}

}  // namespace dayflow
