#include "dayflow/actions.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dayflow/errors.hpp"
#include "dayflow/lp.hpp"

namespace dayflow {

namespace {

bool in_hull(const std::vector<Vector>& points, const Vector& x, double tol) {
  if (points.empty()) return false;
  lp::Problem p;
  const std::size_t k = points.size();
  const std::size_t n = static_cast<std::size_t>(x.size());
  p.add_variables(k);
  // Slack pairs absorb the membership error; the optimum is its l1 size.
  const std::size_t err = p.add_variables(2 * n, 1.0);
  std::vector<lp::Term> mass;
  for (std::size_t i = 0; i < k; ++i) mass.push_back({i, 1.0});
  p.add_row(std::move(mass), lp::Sense::Equal, 1.0);
  for (std::size_t d = 0; d < n; ++d) {
    std::vector<lp::Term> row;
    for (std::size_t i = 0; i < k; ++i) row.push_back({i, points[i](static_cast<Eigen::Index>(d))});
    row.push_back({err + 2 * d, 1.0});
    row.push_back({err + 2 * d + 1, -1.0});
    p.add_row(std::move(row), lp::Sense::Equal, x(static_cast<Eigen::Index>(d)));
  }
  const auto sol = lp::solve(p);
  return sol.status == lp::Status::Optimal && sol.objective <= tol;
}

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

bool in_domain(const Domain& domain, const Vector& x, double tol) {
  return std::visit(
      [&](const auto& d) -> bool {
        using D = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<D, std::monostate>) {
          return true;
        } else if constexpr (std::is_same_v<D, BallDomain>) {
          return (x - d.center).norm() <= d.radius + tol;
        } else if constexpr (std::is_same_v<D, BoxDomain>) {
          return ((x - d.lower).array() >= -tol).all() && ((d.upper - x).array() >= -tol).all();
        } else if constexpr (std::is_same_v<D, HullDomain>) {
          return in_hull(d.points, x, tol);
        } else {
          return (x.array() >= -tol).all() && std::abs(x.sum() - 1.0) <= tol;
        }
      },
      domain);
}

AffineAction::AffineAction(GroupSpec group, std::map<std::string, AffineMap> maps, Domain domain,
                           std::uint64_t seed)
    : group_(std::move(group)), maps_(std::move(maps)), domain_(std::move(domain)) {
  if (maps_.empty()) throw InvalidArgument("affine action needs at least one generator map");
  dim_ = static_cast<std::size_t>(maps_.begin()->second.offset.size());
  if (dim_ == 0) throw InvalidArgument("affine action dimension must be positive");
  for (const auto& [name, m] : maps_) {
    if (!group_.has_generator(name))
      throw InvalidArgument("action names generator '" + name + "' which " + group_.name() +
                            " does not have");
    if (static_cast<std::size_t>(m.offset.size()) != dim_ ||
        static_cast<std::size_t>(m.linear.rows()) != dim_ ||
        static_cast<std::size_t>(m.linear.cols()) != dim_)
      throw InvalidArgument("map for generator '" + name + "' has the wrong shape");
    if (!m.linear.allFinite() || !m.offset.allFinite())
      throw InvalidArgument("map for generator '" + name + "' is not finite");
  }
  for (const auto& g : group_.generators()) {
    if (maps_.contains(g.name)) continue;
    if (!g.inverse_name.empty() && maps_.contains(g.inverse_name)) {
      const auto& m = maps_.at(g.inverse_name);
      Eigen::FullPivLU<Matrix> lu(m.linear);
      if (!lu.isInvertible())
        throw InvalidArgument("map for '" + g.inverse_name + "' is singular, so '" + g.name +
                              "' cannot act");
      const Matrix inv = lu.inverse();
      maps_.emplace(g.name, AffineMap{inv, -inv * m.offset});
      continue;
    }
    throw InvalidArgument("no map given for generator '" + g.name + "'");
  }
  for (const auto& g : group_.generators()) {
    if (g.inverse_name.empty()) continue;
    const auto& m = maps_.at(g.name);
    const auto& mi = maps_.at(g.inverse_name);
    const Matrix id = Matrix::Identity(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    const double lin_err = (m.linear * mi.linear - id).cwiseAbs().maxCoeff();
    const double off_err = inf_norm(m.linear * mi.offset + m.offset);
    if (lin_err > 1e-10 || off_err > 1e-10)
      throw InvalidArgument("maps for '" + g.name + "' and '" + g.inverse_name +
                            "' are not mutually inverse");
  }
  validate_relations(*this, seed);
}

const AffineMap& AffineAction::map(const std::string& generator) const {
  const auto it = maps_.find(generator);
  if (it == maps_.end()) throw InvalidArgument("no map for generator '" + generator + "'");
  return it->second;
}

void AffineAction::check_dimension(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dim_)
    throw InvalidArgument("point has dimension " + std::to_string(x.size()) + ", action has " +
                          std::to_string(dim_));
}

Vector AffineAction::act(const Word& word, const Vector& x) const {
  check_dimension(x);
  Vector y = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = map(*it).apply(y);
  return y;
}

Vector AffineAction::act_generator(const std::string& generator, const Vector& x) const {
  check_dimension(x);
  return map(generator).apply(x);
}

Vector act(const AffineAction& action, const Word& word, const Vector& x) {
  return action.act(word, x);
}

void validate_relations(const AffineAction& action, std::uint64_t seed, int samples, double tol) {
  const auto relations = action.group().relations();
  if (relations.empty()) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(action.dimension());
  for (int k = 0; k < samples; ++k) {
    Vector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = normal(rng);
    for (const auto& rel : relations) {
      const Vector lhs = action.act(rel.lhs, x);
      const Vector rhs = action.act(rel.rhs, x);
      const double scale = std::max(1.0, inf_norm(x));
      if (inf_norm(lhs - rhs) > tol * scale) {
        std::string w;
        for (const auto& l : rel.lhs) w += l + " ";
        throw InvalidArgument("action violates the relation starting with [" + w + "] of " +
                              action.group().name());
      }
    }
  }
}

OrbitMap::OrbitMap(const AffineAction& action, Vector x0, std::size_t cap)
    : action_(&action), x0_(std::move(x0)), cap_(cap) {
  if (static_cast<std::size_t>(x0_.size()) != action.dimension())
    throw InvalidArgument("base point has dimension " + std::to_string(x0_.size()) +
                          ", action has " + std::to_string(action.dimension()));
  const Element e = action.group().identity();
  points_.emplace(e, x0_);
  frontier_.push_back(e);
}

void OrbitMap::grow() {
  const GroupSpec& group = action_->group();
  std::vector<Element> next;
  for (const auto& x : frontier_) {
    const Vector px = points_.at(x);
    for (const auto& g : group.generators()) {
      Element y = group.multiply(g.element, x);
      if (points_.contains(y)) continue;
      points_.emplace(y, action_->map(g.name).apply(px));
      if (points_.size() > cap_)
        throw ResourceLimit("orbit enumeration in " + group.name() + " exceeded the cap of " +
                            std::to_string(cap_));
      next.push_back(std::move(y));
    }
  }
  frontier_ = std::move(next);
}

const Vector& OrbitMap::operator()(const Element& s) {
  for (;;) {
    if (const auto it = points_.find(s); it != points_.end()) return it->second;
    if (frontier_.empty()) {
      action_->group().check(s);
      throw InvalidArgument("element " + action_->group().format(s) +
                            " is not reachable from the identity");
    }
    grow();
  }
}

double orbit_bound(const AffineAction& action, const Vector& x0, std::size_t radius) {
  OrbitMap phi(action, x0);
  double bound = 0.0;
  for (const auto& w : ball(action.group(), radius)) bound = std::max(bound, inf_norm(phi(w)));
  return bound;
}

Vector extend_phi(const MolecularMeasure& mu, OrbitMap& phi) {
  Vector out = Vector::Zero(phi.base_point().size());
  for (const auto& [s, c] : mu.coefficients()) out += c * phi(s);
  return out;
}

Vector extend_phi(const MolecularMeasure& mu, const AffineAction& action, const Vector& x0) {
  if (!(mu.group() == action.group()))
    throw InvalidArgument("extend_phi: measure and action live on different groups");
  OrbitMap phi(action, x0);
  return extend_phi(mu, phi);
}

AfpTrace afp_pipeline(const AffineAction& action, const Vector& x0,
                      std::span<const IndexedMean> means) {
  if (static_cast<std::size_t>(x0.size()) != action.dimension())
    throw InvalidArgument("x0 has dimension " + std::to_string(x0.size()) + ", action has " +
                          std::to_string(action.dimension()));
  if (!in_domain(action.domain(), x0))
    throw PreconditionViolation("x0 is not in the action's declared domain");
  const GroupSpec& group = action.group();
  AfpTrace trace;
  for (const auto& g : group.generators()) trace.generators.push_back(g.name);

  OrbitMap phi(action, x0);
  for (const auto& [index, mu] : means) {
    if (!(mu.group() == group)) throw InvalidArgument("afp_pipeline: mean on a different group");
    if (!is_mean(mu, 1e-9))
      throw PreconditionViolation("afp_pipeline: measure " + std::to_string(index) +
                                  " is not a mean");
    AfpRow row{index, mu, extend_phi(mu, phi), {}, {}, {}};
    std::set<Element> used;
    for (const auto& x : mu.support()) used.insert(x);
    for (const auto& g : group.generators()) {
      const MolecularMeasure shifted = convolve_left(g.element, mu);
      const MolecularMeasure diff = mu - shifted;
      const Vector residual = row.point - action.map(g.name).apply(row.point);
      const Vector via_phi = extend_phi(diff, phi);
      const double r_inf = inf_norm(residual);
      const double tv = tv_norm(diff);
      row.residual[g.name] = r_inf;
      row.residual_euclidean[g.name] = residual.norm();
      row.tv[g.name] = tv;
      row.tv_defect = std::max(row.tv_defect, tv);
      row.residual_identity_error =
          std::max(row.residual_identity_error, inf_norm(residual - via_phi));

      // Orbit points carrying mu and s*mu.
      std::vector<Vector> pts;
      for (const auto& x : mu.support()) pts.push_back(phi(x));
      for (const auto& x : shifted.support()) {
        pts.push_back(phi(x));
        used.insert(x);
      }
      double diam = 0.0;
      for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
          diam = std::max(diam, inf_norm(pts[i] - pts[j]));
      row.orbit_diameter = std::max(row.orbit_diameter, diam);
      const double slack = 1e-12 * std::max(1.0, diam);
      if (r_inf > tv / 2.0 * diam + slack) row.residual_bound_holds = false;
    }
    for (const auto& x : used) {
      const Vector& p = phi(x);
      row.orbit_bound = std::max(row.orbit_bound, inf_norm(p));
      if (!row.orbit_outside_domain && !in_domain(action.domain(), p))
        row.orbit_outside_domain = true;
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::vector<Element> canonical_coordinates(const GroupSpec& group) {
  const auto order = group.order();
  if (!order) throw UnsupportedOperation(group.name() + " is infinite; no canonical simplex action");
  if (*order > default_enumeration_cap())
    throw ResourceLimit(group.name() + " is larger than the enumeration cap");
  auto elements = ball(group, static_cast<std::size_t>(*order));
  if (elements.size() != *order) throw InternalError("ball did not exhaust " + group.name());
  return elements;
}

AffineAction canonical_action(const GroupSpec& group) {
  const auto elements = canonical_coordinates(group);
  const auto n = static_cast<Eigen::Index>(elements.size());
  if (elements.size() > 4096)
    throw ResourceLimit("canonical action of " + group.name() + " is too large to materialize");
  std::map<Element, Eigen::Index> index;
  for (Eigen::Index i = 0; i < n; ++i) index.emplace(elements[static_cast<std::size_t>(i)], i);
  std::map<std::string, AffineMap> maps;
  for (const auto& g : group.generators()) {
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      p(index.at(group.multiply(g.element, elements[static_cast<std::size_t>(i)])), i) = 1.0;
    maps.emplace(g.name, AffineMap{std::move(p), Vector::Zero(n)});
  }
  return AffineAction(group, std::move(maps), SimplexDomain{});
}

}  // namespace dayflow
