#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dayflow/actions.hpp"
#include "dayflow/groups.hpp"
#include "dayflow/measures.hpp"
#include "dayflow/test_function.hpp"

namespace dayflow {

// (_s f)(t) = f(st). Points t with no s*t in the support of f take the
// default value, which also covers the semigroup N and products with it.
TestFunction left_translate(const Element& s, const TestFunction& f);
// (f_s)(t) = f(ts)
TestFunction right_translate(const Element& s, const TestFunction& f);

// A symmetric distance table over a finite point set.
class MetricTable {
 public:
  MetricTable(std::vector<Element> points, std::vector<double> distances);

  const std::vector<Element>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::optional<std::size_t> index(const Element& x) const;
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * points_.size() + j]; }

 private:
  std::vector<Element> points_;
  std::vector<double> dist_;
};

// rho(s, t) = sup_{f in F} |f(s) - f(t)| on pts.
MetricTable pseudometric_from_family(std::span<const TestFunction> family,
                                     std::span<const Element> pts);

// Word metric of the group's generating set. For semigroups the distance
// between x and y is min(d(x, y), d(y, x)).
struct WordMetric {};

// rho(x, y) = separation for x != y. With the default separation of 2 and
// caps (1, 1) every function bounded by 1 is admissible, which is the ball
// of the discrete uniformity.
struct DiscreteMetric {
  double separation = 2.0;
};

using MetricSource = std::variant<WordMetric, DiscreteMetric, MetricTable>;

// { f : |f| <= sup_cap, |f(x) - f(y)| <= lipschitz_cap * rho(x, y) }
struct LipschitzBallSpec {
  MetricSource metric = WordMetric{};
  double sup_cap = 1.0;
  double lipschitz_cap = 1.0;
};

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Pairwise metric values on pts. Distances of at least `horizon` may be
// reported as kUnreachable: callers only need exact values below the point
// where the Lipschitz constraint is implied by the sup cap.
std::vector<double> pairwise_distances(const GroupSpec& group, const MetricSource& metric,
                                       std::span<const Element> pts, double horizon);

// max_{f in F} |mu(f) - (s*mu)(f)|
double defect_weak(const MolecularMeasure& mu, const Element& s,
                   std::span<const TestFunction> family);

struct BlipDefect {
  double value = 0.0;
  // An optimal f on supp(mu - s*mu) (default 0 elsewhere). Use
  // lipschitz_extension for a version admissible on the whole group.
  TestFunction witness;
  double gap = 0.0;
};

// Bounded-Lipschitz distance between mu and s*mu, computed exactly by a
// linear program over the support of mu - s*mu.
BlipDefect defect_blip(const MolecularMeasure& mu, const Element& s, const LipschitzBallSpec& spec);

// Bounded-Lipschitz norm of a signed measure with total mass zero.
BlipDefect blip_norm(const MolecularMeasure& nu, const LipschitzBallSpec& spec);

// McShane extension of f's explicit values into the Lipschitz ball, clamped
// to the sup cap. Agrees with f on its support whenever f is admissible
// there. For a MetricTable the values off the table are set to the sup cap.
TestFunction lipschitz_extension(const TestFunction& f, const LipschitzBallSpec& spec);

// t -> xi . (t . x0), materialized on ball(radius) with default equal to the
// value at the identity. Throws PreconditionViolation if some orbit point
// has inf-norm above orbit_limit.
TestFunction pullback_functional(const Vector& xi, const AffineAction& action, const Vector& x0,
                                 std::size_t radius, double orbit_limit = 1e9);

}  // namespace dayflow
