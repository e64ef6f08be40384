#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dayflow/groups.hpp"
#include "dayflow/measures.hpp"

namespace dayflow {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// x -> linear * x + offset
struct AffineMap {
  Matrix linear;
  Vector offset;

  Vector apply(const Vector& x) const { return linear * x + offset; }
};

struct BallDomain {
  Vector center;
  double radius;
};
struct BoxDomain {
  Vector lower;
  Vector upper;
};
struct HullDomain {
  std::vector<Vector> points;
};
struct SimplexDomain {};

// The bounded convex set C the action is declared to preserve. monostate
// means no domain was declared.
using Domain = std::variant<std::monostate, BallDomain, BoxDomain, HullDomain, SimplexDomain>;

bool in_domain(const Domain& domain, const Vector& x, double tol = 1e-9);

// A semigroup action on R^n given by one affine map per generator and
// extended along words.
class AffineAction {
 public:
  // Missing inverse generators of a group are filled in by inverting the
  // given map. Throws InvalidArgument when a generator has no map, a map has
  // the wrong shape, a supplied inverse pair is not inverse to 1e-10, or a
  // sampled defining relation fails (100 points, tolerance 1e-8).
  AffineAction(GroupSpec group, std::map<std::string, AffineMap> maps, Domain domain = {},
               std::uint64_t seed = 0);

  const GroupSpec& group() const { return group_; }
  std::size_t dimension() const { return dim_; }
  const Domain& domain() const { return domain_; }
  const AffineMap& map(const std::string& generator) const;
  const std::map<std::string, AffineMap>& maps() const { return maps_; }

  // act([s, t], x) = s.(t.x)
  Vector act(const Word& word, const Vector& x) const;
  Vector act_generator(const std::string& generator, const Vector& x) const;

 private:
  void check_dimension(const Vector& x) const;

  GroupSpec group_;
  std::size_t dim_ = 0;
  std::map<std::string, AffineMap> maps_;
  Domain domain_;
};

// Samples random points and checks act(lhs, x) == act(rhs, x) for every
// defining relation of the group.
void validate_relations(const AffineAction& action, std::uint64_t seed, int samples = 100,
                        double tol = 1e-8);

Vector act(const AffineAction& action, const Word& word, const Vector& x);

// The orbit map s -> s.x0, computed lazily by breadth-first search over
// left multiplication: phi(g s') = g . phi(s') for generators g.
class OrbitMap {
 public:
  OrbitMap(const AffineAction& action, Vector x0, std::size_t cap = default_enumeration_cap());

  const Vector& operator()(const Element& s);
  const Vector& base_point() const { return x0_; }

 private:
  void grow();

  const AffineAction* action_;
  Vector x0_;
  std::size_t cap_;
  std::map<Element, Vector> points_;
  std::vector<Element> frontier_;
};

// max over w in ball(r) of |w.x0|_inf
double orbit_bound(const AffineAction& action, const Vector& x0, std::size_t radius);

// sum_i c_i (s_i . x0), the linear extension of the orbit map.
Vector extend_phi(const MolecularMeasure& mu, const AffineAction& action, const Vector& x0);
Vector extend_phi(const MolecularMeasure& mu, OrbitMap& phi);

struct IndexedMean {
  std::int64_t index;
  MolecularMeasure mean;
};

struct AfpRow {
  std::int64_t index;
  MolecularMeasure mean;
  Vector point;
  std::map<std::string, double> residual;            // |x - s.x|_inf
  std::map<std::string, double> residual_euclidean;  // |x - s.x|_2
  std::map<std::string, double> tv;                  // |mu - s*mu|_TV
  double tv_defect = 0.0;                            // max over generators
  double residual_identity_error = 0.0;  // max_s |(x - s.x) - phi~(mu - s*mu)|_inf
  double orbit_diameter = 0.0;           // inf-norm diameter of the orbit points used
  double orbit_bound = 0.0;              // max |phi(y)|_inf over the orbit points used
  bool residual_bound_holds = true;      // residual <= tv/2 * diameter for every s
  bool orbit_outside_domain = false;
};

struct AfpTrace {
  std::vector<std::string> generators;
  std::vector<AfpRow> rows;
};

// x_k = phi~(mu_k) for each mean, with per-generator residuals and the
// residual identity x - s.x = phi~(mu - s*mu) checked row by row.
AfpTrace afp_pipeline(const AffineAction& action, const Vector& x0,
                      std::span<const IndexedMean> means);

// The action of a finite group on the probability simplex over its elements
// by left-multiplication permutation matrices. Coordinates follow the sorted
// order of the elements.
AffineAction canonical_action(const GroupSpec& group);
std::vector<Element> canonical_coordinates(const GroupSpec& group);

}  // namespace dayflow
