#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dayflow/actions.hpp"
#include "dayflow/errors.hpp"
#include "dayflow/testfn.hpp"

using namespace dayflow;

namespace {

Matrix rot(double th) {
  Matrix r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  return r;
}

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

AffineAction rotation_action(Domain domain = {}) {
  const Vector p = vec({1.0, 0.0});
  const Matrix r = rot(std::numbers::pi / 3);
  return AffineAction(GroupSpec::integers(1), {{"a", AffineMap{r, p - r * p}}}, std::move(domain));
}

std::vector<Element> window(int n) {
  std::vector<Element> w;
  for (int k = 0; k < n; ++k) w.push_back(Element{{k}});
  return w;
}

}  // namespace

TEST_CASE("rotation about (1, 0)") {
  const auto a = rotation_action();
  const Vector y = a.act({"a"}, vec({2.0, 0.0}));
  CHECK(y(0) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(y(1) == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-15));
  // inverse filled in
  const Vector back = a.act({"A"}, y);
  CHECK((back - vec({2.0, 0.0})).norm() < 1e-14);
  CHECK(a.act({"a", "a", "a", "a", "a", "a"}, vec({2.0, 0.0})).isApprox(vec({2.0, 0.0}), 1e-13));
}

TEST_CASE("words act right to left") {
  const auto h = GroupSpec::free_group(2);
  const AffineAction act2(h, {{"a", AffineMap{2.0 * Matrix::Identity(1, 1), vec({0.0})}},
                              {"b", AffineMap{Matrix::Identity(1, 1), vec({1.0})}}});
  // a.(b.x) = 2(x + 1)
  CHECK(act2.act({"a", "b"}, vec({3.0}))(0) == 8.0);
  CHECK(act2.act({"b", "a"}, vec({3.0}))(0) == 7.0);
}

TEST_CASE("inconsistent actions are rejected") {
  const auto z2 = GroupSpec::integers(2);
  // non-commuting maps violate [a, b] = e
  CHECK_THROWS_AS(AffineAction(z2, {{"a", AffineMap{rot(0.3), vec({0.0, 0.0})}},
                                    {"b", AffineMap{Matrix::Identity(2, 2), vec({1.0, 0.0})}}}),
                  InvalidArgument);
  CHECK_NOTHROW(AffineAction(z2, {{"a", AffineMap{rot(0.3), vec({0.0, 0.0})}},
                                  {"b", AffineMap{rot(1.1), vec({0.0, 0.0})}}}));
  // missing generator
  CHECK_THROWS_AS(AffineAction(z2, {{"a", AffineMap{rot(0.3), vec({0.0, 0.0})}}}), InvalidArgument);
  // unknown generator
  CHECK_THROWS_AS(AffineAction(GroupSpec::integers(1), {{"a", AffineMap{rot(0.3), vec({0.0, 0.0})}},
                                                        {"z", AffineMap{rot(0.3), vec({0.0, 0.0})}}}),
                  InvalidArgument);
  // wrong inverse
  CHECK_THROWS_AS(AffineAction(GroupSpec::integers(1), {{"a", AffineMap{rot(0.3), vec({0.0, 0.0})}},
                                                        {"A", AffineMap{rot(0.3), vec({0.0, 0.0})}}}),
                  InvalidArgument);
  // shape mismatch
  CHECK_THROWS_AS(AffineAction(GroupSpec::integers(1), {{"a", AffineMap{rot(0.3), vec({0.0})}}}),
                  InvalidArgument);
  // C_3 needs a^3 = e
  CHECK_THROWS_AS(AffineAction(GroupSpec::cyclic(3), {{"a", AffineMap{rot(0.5), vec({0.0, 0.0})}}}),
                  InvalidArgument);
  CHECK_NOTHROW(AffineAction(GroupSpec::cyclic(3),
                             {{"a", AffineMap{rot(2 * std::numbers::pi / 3), vec({0.0, 0.0})}}}));
  CHECK_THROWS_AS(rotation_action().act({"a"}, vec({1.0})), InvalidArgument);
}

TEST_CASE("orbit map is equivariant") {
  const auto f2 = GroupSpec::free_group(2);
  const AffineAction act(f2, {{"a", AffineMap{0.5 * rot(0.7), vec({1.0, 0.0})}},
                              {"b", AffineMap{rot(-1.3), vec({0.0, 2.0})}}});
  const Vector x0 = vec({0.2, -0.4});
  OrbitMap phi(act, x0);
  for (const auto& s : ball(f2, 3)) {
    const Vector direct = act.act(shortest_word(f2, s), x0);
    CHECK((phi(s) - direct).cwiseAbs().maxCoeff() < 1e-12);
    for (const auto& g : f2.generators())
      CHECK((phi(f2.multiply(g.element, s)) - act.act_generator(g.name, phi(s))).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("extension of the orbit map") {
  const auto a = rotation_action();
  const Vector x0 = vec({2.0, 0.0});
  const auto z = GroupSpec::integers(1);
  CHECK((extend_phi(point_mass(z, Element{{1}}), a, x0) - a.act({"a"}, x0)).norm() < 1e-15);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    std::map<Element, double> c;
    for (int k = 0; k < 5; ++k) c[Element{{static_cast<std::int64_t>(rng() % 9) - 4}}] += 0.2;
    const MolecularMeasure mu(z, c);
    const Element s{{static_cast<std::int64_t>(rng() % 5) - 2}};
    // equivariance on means: phi~(s*mu) = s.phi~(mu)
    const Vector lhs = extend_phi(convolve_left(s, mu), a, x0);
    const Vector rhs = a.act(shortest_word(z, s), extend_phi(mu, a, x0));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    // duality with the pulled-back functional
    const Vector xi = vec({std::uniform_real_distribution<>(-1, 1)(rng), std::uniform_real_distribution<>(-1, 1)(rng)});
    const auto f = pullback_functional(xi, a, x0, 6);
    CHECK(std::abs(xi.dot(extend_phi(mu, a, x0)) - evaluate(mu, f)) < 1e-12);
  }
}

TEST_CASE("afp pipeline on the rotation") {
  const auto a = rotation_action(BallDomain{vec({1.0, 0.0}), 1.0});
  const auto z = GroupSpec::integers(1);
  std::vector<IndexedMean> means;
  for (int n = 1; n <= 60; ++n) means.push_back({n, uniform_mean(z, window(n))});
  const Vector x0 = vec({2.0, 0.0});
  const auto trace = afp_pipeline(a, x0, means);
  REQUIRE(trace.rows.size() == 60);
  CHECK(trace.generators == std::vector<std::string>{"a", "A"});
  for (const auto& row : trace.rows) {
    INFO("n=" << row.index);
    CHECK(row.residual_identity_error <= 1e-10);
    CHECK(row.residual_bound_holds);
    CHECK_FALSE(row.orbit_outside_domain);
    CHECK(row.tv_defect == doctest::Approx(2.0 / row.index).epsilon(1e-12));
    CHECK((row.point - vec({1.0, 0.0})).norm() <= 2.0 / row.index + 1e-9);
    CHECK(row.residual_euclidean.at("a") >= row.residual.at("a"));
  }
}

TEST_CASE("afp pipeline preconditions") {
  const auto a = rotation_action(BallDomain{vec({1.0, 0.0}), 1.0});
  const auto z = GroupSpec::integers(1);
  const IndexedMean bad[] = {{1, 2.0 * point_mass(z, Element{{0}})}};
  CHECK_THROWS_AS(afp_pipeline(a, vec({2.0, 0.0}), bad), PreconditionViolation);
  const IndexedMean ok[] = {{1, point_mass(z, Element{{0}})}};
  CHECK_THROWS_AS(afp_pipeline(a, vec({5.0, 0.0}), ok), PreconditionViolation);
  CHECK_NOTHROW(afp_pipeline(a, vec({2.0, 0.0}), ok));
}

TEST_CASE("canonical action of a finite group") {
  for (const auto& g : {GroupSpec::cyclic(6), GroupSpec::symmetric(3)}) {
    const auto a = canonical_action(g);
    const auto coords = canonical_coordinates(g);
    CHECK(a.dimension() == coords.size());
    Vector e0 = Vector::Zero(static_cast<Eigen::Index>(coords.size()));
    e0(0) = 1.0;
    // s.e_x = e_{sx}
    for (const auto& gen : g.generators()) {
      const Vector y = a.act_generator(gen.name, e0);
      const auto target = g.multiply(gen.element, coords[0]);
      const auto idx = std::find(coords.begin(), coords.end(), target) - coords.begin();
      CHECK(y(idx) == 1.0);
      CHECK(y.sum() == 1.0);
    }
    const auto all = ball(g, 10);
    const IndexedMean means[] = {{0, uniform_mean(g, all)}};
    const auto trace = afp_pipeline(a, e0, means);
    for (const auto& [name, r] : trace.rows[0].residual) CHECK(r <= 1e-15);
  }
  CHECK_THROWS_AS(canonical_action(GroupSpec::integers(1)), UnsupportedOperation);
}

TEST_CASE("domains") {
  CHECK(in_domain(BallDomain{vec({0.0, 0.0}), 1.0}, vec({0.6, 0.8})));
  CHECK_FALSE(in_domain(BallDomain{vec({0.0, 0.0}), 1.0}, vec({0.8, 0.8})));
  CHECK(in_domain(BoxDomain{vec({0.0, 0.0}), vec({1.0, 2.0})}, vec({1.0, 2.0})));
  CHECK_FALSE(in_domain(BoxDomain{vec({0.0, 0.0}), vec({1.0, 2.0})}, vec({1.1, 0.0})));
  const HullDomain tri{{vec({0.0, 0.0}), vec({1.0, 0.0}), vec({0.0, 1.0})}};
  CHECK(in_domain(tri, vec({0.25, 0.25})));
  CHECK(in_domain(tri, vec({0.5, 0.5})));
  CHECK_FALSE(in_domain(tri, vec({0.6, 0.6})));
  CHECK(in_domain(SimplexDomain{}, vec({0.5, 0.5, 0.0})));
  CHECK_FALSE(in_domain(SimplexDomain{}, vec({0.5, 0.6})));
  CHECK_FALSE(in_domain(SimplexDomain{}, vec({1.5, -0.5})));
  CHECK(in_domain(Domain{}, vec({1e9})));
}

TEST_CASE("orbit bound and unbounded orbits") {
  const auto z = GroupSpec::integers(1);
  const AffineAction shift(z, {{"a", AffineMap{Matrix::Identity(1, 1), vec({1.0})}}},
                           BoxDomain{vec({-2.0}), vec({2.0})});
  CHECK(orbit_bound(shift, vec({0.0}), 5) == 5.0);
  const IndexedMean means[] = {{3, uniform_mean(z, window(4))}};
  const auto trace = afp_pipeline(shift, vec({0.0}), means);
  CHECK(trace.rows[0].orbit_outside_domain);
  CHECK(trace.rows[0].residual_identity_error <= 1e-12);
}

TEST_CASE("semigroup actions") {
  const auto n = GroupSpec::naturals();
  const AffineAction half(n, {{"a", AffineMap{0.5 * Matrix::Identity(1, 1), vec({0.5})}}},
                          BoxDomain{vec({0.0}), vec({1.0})});
  const Vector x0 = vec({0.0});
  OrbitMap phi(half, x0);
  CHECK(phi(Element{{3}})(0) == doctest::Approx(0.875));
  std::vector<IndexedMean> means;
  for (std::size_t r = 1; r <= 10; ++r) {
    std::vector<Element> w;
    for (std::size_t k = 0; k <= r; ++k) w.push_back(Element{{static_cast<std::int64_t>(k)}});
    means.push_back({static_cast<std::int64_t>(r), uniform_mean(n, w)});
  }
  const auto trace = afp_pipeline(half, x0, means);
  for (const auto& row : trace.rows) CHECK(row.residual_identity_error <= 1e-12);
}
