#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "dayflow/actions.hpp"
#include "dayflow/errors.hpp"
#include "dayflow/testfn.hpp"
#include "oracle/rational_lp.hpp"

using namespace dayflow;

namespace {

// sup nu(f) over |f| <= c, |f(x) - f(y)| <= L d(x, y) with f defined on all
// of `domain` (a superset of supp nu), solved exactly. Restricting to the
// support loses nothing (McShane extension), which is what this checks.
double full_domain_blip(const MolecularMeasure& nu, const std::vector<Element>& domain, double c,
                        double lip) {
  const auto& g = nu.group();
  oracle::RationalLp lp;
  // f = p - c with p in [0, 2c]; maximize nu(f) = minimize -nu(p) + c * mass
  std::vector<std::size_t> var;
  for (const auto& x : domain) var.push_back(lp.add_var(-mpq_class(nu.weight(x))));
  for (std::size_t i = 0; i < domain.size(); ++i)
    lp.add_row({{var[i], 1}}, oracle::RowSense::Le, 2 * mpq_class(c));
  for (std::size_t i = 0; i < domain.size(); ++i)
    for (std::size_t j = 0; j < domain.size(); ++j) {
      if (i == j) continue;
      const auto d = g.distance(domain[i], domain[j]);
      if (!d) continue;
      lp.add_row({{var[i], 1}, {var[j], -1}}, oracle::RowSense::Le, mpq_class(lip) * mpq_class(*d));
    }
  const auto res = oracle::solve_exact(lp);
  REQUIRE(res.feasible);
  return -res.objective.get_d() - c * nu.total_mass();
}

bool admissible(const TestFunction& f, const std::vector<Element>& pts, const GroupSpec& g, double c,
                double lip, double tol) {
  for (const auto& x : pts) {
    if (std::abs(f(x)) > c + tol) return false;
    for (const auto& y : pts)
      if (const auto d = g.distance(x, y); d && std::abs(f(x) - f(y)) > lip * *d + tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("translates of an indicator on F_2") {
  const auto f2 = GroupSpec::free_group(2);
  const Element ab[] = {f2.evaluate({"a", "b"})};
  const Element a[] = {f2.evaluate({"a"})};
  const Element b_inv_ab[] = {f2.evaluate({"B", "a", "b"})};
  const auto ind = TestFunction::indicator(f2, ab);
  const auto b = f2.evaluate({"b"});
  CHECK(right_translate(b, ind).values() == TestFunction::indicator(f2, a).values());
  CHECK(left_translate(b, ind).values() == TestFunction::indicator(f2, b_inv_ab).values());
}

TEST_CASE("translates on the naturals") {
  const auto n = GroupSpec::naturals();
  const TestFunction f(n, {{Element{{1}}, 5.0}, {Element{{4}}, 7.0}}, -1.0);
  const auto g = left_translate(Element{{2}}, f);
  // (_2 f)(t) = f(2 + t)
  CHECK(g(Element{{2}}) == 7.0);
  CHECK(g(Element{{0}}) == -1.0);
  CHECK(g.values().size() == 1);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const std::int64_t s = static_cast<std::int64_t>(rng() % 5), t = static_cast<std::int64_t>(rng() % 6);
    CHECK(left_translate(Element{{s}}, f)(Element{{t}}) == f(Element{{s + t}}));
  }
}

TEST_CASE("weak defect of a window on Z is 1/n") {
  const auto z = GroupSpec::integers(1);
  for (int n = 1; n <= 30; ++n) {
    std::vector<Element> w;
    for (int k = 0; k < n; ++k) w.push_back(Element{{k}});
    const auto mu = uniform_mean(z, w);
    const TestFunction fam[] = {TestFunction::indicator(z, w)};
    CHECK(defect_weak(mu, Element{{1}}, fam) == doctest::Approx(1.0 / n).epsilon(1e-14));
  }
}

TEST_CASE("pseudometric from a family") {
  const auto z = GroupSpec::integers(1);
  const Element pts[] = {Element{{0}}, Element{{1}}, Element{{2}}};
  const Element half[] = {Element{{0}}};
  const TestFunction fam[] = {TestFunction::indicator(z, half),
                              TestFunction(z, {{Element{{2}}, 0.5}}, 0.0)};
  const auto m = pseudometric_from_family(fam, pts);
  CHECK(m(0, 1) == 1.0);
  CHECK(m(1, 2) == 0.5);
  CHECK(m(0, 0) == 0.0);
  const TestFunction too_big[] = {TestFunction::constant(z, 2.0)};
  CHECK_THROWS_AS(pseudometric_from_family(too_big, pts), InvalidArgument);
}

TEST_CASE("blip of a dipole is min(2c, L d)") {
  const auto z = GroupSpec::integers(1);
  for (int d = 1; d <= 5; ++d) {
    for (double lip : {0.25, 0.5, 1.0}) {
      const auto nu = point_mass(z, Element{{0}}) - point_mass(z, Element{{d}});
      LipschitzBallSpec spec;
      spec.lipschitz_cap = lip;
      const auto res = blip_norm(nu, spec);
      CHECK(res.value == doctest::Approx(std::min(2.0, lip * d)).epsilon(1e-9));
      CHECK(evaluate(nu, res.witness) == doctest::Approx(res.value).epsilon(1e-9));
    }
  }
}

TEST_CASE("discrete metric separations") {
  std::mt19937_64 rng(21);
  const auto f2 = GroupSpec::free_group(2);
  const auto pool = ball(f2, 2);
  for (int i = 0; i < 50; ++i) {
    std::map<Element, double> c;
    for (int k = 0; k < 4; ++k) c[pool[rng() % pool.size()]] += std::uniform_real_distribution<>(0.1, 1)(rng);
    auto mu = MolecularMeasure(f2, c);
    mu = (1.0 / mu.total_mass()) * mu;
    const auto s = f2.evaluate({"a"});
    const double tv = tv_norm(mu - convolve_left(s, mu));
    LipschitzBallSpec wide;
    wide.metric = DiscreteMetric{};
    CHECK(defect_blip(mu, s, wide).value == doctest::Approx(std::min(tv, 2.0)).epsilon(1e-9));
    LipschitzBallSpec tight;
    tight.metric = DiscreteMetric{1.0};
    CHECK(defect_blip(mu, s, tight).value == doctest::Approx(tv / 2).epsilon(1e-9));
  }
}

TEST_CASE("support LP equals the full-ball LP") {
  std::mt19937_64 rng(17);
  for (const auto& g : {GroupSpec::integers(1), GroupSpec::integers(2), GroupSpec::free_group(2)}) {
    const auto domain = ball(g, 2);
    const auto inner = ball(g, 1);
    for (int i = 0; i < 10; ++i) {
      std::map<Element, double> c;
      for (int k = 0; k < 4; ++k)
        c[inner[rng() % inner.size()]] += std::uniform_int_distribution<int>(1, 8)(rng) / 8.0;
      auto mu = MolecularMeasure(g, c);
      mu = (1.0 / mu.total_mass()) * mu;
      const auto s = g.generators()[rng() % g.generators().size()].element;
      const auto nu = mu - convolve_left(s, mu);
      for (double lip : {0.5, 1.0}) {
        LipschitzBallSpec spec;
        spec.lipschitz_cap = lip;
        const auto res = defect_blip(mu, s, spec);
        INFO(g.name() << " lip=" << lip);
        CHECK(res.value == doctest::Approx(full_domain_blip(nu, domain, 1.0, lip)).epsilon(1e-9));
        CHECK(evaluate(nu, res.witness) == doctest::Approx(res.value).epsilon(1e-9));
        const auto ext = lipschitz_extension(res.witness, spec);
        CHECK(admissible(ext, ball(g, 4), g, 1.0, lip, 1e-9));
        CHECK(evaluate(nu, ext) == doctest::Approx(res.value).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("random admissible functions stay below the blip value") {
  std::mt19937_64 rng(8);
  const auto z2 = GroupSpec::integers(2);
  const auto pts = ball(z2, 3);
  const auto mu = uniform_mean(z2, ball(z2, 2));
  const auto s = z2.evaluate({"a"});
  const auto nu = mu - convolve_left(s, mu);
  const double value = defect_blip(mu, s, {}).value;
  for (int i = 0; i < 200; ++i) {
    // 1-Lipschitz by construction: a clipped distance to a random point,
    // shifted and scaled into the unit sup ball
    const auto& center = pts[rng() % pts.size()];
    const double scale = std::uniform_real_distribution<>(0.0, 1.0)(rng);
    std::map<Element, double> vals;
    for (const auto& x : pts)
      vals[x] = scale * (std::min(2.0, static_cast<double>(*z2.distance(center, x))) - 1.0);
    const TestFunction f(z2, vals, 0.0);
    REQUIRE(admissible(f, pts, z2, 1.0, 1.0, 1e-12));
    CHECK(evaluate(nu, f) <= value + 1e-9);
  }
}

TEST_CASE("extension on the naturals and with the discrete metric") {
  const auto n = GroupSpec::naturals();
  const TestFunction f(n, {{Element{{3}}, -1.0}, {Element{{5}}, 0.0}}, 0.0);
  LipschitzBallSpec spec;
  spec.lipschitz_cap = 0.5;
  const auto ext = lipschitz_extension(f, spec);
  CHECK(ext(Element{{3}}) == -1.0);
  CHECK(ext(Element{{4}}) == -0.5);
  CHECK(ext(Element{{0}}) == 0.5);
  CHECK(admissible(ext, ball(n, 12), n, 1.0, 0.5, 1e-12));
  LipschitzBallSpec disc;
  disc.metric = DiscreteMetric{1.0};
  const auto e2 = lipschitz_extension(f, disc);
  CHECK(e2(Element{{9}}) == 0.0);
}

TEST_CASE("metric table source") {
  const auto z = GroupSpec::integers(1);
  const std::vector<Element> pts = {Element{{0}}, Element{{1}}};
  LipschitzBallSpec spec;
  spec.metric = MetricTable(pts, {0.0, 0.3, 0.3, 0.0});
  const auto nu = point_mass(z, pts[0]) - point_mass(z, pts[1]);
  CHECK(blip_norm(nu, spec).value == doctest::Approx(0.3).epsilon(1e-9));
  CHECK_THROWS_AS(MetricTable(pts, {0.0}), InvalidArgument);
}

TEST_CASE("pullback functional") {
  const auto z = GroupSpec::integers(1);
  const double th = std::numbers::pi / 2;
  Matrix r(2, 2);
  r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  const AffineAction rot(z, {{"a", AffineMap{r, Vector::Zero(2)}}});
  Vector x0(2), xi(2);
  x0 << 1.0, 0.0;
  xi << 1.0, 2.0;
  const auto f = pullback_functional(xi, rot, x0, 3);
  CHECK(f(Element{{0}}) == doctest::Approx(1.0));
  CHECK(f(Element{{1}}) == doctest::Approx(2.0));
  CHECK(f(Element{{-1}}) == doctest::Approx(-2.0));
  const AffineAction blowup(z, {{"a", AffineMap{4.0 * Matrix::Identity(2, 2), Vector::Zero(2)}}});
  CHECK_THROWS_AS(pullback_functional(xi, blowup, x0, 4, 100.0), PreconditionViolation);
}
