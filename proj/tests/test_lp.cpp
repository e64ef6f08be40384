#include <doctest.h>

#include <cmath>
#include <random>

#include "dayflow/lp.hpp"
#include "dayflow/groups.hpp"
#include "oracle/tv_oracle.hpp"
#include "regression_constants.hpp"

using namespace dayflow;
using lp::Sense;

namespace {

oracle::RowSense to_oracle(Sense s) {
  switch (s) {
    case Sense::LessEqual: return oracle::RowSense::Le;
    case Sense::GreaterEqual: return oracle::RowSense::Ge;
    default: return oracle::RowSense::Eq;
  }
}

// integer data so the exact copy is the same problem
oracle::RationalLp exact_copy(const lp::Problem& p) {
  oracle::RationalLp q;
  for (double c : p.costs()) q.add_var(mpq_class(c));
  for (const auto& row : p.rows()) {
    std::vector<std::pair<std::size_t, mpq_class>> terms;
    for (const auto& t : row.terms) terms.push_back({t.var, mpq_class(t.coef)});
    q.add_row(terms, to_oracle(row.sense), mpq_class(row.rhs));
  }
  return q;
}

double row_activity(const lp::Problem::Row& row, const std::vector<double>& x) {
  double s = 0.0;
  for (const auto& t : row.terms) s += t.coef * x[t.var];
  return s;
}

}  // namespace

TEST_CASE("textbook maximization") {
  lp::Problem p;
  const auto x = p.add_variable(-3.0), y = p.add_variable(-5.0);
  p.add_row({{x, 1.0}}, Sense::LessEqual, 4.0);
  p.add_row({{y, 2.0}}, Sense::LessEqual, 12.0);
  p.add_row({{x, 3.0}, {y, 2.0}}, Sense::LessEqual, 18.0);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(-36.0));
  CHECK(s.x[x] == doctest::Approx(2.0));
  CHECK(s.x[y] == doctest::Approx(6.0));
  CHECK(s.gap < 1e-9);
  // duals of <= rows in a minimization are nonpositive
  for (double d : s.duals) CHECK(d <= 1e-12);
  CHECK(s.dual_objective == doctest::Approx(-36.0));
}

TEST_CASE("equality, >= rows and negative right-hand sides") {
  lp::Problem p;
  const auto x = p.add_variable(1.0), y = p.add_variable(2.0), z = p.add_variable(0.0);
  p.add_row({{x, 1.0}, {y, 1.0}, {z, 1.0}}, Sense::Equal, 3.0);
  p.add_row({{x, -1.0}, {y, -1.0}}, Sense::LessEqual, -2.0);  // x + y >= 2
  p.add_row({{y, 1.0}}, Sense::GreaterEqual, 0.5);
  const auto s = lp::solve(p);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(2.5));
  CHECK(s.primal_infeasibility < 1e-9);
}

TEST_CASE("duplicate terms are merged") {
  lp::Problem p;
  const auto x = p.add_variable(-1.0);
  p.add_row({{x, 1.0}, {x, 1.0}}, Sense::LessEqual, 4.0);
  REQUIRE(p.rows()[0].terms.size() == 1);
  CHECK(lp::solve(p).x[x] == doctest::Approx(2.0));
}

TEST_CASE("infeasible and unbounded") {
  lp::Problem p;
  const auto x = p.add_variable(1.0);
  p.add_row({{x, 1.0}}, Sense::LessEqual, 1.0);
  p.add_row({{x, 1.0}}, Sense::GreaterEqual, 2.0);
  CHECK(lp::solve(p).status == lp::Status::Infeasible);

  lp::Problem q;
  const auto a = q.add_variable(-1.0), b = q.add_variable(0.0);
  q.add_row({{a, 1.0}, {b, -1.0}}, Sense::LessEqual, 1.0);
  CHECK(lp::solve(q).status == lp::Status::Unbounded);
}

TEST_CASE("Beale's cycling example terminates") {
  // cycles under the textbook largest-coefficient rule without anti-cycling
  lp::Problem p;
  const auto x1 = p.add_variable(-0.75), x2 = p.add_variable(20.0), x3 = p.add_variable(-0.5),
             x4 = p.add_variable(6.0);
  p.add_row({{x1, 0.25}, {x2, -8.0}, {x3, -1.0}, {x4, 9.0}}, Sense::LessEqual, 0.0);
  p.add_row({{x1, 0.5}, {x2, -12.0}, {x3, -0.5}, {x4, 3.0}}, Sense::LessEqual, 0.0);
  p.add_row({{x3, 1.0}}, Sense::LessEqual, 1.0);
  lp::Options opt;
  opt.degenerate_switch = 1;
  const auto s = lp::solve(p, opt);
  REQUIRE(s.status == lp::Status::Optimal);
  CHECK(s.objective == doctest::Approx(-1.25));
  CHECK(lp::solve(p).objective == doctest::Approx(-1.25));
}

TEST_CASE("iteration limit is reported") {
  lp::Problem p;
  std::vector<lp::Term> all;
  for (int i = 0; i < 10; ++i) all.push_back({p.add_variable(-1.0 - i), 1.0});
  for (int i = 0; i < 10; ++i) p.add_row({{static_cast<std::size_t>(i), 1.0}}, Sense::LessEqual, 1.0);
  lp::Options opt;
  opt.max_iterations = 2;
  CHECK(lp::solve(p, opt).status == lp::Status::IterationLimit);
}

TEST_CASE("random problems agree with the exact simplex") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> coef(-5, 5), small(0, 6), pick(0, 3);
  int compared = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 7, m = 1 + trial % 6;
    lp::Problem p;
    for (std::size_t j = 0; j < n; ++j) p.add_variable(coef(rng));
    // a known feasible point keeps most instances feasible
    std::vector<double> x0(n);
    for (auto& v : x0) v = small(rng);
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<lp::Term> terms;
      for (std::size_t j = 0; j < n; ++j) terms.push_back({j, static_cast<double>(coef(rng))});
      double act = 0.0;
      for (const auto& t : terms) act += t.coef * x0[t.var];
      switch (pick(rng)) {
        case 0: p.add_row(terms, Sense::Equal, act); break;
        case 1: p.add_row(terms, Sense::GreaterEqual, act - small(rng)); break;
        default: p.add_row(terms, Sense::LessEqual, act + small(rng)); break;
      }
    }
    // box to keep it bounded
    for (std::size_t j = 0; j < n; ++j) p.add_row({{j, 1.0}}, Sense::LessEqual, 10.0);

    const auto fast = lp::solve(p);
    const auto exact = oracle::solve_exact(exact_copy(p));
    REQUIRE(exact.feasible);
    REQUIRE(fast.status == lp::Status::Optimal);
    CHECK(fast.objective == doctest::Approx(exact.objective.get_d()).epsilon(1e-9));
    CHECK(fast.gap <= 1e-9);
    CHECK(fast.primal_infeasibility <= 1e-9);
    CHECK(fast.dual_infeasibility <= 1e-9);
    for (std::size_t i = 0; i < p.num_rows(); ++i) {
      const auto& row = p.rows()[i];
      const double a = row_activity(row, fast.x);
      if (row.sense == Sense::LessEqual) CHECK(a <= row.rhs + 1e-9);
      if (row.sense == Sense::GreaterEqual) CHECK(a >= row.rhs - 1e-9);
      if (row.sense == Sense::Equal) CHECK(std::abs(a - row.rhs) <= 1e-9);
    }
    ++compared;
  }
  CHECK(compared == 300);
}

TEST_CASE("pinned free group constants reproduce from the oracle") {
  const auto f2 = GroupSpec::free_group(2);
  const auto r1 = oracle::exact_tv_floor(f2, 1), r2 = oracle::exact_tv_floor(f2, 2);
  CHECK(r1.value == mpq_class(pinned::kF2TvFloorR1Num, pinned::kF2TvFloorR1Den));
  CHECK(r2.value == mpq_class(pinned::kF2TvFloorR2Num, pinned::kF2TvFloorR2Den));
  CHECK(static_cast<double>(pinned::kF2TvFloorR2Num) / pinned::kF2TvFloorR2Den == pinned::kF2TvFloorR2);
}
