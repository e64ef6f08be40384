#include "dayflow/selftest.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "dayflow/actions.hpp"
#include "dayflow/groups.hpp"
#include "dayflow/measures.hpp"
#include "dayflow/solver.hpp"
#include "dayflow/testfn.hpp"

namespace dayflow {

namespace {

std::vector<GroupSpec> sample_groups() {
  return {GroupSpec::integers(2),  GroupSpec::cyclic(5),    GroupSpec::symmetric(4),
          GroupSpec::free_group(2), GroupSpec::heisenberg(), GroupSpec::lamplighter(),
          GroupSpec::naturals()};
}

template <typename Rng>
Element pick(const std::vector<Element>& pool, Rng& rng) {
  std::uniform_int_distribution<std::size_t> d(0, pool.size() - 1);
  return pool[d(rng)];
}

template <typename Rng>
MolecularMeasure random_mean(const GroupSpec& g, const std::vector<Element>& pool, Rng& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::map<Element, double> w;
  double total = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double x = u(rng);
    w[pick(pool, rng)] += x;
    total += x;
  }
  for (auto& [k, v] : w) v /= total;
  return MolecularMeasure(g, std::move(w));
}

}  // namespace

bool run_selftest(std::uint64_t seed, std::ostream& out) {
  std::mt19937_64 rng(seed);
  bool all = true;
  auto report = [&](const std::string& name, const std::function<bool()>& check) {
    bool ok = false;
    try {
      ok = check();
    } catch (const std::exception& e) {
      out << "  error: " << e.what() << "\n";
    }
    out << (ok ? "PASS " : "FAIL ") << name << "\n";
    all = all && ok;
  };

  for (const auto& g : sample_groups()) {
    const auto pool = ball(g, 3);
    report("associativity " + g.name(), [&] {
      for (int i = 0; i < 100; ++i) {
        const auto a = pick(pool, rng), b = pick(pool, rng), c = pick(pool, rng);
        if (g.multiply(g.multiply(a, b), c) != g.multiply(a, g.multiply(b, c))) return false;
      }
      return true;
    });
    report("convolution " + g.name(), [&] {
      for (int i = 0; i < 100; ++i) {
        const auto s = pick(pool, rng), t = pick(pool, rng);
        const auto mu = random_mean(g, pool, rng);
        if (convolve_left(s, convolve_left(t, mu)) != convolve_left(g.multiply(s, t), mu))
          return false;
        if (!is_mean(convolve_left(s, mu), 1e-12)) return false;
        std::map<Element, double> vals;
        for (const auto& x : pool) vals[x] = std::uniform_real_distribution<double>(-1, 1)(rng);
        const TestFunction f(g, std::move(vals), 0.25);
        if (evaluate(convolve_left(s, mu), f) != evaluate(mu, left_translate(s, f))) return false;
      }
      return true;
    });
  }

  report("residual identity (rotation of Z)", [&] {
    const double th = std::numbers::pi / 3;
    Matrix r(2, 2);
    r << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    Vector p(2);
    p << 1.0, 0.0;
    const GroupSpec z = GroupSpec::integers(1);
    const AffineAction action(z, {{"a", AffineMap{r, p - r * p}}});
    Vector x0(2);
    x0 << 2.0, 0.0;
    std::vector<IndexedMean> means;
    for (int n = 1; n <= 30; ++n) {
      std::vector<Element> window;
      for (int k = 0; k < n; ++k) window.push_back(Element{{k}});
      means.push_back({n, uniform_mean(z, window)});
    }
    const auto trace = afp_pipeline(action, x0, means);
    for (const auto& row : trace.rows) {
      if (row.residual_identity_error > 1e-10 || !row.residual_bound_holds) return false;
      if ((row.point - p).norm() > 2.0 / static_cast<double>(row.index) + 1e-9) return false;
    }
    return true;
  });

  report("LP sandwich (Z, F_2)", [&] {
    for (const auto& g : {GroupSpec::integers(1), GroupSpec::free_group(2)}) {
      double previous = 2.0;
      for (std::size_t r = 0; r <= 2; ++r) {
        SolveConfig cfg;
        cfg.radius = r;
        const auto rep = solve_invariant_mean(g, cfg);
        const double folner = max_generator_defect(folner_uniform(g, r), TvDefect{});
        if (rep.max_defect > folner + 1e-9 || rep.max_defect > previous + 1e-9) return false;
        if (!is_mean(rep.mean, 1e-9)) return false;
        previous = rep.max_defect;
      }
    }
    return true;
  });

  report("finite group exact invariance (S_3)", [&] {
    SolveConfig cfg;
    cfg.radius = 3;
    return solve_invariant_mean(GroupSpec::symmetric(3), cfg).max_defect <= 1e-9;
  });

  return all;
}

}  // namespace dayflow
