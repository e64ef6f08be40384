#include "dayflow/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dayflow/errors.hpp"

namespace dayflow::lp {

std::size_t Problem::add_variable(double cost) {
  cost_.push_back(cost);
  return cost_.size() - 1;
}

std::size_t Problem::add_variables(std::size_t count, double cost) {
  const std::size_t first = cost_.size();
  cost_.resize(first + count, cost);
  return first;
}

void Problem::set_cost(std::size_t var, double cost) { cost_.at(var) = cost; }

void Problem::add_row(std::vector<Term> terms, Sense sense, double rhs) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (t.var >= cost_.size()) throw InvalidArgument("lp: row references an unknown variable");
    if (!merged.empty() && merged.back().var == t.var)
      merged.back().coef += t.coef;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(merged), sense, rhs});
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::IterationLimit: return "iteration-limit";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

constexpr double kDropTol = 1e-13;

// Dense simplex tableau. Columns: structural variables, then one slack or
// surplus per inequality row, then one artificial per row that needs one.
class Tableau {
 public:
  Tableau(const Problem& p, const Options& opt) : opt_(opt) {
    m_ = p.num_rows();
    n_struct_ = p.num_variables();
    negated_.assign(m_, false);
    unit_col_.assign(m_, 0);

    std::size_t n_slack = 0, n_art = 0;
    for (const auto& row : p.rows()) {
      Sense s = row.sense;
      if (row.rhs < 0) s = flip(s);
      if (s != Sense::Equal) ++n_slack;
      if (s != Sense::LessEqual) ++n_art;
    }
    art_begin_ = n_struct_ + n_slack;
    n_ = art_begin_ + n_art;
    width_ = n_ + 1;
    data_.assign(m_ * width_, 0.0);
    obj_.assign(width_, 0.0);
    basis_.assign(m_, 0);

    std::size_t next_slack = n_struct_, next_art = art_begin_;
    for (std::size_t i = 0; i < m_; ++i) {
      const auto& row = p.rows()[i];
      const double sign = row.rhs < 0 ? -1.0 : 1.0;
      negated_[i] = row.rhs < 0;
      const Sense s = negated_[i] ? flip(row.sense) : row.sense;
      double* r = at(i);
      for (const auto& t : row.terms) r[t.var] = sign * t.coef;
      r[n_] = sign * row.rhs;
      if (s == Sense::LessEqual) {
        r[next_slack] = 1.0;
        basis_[i] = unit_col_[i] = next_slack++;
      } else {
        if (s == Sense::GreaterEqual) r[next_slack++] = -1.0;
        r[next_art] = 1.0;
        basis_[i] = unit_col_[i] = next_art++;
      }
    }
    max_iter_ = opt.max_iterations ? opt.max_iterations : std::max<std::size_t>(20000, 30 * (m_ + n_));
  }

  Status run(const std::vector<double>& struct_cost, std::vector<double>& x) {
    if (art_begin_ < n_) {
      std::vector<double> c1(n_, 0.0);
      std::fill(c1.begin() + static_cast<std::ptrdiff_t>(art_begin_), c1.end(), 1.0);
      set_objective(c1);
      const Status s1 = iterate(/*allow_artificial=*/true);
      if (s1 == Status::IterationLimit) return s1;
      if (-obj_[n_] > opt_.feasibility_tol * std::max(1.0, rhs_scale())) return Status::Infeasible;
      drive_out_artificials();
    }
    std::vector<double> c2(n_, 0.0);
    std::copy(struct_cost.begin(), struct_cost.end(), c2.begin());
    set_objective(c2);
    const Status s2 = iterate(/*allow_artificial=*/false);
    x.assign(n_struct_, 0.0);
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] < n_struct_) x[basis_[i]] = std::max(0.0, at(i)[n_]);
    return s2;
  }

  // Row multipliers y with c_B B^-1, mapped back to the original row signs.
  std::vector<double> duals() const {
    std::vector<double> y(m_);
    for (std::size_t i = 0; i < m_; ++i) {
      const double v = -obj_[unit_col_[i]];
      y[i] = negated_[i] ? -v : v;
    }
    return y;
  }

  std::size_t iterations() const { return iterations_; }

 private:
  static Sense flip(Sense s) {
    if (s == Sense::LessEqual) return Sense::GreaterEqual;
    if (s == Sense::GreaterEqual) return Sense::LessEqual;
    return s;
  }

  double* at(std::size_t i) { return data_.data() + i * width_; }
  const double* at(std::size_t i) const { return data_.data() + i * width_; }

  double rhs_scale() const {
    double s = 0.0;
    for (std::size_t i = 0; i < m_; ++i) s = std::max(s, std::abs(at(i)[n_]));
    return s;
  }

  void set_objective(const std::vector<double>& c) {
    cost_ = c;
    std::fill(obj_.begin(), obj_.end(), 0.0);
    std::copy(c.begin(), c.end(), obj_.begin());
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* r = at(i);
      for (std::size_t j = 0; j < width_; ++j) obj_[j] -= cb * r[j];
    }
    for (std::size_t i = 0; i < m_; ++i) obj_[basis_[i]] = 0.0;
  }

  void pivot(std::size_t r, std::size_t q) {
    double* pr = at(r);
    const double inv = 1.0 / pr[q];
    nz_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (pr[j] == 0.0) continue;
      pr[j] *= inv;
      if (std::abs(pr[j]) < kDropTol) {
        pr[j] = 0.0;
        continue;
      }
      nz_.push_back(j);
    }
    pr[q] = 1.0;
    auto eliminate = [&](double* row) {
      const double f = row[q];
      if (f == 0.0) return;
      for (std::size_t j : nz_) {
        double v = row[j] - f * pr[j];
        if (std::abs(v) < kDropTol) v = 0.0;
        row[j] = v;
      }
      row[q] = 0.0;
    };
    for (std::size_t i = 0; i < m_; ++i)
      if (i != r) eliminate(at(i));
    eliminate(obj_.data());
    basis_[r] = q;
  }

  Status iterate(bool allow_artificial) {
    const std::size_t limit = allow_artificial ? n_ : art_begin_;
    std::size_t degenerate_run = 0;
    for (;;) {
      if (iterations_ >= max_iter_) return Status::IterationLimit;
      const bool bland = degenerate_run >= opt_.degenerate_switch;
      std::size_t q = limit;
      double best = -opt_.optimality_tol;
      for (std::size_t j = 0; j < limit; ++j) {
        if (obj_[j] < best) {
          q = j;
          if (bland) break;
          best = obj_[j];
        }
      }
      if (q == limit) return Status::Optimal;

      std::size_t r = m_;
      double best_ratio = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i)[q];
        if (a <= opt_.pivot_tol) continue;
        const double ratio = std::max(0.0, at(i)[n_]) / a;
        const double tie = 1e-12 * (1.0 + best_ratio);
        if (r == m_ || ratio < best_ratio - tie) {
          r = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + tie) {
          const bool better = bland ? basis_[i] < basis_[r] : a > at(r)[q];
          if (better) {
            r = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (r == m_) return Status::Unbounded;
      degenerate_run = best_ratio <= opt_.feasibility_tol ? degenerate_run + 1 : 0;
      pivot(r, q);
      if (at(r)[n_] < 0.0) at(r)[n_] = 0.0;
      ++iterations_;
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < art_begin_) continue;
      double* r = at(i);
      r[n_] = 0.0;
      std::size_t best = art_begin_;
      double best_abs = 1e-9;
      for (std::size_t j = 0; j < art_begin_; ++j)
        if (std::abs(r[j]) > best_abs) {
          best = j;
          best_abs = std::abs(r[j]);
        }
      // A row with no eligible entry is redundant; its artificial stays
      // basic at zero and never moves again.
      if (best < art_begin_) pivot(i, best);
    }
  }

  Options opt_;
  std::size_t m_ = 0, n_struct_ = 0, art_begin_ = 0, n_ = 0, width_ = 0;
  std::vector<double> data_;
  std::vector<double> obj_;
  std::vector<double> cost_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> unit_col_;
  std::vector<bool> negated_;
  std::vector<std::size_t> nz_;
  std::size_t iterations_ = 0;
  std::size_t max_iter_ = 0;
};

void certify(const Problem& p, Solution& sol) {
  const auto& c = p.costs();
  double primal = 0.0;
  for (std::size_t j = 0; j < c.size(); ++j) primal += c[j] * sol.x[j];
  sol.objective = primal;

  double pinf = 0.0, dinf = 0.0, dual_obj = 0.0;
  std::vector<double> reduced = c;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const auto& row = p.rows()[i];
    const double y = sol.duals[i];
    double lhs = 0.0;
    for (const auto& t : row.terms) {
      lhs += t.coef * sol.x[t.var];
      reduced[t.var] -= y * t.coef;
    }
    dual_obj += y * row.rhs;
    const double slack = lhs - row.rhs;
    switch (row.sense) {
      case Sense::LessEqual:
        pinf = std::max(pinf, slack);
        dinf = std::max(dinf, y);
        break;
      case Sense::GreaterEqual:
        pinf = std::max(pinf, -slack);
        dinf = std::max(dinf, -y);
        break;
      case Sense::Equal: pinf = std::max(pinf, std::abs(slack)); break;
    }
  }
  for (double r : reduced) dinf = std::max(dinf, -r);
  sol.dual_objective = dual_obj;
  sol.primal_infeasibility = pinf;
  sol.dual_infeasibility = dinf;
  sol.gap = std::abs(primal - dual_obj);
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  Tableau tableau(problem, options);
  Solution sol;
  sol.status = tableau.run(problem.costs(), sol.x);
  sol.iterations = tableau.iterations();
  if (sol.status == Status::Infeasible || sol.status == Status::Unbounded) {
    sol.x.assign(problem.num_variables(), 0.0);
    sol.duals.assign(problem.num_rows(), 0.0);
    return sol;
  }
  if (sol.x.empty()) sol.x.assign(problem.num_variables(), 0.0);
  sol.duals = tableau.duals();
  certify(problem, sol);
  return sol;
}

}  // namespace dayflow::lp
