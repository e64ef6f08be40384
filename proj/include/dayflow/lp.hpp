#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace dayflow::lp {

enum class Sense { LessEqual, GreaterEqual, Equal };

struct Term {
  std::size_t var;
  double coef;
};

// minimize c.x subject to rows (a_i . x  sense_i  b_i) and x >= 0.
class Problem {
 public:
  std::size_t add_variable(double cost = 0.0);
  std::size_t add_variables(std::size_t count, double cost = 0.0);
  void set_cost(std::size_t var, double cost);
  // Terms with repeated variables are summed.
  void add_row(std::vector<Term> terms, Sense sense, double rhs);

  std::size_t num_variables() const { return cost_.size(); }
  std::size_t num_rows() const { return rows_.size(); }

  struct Row {
    std::vector<Term> terms;
    Sense sense;
    double rhs;
  };
  const std::vector<double>& costs() const { return cost_; }
  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::vector<double> cost_;
  std::vector<Row> rows_;
};

enum class Status { Optimal, IterationLimit, Infeasible, Unbounded };

std::string to_string(Status status);

struct Options {
  double feasibility_tol = 1e-9;
  double optimality_tol = 1e-9;
  double pivot_tol = 1e-9;
  // 0 selects a limit proportional to the problem size.
  std::size_t max_iterations = 0;
  // Consecutive degenerate pivots after which the entering rule falls back
  // from Dantzig's to Bland's.
  std::size_t degenerate_switch = 50;
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  // One multiplier per row, for the original row signs.
  std::vector<double> duals;
  double dual_objective = 0.0;
  // Certificate quality, recomputed from the original data.
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double gap = 0.0;
  std::size_t iterations = 0;
};

Solution solve(const Problem& problem, const Options& options = {});

}  // namespace dayflow::lp
