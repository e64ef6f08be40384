#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dayflow/actions.hpp"
#include "dayflow/groups.hpp"
#include "dayflow/measures.hpp"
#include "dayflow/testfn.hpp"

namespace dayflow {

// |mu - s*mu|_TV
struct TvDefect {};
// Bounded-Lipschitz distance between mu and s*mu.
struct BlipDefectKind {
  LipschitzBallSpec ball;
};
// max over a finite family of |(mu - s*mu)(f)|.
struct WeakDefectKind {
  std::vector<TestFunction> family;
};

using DefectKind = std::variant<TvDefect, BlipDefectKind, WeakDefectKind>;

std::string kind_name(const DefectKind& kind);

// Invariance defect of mu under an arbitrary element s (not only a
// generator), so defects of longer words can be checked directly.
double defect(const MolecularMeasure& mu, const Element& s, const DefectKind& kind);

struct SolveConfig {
  std::size_t radius = 0;
  DefectKind kind = TvDefect{};
  double tolerance = 1e-9;
  // Generator names to control; empty means all generators.
  std::vector<std::string> generators;
  std::size_t cap = default_enumeration_cap();
};

enum class LpStatus {
  Optimal,
  // The LP stopped at a basis whose certified gap exceeds the tolerance.
  FeasibleSuboptimal,
  // The simplex iteration cap was reached.
  CapHit,
};

std::string to_string(LpStatus status);

struct DefectReport {
  MolecularMeasure mean;
  // Recomputed from `mean` by the defect routines, not read off the LP.
  std::map<std::string, double> defects;
  double max_defect = 0.0;
  double lp_objective = 0.0;
  double gap = 0.0;
  std::size_t radius = 0;
  double millis = 0.0;
  LpStatus status = LpStatus::Optimal;
  std::size_t lp_variables = 0;
  std::size_t lp_rows = 0;
  std::size_t iterations = 0;
};

// The uniform mean on ball(r).
MolecularMeasure folner_uniform(const GroupSpec& group, std::size_t radius,
                                std::size_t cap = default_enumeration_cap());

// max over the named generators (all when empty) of defect(mu, s, kind).
double max_generator_defect(const MolecularMeasure& mu, const DefectKind& kind,
                            std::span<const std::string> generators = {});

// Minimizes max_s defect(mu, s) over means supported on ball(r) by a single
// linear program.
DefectReport solve_invariant_mean(const GroupSpec& group, const SolveConfig& config);

struct ProfileRow {
  std::size_t radius = 0;
  double folner_defect = 0.0;
  double lp_defect = 0.0;
  LpStatus status = LpStatus::Optimal;
  double millis = 0.0;
};

// Rows for r = 0..r_max, evaluated on up to `jobs` threads.
std::vector<ProfileRow> defect_profile(const GroupSpec& group, std::size_t r_max,
                                       const DefectKind& kind, std::size_t jobs = 1);

struct ConvexifyResult {
  std::vector<double> weights;
  Vector point;
  std::map<std::string, double> residuals;            // |p - s.p|_inf
  std::map<std::string, double> residuals_euclidean;  // |p - s.p|_2 at the same p
  double max_residual = 0.0;
};

// Convex combination of the points minimizing max_s |p - s.p|_inf.
ConvexifyResult day_convexify(std::span<const Vector> points, const AffineAction& action);

}  // namespace dayflow
