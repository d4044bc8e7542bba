#pragma once

#include <random>
#include <vector>

#include "packlab/instance.hpp"
#include "packlab/rebuild.hpp"

namespace packlab {

// One linear form |<x_end - x_start, v>| <= lambda * ||v||_2 handed to the
// walk; lambda = 0 means the form is preserved exactly (projection).
struct DiscrepancyConstraint {
  std::vector<double> v;
  double lambda = 0.0;
  bool exact() const { return lambda == 0.0; }
};

// A leveled row interval of one size class. lambda equals the level it was
// created on; `rule_singleton` marks rows singled out for exceeding the
// level's mass threshold (as opposed to packed intervals of cardinality 1).
struct IntervalNode {
  int lo = 0, hi = 0;  // inclusive row range
  int level = 0;
  double shadow_mass = 0.0;  // sum of shadow row norms over the range
  double v2norm = 0.0;       // ||sum of final rows||_2
  bool rule_singleton = false;
  int child_level = -1;      // level of the refinement below, -1 if terminal
  std::vector<int> kids;     // node indices within the class
};

struct ClassIntervals {
  int class_log2 = 0;
  bool small = false;
  int row_lo = 0, row_hi = 0;  // inclusive rows of this class in the matrix
  std::vector<IntervalNode> nodes;
  std::vector<int> roots;
};

struct IntervalFamily {
  std::vector<ClassIntervals> classes;
  std::vector<DiscrepancyConstraint> constraints;  // one per node, plus the all-ones objective last
  double budget = 0.0;  // sum of e^{-lambda^2/16} over nodes, plus 1 for the objective
  int n_cols = 0;
  int n_rows = 0;
};

// Levelled intervals per small size class: rows whose shadow mass exceeds
// half the level threshold K (1/sigma)^{17/16} 2^-level stand alone, the rest
// pack greedily under the threshold; refinement halves the threshold until
// everything is a singleton. Large classes contribute one exact singleton per
// row. The all-ones objective with lambda = 0 is always appended.
IntervalFamily build_intervals(const IncidenceMatrices& mats, const SolveParams& params);

// The level-l cut of a class: node indices whose intervals partition the
// class rows at that level (a node is active from its creation level until
// its refinement level).
std::vector<int> level_cut(const ClassIntervals& cls, int level);

struct WalkTrace {
  std::vector<int> frozen_per_step;
  std::vector<int> freeze_step;      // per coordinate, -1 if never frozen
  std::vector<double> freeze_value;  // coordinate value at freeze time
};

struct WalkResult {
  enum class Status { success, budget_rejected, retries_exhausted };
  Status status = Status::budget_rejected;
  std::vector<double> x_end;
  int integral_count = 0;
  int retries_used = 0;  // 0 = first attempt succeeded
  WalkTrace trace;       // populated when params.lm_trace is set
};

// Lovett-Meka style partial coloring: Gaussian steps projected orthogonally
// to the exact constraints, frozen coordinates, and inequality constraints
// that have become tight; steps truncate exactly at the first wall hit, so
// coordinates freeze exactly on {0,1} and inequalities never overshoot.
// Requires sum_j e^{-lambda_j^2/16} <= N/16. On success at least half of the
// coordinates are integral (after snapping within snap_tol).
WalkResult partial_color(const std::vector<double>& x_start,
                         const std::vector<DiscrepancyConstraint>& constraints,
                         const SolveParams& params, std::mt19937_64& rng);

// Sum of lambda_I ||v_I||_2 over the interval decomposition of rows 0..i.
// Prefixes ending on a class boundary, or inside large classes, cost 0.
double prefix_error_bound(const IntervalFamily& family, int row_prefix_end);

}  // namespace packlab
