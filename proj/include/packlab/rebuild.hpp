#pragma once

#include <string>
#include <vector>

#include "packlab/containers.hpp"
#include "packlab/instance.hpp"

namespace packlab {

// Final and shadow incidence matrices after a rebuild sweep. Rows are the
// containers touched by the patterns, largest first; columns are the pattern
// entries of the state (column index = pattern index, x untouched).
// The shadow row of a small class keeps the counts as they stood after that
// class was grouped but before its containers were merged upward, so entries
// that later vanish from `a` remain visible; shadow >= a entrywise.
struct IncidenceMatrices {
  std::vector<int> row_container;
  std::vector<Rat> row_size;
  std::vector<int> row_class;  // size class exponent l (sigma = 2^-l)
  std::vector<std::vector<long long>> a;
  std::vector<std::vector<long long>> shadow;
  int cols = 0;
  int max_glue_depth = 0;

  long long n1(int row) const;
  long long shadow_n1(int row) const;
  int row_of(int container_id) const;
};

struct RebuildStep {
  std::string op;  // "group" or "glue"
  int class_log2 = 0;
  double delta = 0.0;   // grouping budget (group steps)
  long long k = 0;      // merge arity (glue steps)
  double def_before = 0.0;
  double def_after = 0.0;
  double bound = 0.0;  // analytic cap on the deficiency increase
  std::vector<std::vector<int>> groups;  // grouped container ids; last = deleted group
};

struct RebuildLog {
  std::vector<RebuildStep> steps;
  double bound_total = 0.0;
  std::string to_json() const;
};

// Rounds scarce container types of size class 2^-l down within the class so
// every surviving type carries pattern weight at least delta; the scarcest
// remainder is dropped entirely. Deficiency grows by at most 6*delta.
void group_size_class(PackingState& state, int class_log2, double delta,
                      RebuildStep* step = nullptr);

// sigma * t_sigma where t_sigma is the worst prefix-mass drop at or below
// sigma = 2^-l between the two states. Throws if mass above sigma dropped.
double def_increase_bound(const PackingState& before, const PackingState& after, int class_log2);

// Merges k identical class-l containers inside each pattern into one k-fold
// container and rebuilds y to match (blue/red decomposition plus chunking the
// red containers size-descending into k-fold supers). Item content of y is
// unchanged; deficiency grows by at most 3*k*sigma.
void glue_size_class(PackingState& state, int class_log2, long long k,
                     RebuildStep* step = nullptr);

long long glue_arity(int class_log2);  // floor((1/sigma)^{1/4})

// glue_size_class with the canonical arity; afterwards no pattern holds more
// than (1/sigma)^{1/4} copies of any class-l container. Requires arity >= 2.
void reassign_containers(PackingState& state, int class_log2, RebuildStep* step = nullptr);

struct RebuildResult {
  IncidenceMatrices mats;
  RebuildLog log;
};

// The full sweep over size classes, smallest first: small classes get
// grouped with delta = sqrt(sigma) and then merged upward; large classes get
// grouped with params.delta_large. Expects a fractional state (x in (0,1)).
RebuildResult rebuild_all(PackingState& state, const SolveParams& params);

struct PropertyReport {
  bool a_ok = true, b_ok = true, c_ok = true;
  double c_lhs = 0, c_rhs = 0, c_constant = 0;
  std::vector<std::string> violations;
  bool all_ok() const { return a_ok && b_ok && c_ok; }
};

// (A) surviving rows carry enough incidences for their class budget,
// (B) small-class entries stay below (1/sigma)^{1/4},
// (C) shadow mass is dominated by actual mass up to the merge-series factor.
PropertyReport check_properties(const IncidenceMatrices& mats, const SolveParams& params);

}  // namespace packlab
