#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "packlab/instance.hpp"
#include "packlab/rational.hpp"

namespace packlab {

// A column of the covering LP: item-type -> count, exactly feasible
// (sum of count * size <= 1). Entries sorted by item index, counts > 0.
struct ItemPattern {
  std::vector<std::pair<int, long long>> counts;

  bool operator==(const ItemPattern&) const = default;
  long long count_of(int item) const;
  std::string key() const;
};

Rat pattern_size(const Instance& inst, const ItemPattern& p);

struct LpSolution {
  std::vector<ItemPattern> columns;  // support of the basic solution
  std::vector<double> values;        // matching x_p > 0
  double objective = 0.0;
  std::vector<double> duals;         // one per item type
};

struct LpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Pricing subproblem: maximize sum duals_i * p_i over patterns with
// sum s_i p_i <= 1, by dynamic programming over the capacity lattice
// {0,...,D}. Ties prefer the lexicographically smallest count vector.
// Requires every size to be a multiple of 1/D; D is capped at 1e8.
std::pair<ItemPattern, double> price_pattern(const std::vector<Rat>& sizes,
                                             const std::vector<double>& duals, long long D);

// Column generation for min 1'x, Ax >= b, x >= 0 over all feasible patterns.
// Starts from singleton columns and stops when no priced column has reduced
// cost below -eps. The result is basic: support <= number of item types.
LpSolution solve_gg_lp(const Instance& inst, double eps = 1e-9);

// Total size as a float; OPT_f is always at least this.
double lp_lower_bound(const Instance& inst);

}  // namespace packlab
