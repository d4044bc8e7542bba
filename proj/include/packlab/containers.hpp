#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "packlab/instance.hpp"
#include "packlab/lp.hpp"
#include "packlab/packgraph.hpp"
#include "packlab/rational.hpp"

namespace packlab {

// An interned multiset of items with exact size <= 1. glue_depth counts how
// many merge generations produced it (0 for anything never glued).
struct Container {
  std::vector<std::pair<int, long long>> counts;  // item -> count, sorted by item
  Rat size;
  int glue_depth = 0;
};

// Equal count multisets share one id for the lifetime of the registry.
class ContainerRegistry {
 public:
  explicit ContainerRegistry(std::vector<Rat> item_sizes);

  int intern(std::vector<std::pair<int, long long>> counts, int glue_depth = 0);
  int intern_singleton(int item);
  // id of k*C; glue depth becomes depth(C) + 1.
  int intern_scaled(int id, long long k);

  const Container& get(int id) const { return containers_[id]; }
  int count() const { return static_cast<int>(containers_.size()); }
  const std::vector<Rat>& item_sizes() const { return item_sizes_; }

 private:
  std::vector<Rat> item_sizes_;
  std::vector<Container> containers_;
  std::map<std::vector<std::pair<int, long long>>, int> index_;
};

// One tracked pattern instance. Identical container multisets may appear as
// separate entries; the rebuild machinery treats columns individually.
struct PatternEntry {
  std::vector<std::pair<int, long long>> counts;  // container-id -> count, sorted
  double x = 0.0;

  long long count_of(int cid) const;
};

// The object the whole pipeline transforms: fractional pattern vector x,
// integral container inventory y, residual item demands b.
struct PackingState {
  std::shared_ptr<ContainerRegistry> reg;
  std::vector<long long> b;
  std::vector<PatternEntry> patterns;
  std::map<int, long long> y;

  Rat pattern_size(const PatternEntry& p) const;
  double x_total() const;
  int support_size() const;  // patterns with x > 0
  int frac_count() const;    // patterns with 0 < x < 1
  void drop_zero_patterns();
};

// slots the patterns provide for container C: sum_p x_p * p_C.
double mult_in_x(const PackingState& state, int container_id);

PackingGraph build_g1(const PackingState& state);
PackingGraph build_g2(const PackingState& state);
double deficiency(const PackingState& state);

// Exact variants; x values must convert to rationals exactly (dyadic doubles
// with small denominators, as in hand-built fixtures).
Rat rat_from_dyadic(double v);
RationalPackingGraph build_g1_exact(const PackingState& state);
RationalPackingGraph build_g2_exact(const PackingState& state);
Rat deficiency_exact(const PackingState& state);

// Per-item totals inside the container inventory: sum_C y_C * C_i.
std::vector<long long> y_item_totals(const PackingState& state);

// Singleton containers plus the LP columns as singleton patterns; the
// resulting state has zero deficiency and support <= number of types.
PackingState starting_state(const Instance& inst, const LpSolution& lp);

// Floor split: the integral part (floor of every x, with matched y-hat and
// b-hat found by the red-first greedy) and the fractional remainder. The
// integral part has zero deficiency and the remainder keeps the original one.
struct SplitState {
  PackingState integral;
  PackingState fractional;
};
SplitState split_integral(const PackingState& state);
PackingState combine_states(const PackingState& a, const PackingState& b);

// Prefix-dominance in container size: for every s, tilde covers at least as
// much mass at size >= s (x_succeq), or uses at most as many containers
// (y_preceq).
bool x_succeq(const PackingState& tilde, const PackingState& base, double tol = 1e-9);
bool y_preceq(const PackingState& tilde, const PackingState& base);

// Debug dump (containers, patterns, x, y) for test fixtures.
std::string state_to_json(const PackingState& state);

}  // namespace packlab
