#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "packlab/rational.hpp"

namespace packlab {

// A bin packing instance: distinct sizes in strictly decreasing order, each
// with a positive multiplicity. Immutable after construction.
struct Instance {
  std::vector<Rat> sizes;        // strictly decreasing, each in (0,1]
  std::vector<long long> mult;   // same length, all >= 1
  std::string name;

  int num_types() const { return static_cast<int>(sizes.size()); }
  long long total_items() const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Builds an instance from (size, multiplicity) pairs: merges duplicates,
// sorts descending, validates sizes in (0,1] and mult >= 1.
Instance make_instance(std::vector<std::pair<Rat, long long>> items, std::string name = "");

// Text format: one "<size> <multiplicity>" per line, '#' starts a comment.
// Sizes may be decimals or "p/q"; both are read exactly.
Instance parse_instance(const std::string& text, std::string name = "");
std::string serialize_instance(const Instance& inst);

Instance load_instance_file(const std::string& path);

// Exact total size sum b_i * s_i.
Rat total_size(const Instance& inst);

// Common denominator of all sizes (capped; pricing DP runs on this lattice).
// Throws if the lcm exceeds `limit`.
long long common_denominator(const Instance& inst, long long limit = 100000000);

enum class GenKind { uniform, three_partition, discrete };

struct GenParams {
  long long lattice = 10000;  // sizes are multiples of 1/lattice
  int distinct = 3;           // size-set cardinality for GenKind::discrete
};

GenKind parse_gen_kind(const std::string& kind);

// Deterministic instance generator: same (kind, n, seed, params) gives a
// bit-identical instance. n counts items before duplicate merging.
Instance generate(GenKind kind, long long n, std::uint64_t seed, const GenParams& params = {});

// Solver knobs. The defaults are desk-scale; paper_defaults() switches the
// thresholds to the constants used in the analysis (which only pay off on
// astronomically large instances).
struct SolveParams {
  int small_class_log2 = 4;     // classes sigma <= 2^-small_class_log2 are "small"
  double delta_large = 64.0;    // grouping budget for large size classes
  double budget_K = 2.0;        // interval mass threshold constant
  double support_L = 1.0;       // minimum support multiplier for a walk iteration
  double frac_stop_c = 1.0;     // stop when |frac| <= c * log2(1/s_min)

  double lm_gamma = 0.05;       // random walk step scale
  double lm_delta_freeze = 1e-9;
  double lm_c_t = 64.0;         // step count = c_t / gamma^2
  int lm_retries = 20;
  double lm_snap_tol = 1e-6;
  double lm_slack = 1e-6;
  bool lm_trace = false;

  std::uint64_t rng_seed = 0;
  bool paper_constants = false;

  static SolveParams paper_defaults() {
    SolveParams p;
    p.small_class_log2 = 72;
    p.delta_large = 64.0;
    p.paper_constants = true;
    return p;
  }

  void validate() const;
};

}  // namespace packlab
