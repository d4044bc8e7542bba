#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "packlab/containers.hpp"
#include "packlab/instance.hpp"

namespace packlab {

struct PipelineError : std::runtime_error {
  std::string stage;
  PipelineError(std::string stage_, const std::string& msg)
      : std::runtime_error("[" + stage_ + "] " + msg), stage(std::move(stage_)) {}
};

struct IterationEntry {
  int frac_before = 0, frac_after = 0;
  double x_total_before = 0, x_total_after = 0;
  double def_before = 0, def_after = 0;
  double rebuild_bound = 0;  // analytic cap on the rebuild deficiency increase
  int lm_retries = 0;
};

struct SolveLedger {
  std::vector<IterationEntry> iterations;
  std::string stop_reason;
  double def_final = 0;                // deficiency of the integral state packed
  double x_total_final = 0;            // 1'x after buying the fractional rest
  long long patterns_bought_frac = 0;  // fractional patterns bought at loop end
  long long extra_bins_leftovers = 0;  // bins opened packing unassigned pieces
  long long extra_bins_sprinkle = 0;   // bins opened sprinkling small items
  double opt_f_rounded = 0;            // LP optimum of the rounded large instance
  bool iteration_cap_hit = false;
};

struct BinSolution {
  std::vector<std::vector<std::pair<int, long long>>> bins;  // per bin: item type -> count
  std::string algorithm;
  std::uint64_t seed = 0;
  double opt_f = 0;  // LP optimum of the original instance
  SolveLedger ledger;

  long long bins_used() const { return static_cast<long long>(bins.size()); }
  std::string to_json() const;
};

struct VerifyReport {
  bool ok = true;
  std::string first_violation;
};

// Exact rational check: every bin fits, item counts conserved.
VerifyReport verify(const Instance& inst, const BinSolution& sol);

// First fit over the instance in stored (size-descending) order; never needs
// more than 2 * total_size + 1 bins.
BinSolution greedy_pack(const Instance& inst);

// Size split at 1/U plus geometric grouping of the large side: consecutive
// size-descending groups of total size in [2,3], every item rounded up to the
// largest size of its group. group_members maps each rounded type back to the
// original items filling its slots.
struct Preprocessed {
  Instance large;  // rounded; empty when every item is small
  std::vector<std::vector<std::pair<int, long long>>> group_members;
  std::vector<std::pair<int, long long>> small_items;  // (original type, count)
  Rat total;                                           // U
};
Preprocessed preprocess(const Instance& inst, const SolveParams& params);

// First-fit the small items over existing bins, opening new ones only when
// nothing fits; returns the number of bins opened.
long long sprinkle_small(std::vector<std::vector<std::pair<int, long long>>>& bins,
                         const Instance& inst,
                         const std::vector<std::pair<int, long long>>& small_items);

// One round of the solve loop: split off the integral part, rebuild the
// fractional container assignment, walk it to half integrality, recombine.
struct IterationOutcome {
  enum class Status { progressed, already_integral, budget_stop, lm_failed };
  Status status = Status::already_integral;
  IterationEntry entry;
  double budget = 0;
  double budget_limit = 0;
};
IterationOutcome one_iteration(PackingState& state, const SolveParams& params,
                               std::mt19937_64& rng);

// The full additive-gap solver: preprocess, LP, singleton start, iterate the
// walk until the fractional support is logarithmic, buy the rest, pack via
// the two greedy assignments, sprinkle, verify.
BinSolution solve_paper(const Instance& inst, const SolveParams& params);

}  // namespace packlab
