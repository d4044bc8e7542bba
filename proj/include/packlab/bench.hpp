#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "packlab/instance.hpp"
#include "packlab/pipeline.hpp"

namespace packlab {

// Dispatches one algorithm run; seed feeds the solver (or the arrival order
// for plain first fit). opt_f is left for the caller to stamp.
BinSolution run_algo(const Instance& inst, const std::string& algo, std::uint64_t seed,
                     SolveParams params);

long long gap_of(long long bins, double opt_f);

struct BenchSpec {
  std::vector<long long> sizes;
  std::vector<std::string> kinds;
  std::vector<std::string> algos;
  std::vector<std::uint64_t> seeds;
  GenParams gen;
  SolveParams solve;
  bool timing = false;  // wall-clock column; off keeps the CSV byte-stable
};

// CSV with header instance,n,total_items,opt_f,algo,bins,gap,seed,time_ms and
// one row per (instance, algo, seed) in deterministic order.
std::string run_bench(const BenchSpec& spec);

}  // namespace packlab
