#pragma once

#include <vector>

#include "packlab/instance.hpp"
#include "packlab/pipeline.hpp"

namespace packlab {

// Classic first fit over an explicit arrival order: `order` lists item types
// with each type i appearing exactly mult[i] times.
BinSolution first_fit(const Instance& inst, const std::vector<int>& order);

// First fit on the size-descending expansion.
BinSolution first_fit_decreasing(const Instance& inst);

// A seed-shuffled arrival order (the "online" counterpart of FFD).
std::vector<int> shuffled_order(const Instance& inst, std::uint64_t seed);

// Iterative LP rounding: geometrically group the residual, solve the covering
// LP, buy the integer floors, recurse on what is left; greedy once the
// residual fits in one bin.
BinSolution karmarkar_karp(const Instance& inst, const SolveParams& params);

}  // namespace packlab
