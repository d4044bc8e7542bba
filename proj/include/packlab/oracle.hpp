#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <vector>

#include "packlab/instance.hpp"
#include "packlab/lp.hpp"
#include "packlab/packgraph.hpp"

namespace packlab {

// Arbitrary-precision rationals for the exact LP oracle; simplex pivots can
// grow denominators past 64 bits.
using BigRat = boost::multiprecision::cpp_rational;

inline BigRat to_bigrat(const Rat& r) { return BigRat(r.numerator(), r.denominator()); }

// Guards are hard errors so a test can never silently trust a partial oracle.
struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Every feasible nonempty pattern, by exhaustive DFS with exact feasibility.
// Guards: at most 8 item types and 1e6 patterns.
std::vector<ItemPattern> enumerate_patterns(const Instance& inst);

// Full LP over all enumerated columns on the shared simplex core.
double exact_lp(const Instance& inst);

// Exact minimum bin count by memoized search over residual multiplicity
// vectors, branching on maximal feasible patterns. Guard: at most 15 items.
long long exact_opt(const Instance& inst);

// Exact minimum-deficiency via a transportation LP in exact arithmetic.
// Guard: at most 12 nodes per side.
BigRat exact_deficiency(const RationalPackingGraph& g);

}  // namespace packlab
