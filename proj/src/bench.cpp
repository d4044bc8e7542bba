#include "packlab/bench.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "packlab/baselines.hpp"
#include "packlab/lp.hpp"

namespace packlab {

BinSolution run_algo(const Instance& inst, const std::string& algo, std::uint64_t seed,
                     SolveParams params) {
  params.rng_seed = seed;
  if (algo == "paper") return solve_paper(inst, params);
  if (algo == "kk") return karmarkar_karp(inst, params);
  if (algo == "ffd") {
    BinSolution sol = first_fit_decreasing(inst);
    sol.seed = seed;
    return sol;
  }
  if (algo == "ff") {
    BinSolution sol = first_fit(inst, shuffled_order(inst, seed));
    sol.seed = seed;
    return sol;
  }
  throw std::invalid_argument("unknown algorithm: " + algo);
}

long long gap_of(long long bins, double opt_f) {
  return bins - static_cast<long long>(std::ceil(opt_f - 1e-7));
}

std::string run_bench(const BenchSpec& spec) {
  std::ostringstream out;
  out << "instance,n,total_items,opt_f,algo,bins,gap,seed,time_ms\n";
  char buf[64];
  for (const std::string& kind : spec.kinds) {
    for (long long n : spec.sizes) {
      for (std::uint64_t seed : spec.seeds) {
        Instance inst = generate(parse_gen_kind(kind), n, seed, spec.gen);
        double opt_f = solve_gg_lp(inst).objective;
        for (const std::string& algo : spec.algos) {
          auto t0 = std::chrono::steady_clock::now();
          BinSolution sol = run_algo(inst, algo, seed, spec.solve);
          auto t1 = std::chrono::steady_clock::now();
          long long ms =
              spec.timing
                  ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
                  : 0;
          std::snprintf(buf, sizeof buf, "%.6f", opt_f);
          out << inst.name << "," << inst.num_types() << "," << inst.total_items() << "," << buf
              << "," << algo << "," << sol.bins_used() << "," << gap_of(sol.bins_used(), opt_f)
              << "," << seed << "," << ms << "\n";
        }
      }
    }
  }
  return out.str();
}

}  // namespace packlab
