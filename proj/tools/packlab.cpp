#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "packlab/baselines.hpp"
#include "packlab/bench.hpp"
#include "packlab/instance.hpp"
#include "packlab/lp.hpp"
#include "packlab/pipeline.hpp"

namespace {

std::uint64_t env_seed() {
  const char* v = std::getenv("PACKLAB_SEED");
  if (!v) return 0;
  return std::strtoull(v, nullptr, 10);
}

int sigma_exponent(const std::string& text) {
  packlab::Rat r = packlab::parse_rational(text);
  if (r <= 0 || r > 1 || !packlab::is_power_of_two(r))
    throw CLI::ValidationError("--sigma-small must be a power of two in (0,1]");
  int l = 0;
  while (packlab::Rat(1, 1LL << l) != r) ++l;
  return l;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bin packing lab: LP rounding pipeline and classical baselines"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  std::string gen_kind;
  long long gen_n = 0;
  std::uint64_t gen_seed = env_seed();
  packlab::GenParams gen_params;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "uniform | three_partition | discrete")->required();
  gen->add_option("--n", gen_n, "number of items")->required();
  gen->add_option("--seed", gen_seed, "rng seed");
  gen->add_option("--lattice", gen_params.lattice, "size lattice denominator");
  gen->add_option("--k", gen_params.distinct, "distinct sizes (discrete kind)");
  gen->add_option("-o,--output", gen_out, "output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "solve one instance");
  std::string solve_file, solve_algo, solve_out, solve_sigma;
  std::uint64_t solve_seed = env_seed();
  bool paper_constants = false, timing = false;
  packlab::SolveParams sparams;
  solve->add_option("file", solve_file, "instance file")->required();
  solve->add_option("--algo", solve_algo, "paper | kk | ff | ffd")->required();
  solve->add_option("--seed", solve_seed, "rng seed");
  solve->add_option("-o,--output", solve_out, "write solution JSON here");
  solve->add_flag("--paper-constants", paper_constants, "use the analysis constants");
  solve->add_option("--sigma-small", solve_sigma, "small/large class threshold (power of two)");
  solve->add_option("--delta-large", sparams.delta_large, "grouping budget for large classes");
  solve->add_option("--K", sparams.budget_K, "interval mass constant");
  solve->add_option("--L", sparams.support_L, "support gate constant");
  solve->add_flag("--timing", timing, "report wall time (breaks byte determinism)");

  // bench
  auto* bench = app.add_subcommand("bench", "benchmark grid to CSV");
  packlab::BenchSpec spec;
  std::string bench_out, bench_sigma;
  bool bench_paper_constants = false;
  bench->add_option("--sizes", spec.sizes, "item counts")->required()->delimiter(',');
  bench->add_option("--kinds", spec.kinds, "generator kinds")->delimiter(',');
  bench->add_option("--algos", spec.algos, "algorithms")->required()->delimiter(',');
  bench->add_option("--seeds", spec.seeds, "seeds")->required()->delimiter(',');
  bench->add_option("--lattice", spec.gen.lattice, "size lattice denominator");
  bench->add_option("-o,--output", bench_out, "CSV path (default stdout)");
  bench->add_flag("--paper-constants", bench_paper_constants, "use the analysis constants");
  bench->add_option("--sigma-small", bench_sigma, "small/large class threshold");
  bench->add_option("--delta-large", spec.solve.delta_large, "grouping budget for large classes");
  bench->add_option("--K", spec.solve.budget_K, "interval mass constant");
  bench->add_option("--L", spec.solve.support_L, "support gate constant");
  bench->add_flag("--timing", spec.timing, "wall-clock column (breaks byte determinism)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    if (gen->parsed()) {
      packlab::Instance inst =
          packlab::generate(packlab::parse_gen_kind(gen_kind), gen_n, gen_seed, gen_params);
      std::string text = "# " + inst.name + "\n" + packlab::serialize_instance(inst);
      if (gen_out.empty()) {
        std::cout << text;
      } else {
        std::ofstream f(gen_out);
        f << text;
      }
      return 0;
    }

    if (solve->parsed()) {
      if (solve_algo != "paper" && solve_algo != "kk" && solve_algo != "ff" && solve_algo != "ffd") {
        std::cerr << "unknown algo: " << solve_algo << "\n";
        return 2;
      }
      if (paper_constants) sparams = packlab::SolveParams::paper_defaults();
      if (!solve_sigma.empty()) sparams.small_class_log2 = sigma_exponent(solve_sigma);
      packlab::Instance inst = packlab::load_instance_file(solve_file);
      auto t0 = std::chrono::steady_clock::now();
      packlab::BinSolution sol = packlab::run_algo(inst, solve_algo, solve_seed, sparams);
      auto t1 = std::chrono::steady_clock::now();
      if (sol.opt_f == 0 && inst.num_types() > 0) sol.opt_f = packlab::solve_gg_lp(inst).objective;
      packlab::VerifyReport rep = packlab::verify(inst, sol);
      long long ms = timing
                         ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count()
                         : 0;
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.6f", sol.opt_f);
      std::cout << solve_algo << " " << sol.bins_used() << " " << buf << " "
                << packlab::gap_of(sol.bins_used(), sol.opt_f) << " " << solve_seed << " " << ms
                << "\n";
      if (!solve_out.empty()) {
        std::ofstream f(solve_out);
        f << sol.to_json() << "\n";
      }
      if (!rep.ok) {
        std::cerr << "verification failed: " << rep.first_violation << "\n";
        return 1;
      }
      return 0;
    }

    if (bench->parsed()) {
      for (const std::string& algo : spec.algos)
        if (algo != "paper" && algo != "kk" && algo != "ff" && algo != "ffd") {
          std::cerr << "unknown algo: " << algo << "\n";
          return 2;
        }
      if (spec.kinds.empty()) spec.kinds = {"uniform"};
      for (const std::string& kind : spec.kinds) packlab::parse_gen_kind(kind);
      if (bench_paper_constants) {
        bool t = spec.timing;
        auto keep = spec.solve;
        spec.solve = packlab::SolveParams::paper_defaults();
        spec.solve.delta_large = keep.delta_large;
        spec.timing = t;
      }
      if (!bench_sigma.empty()) spec.solve.small_class_log2 = sigma_exponent(bench_sigma);
      std::string csv = packlab::run_bench(spec);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(bench_out);
        f << csv;
      }
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
