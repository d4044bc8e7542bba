#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "packlab/lp.hpp"
#include "packlab/oracle.hpp"

using namespace packlab;

namespace {

// Independent pricing oracle: maximize duals'p over every feasible pattern.
double best_pattern_value(const Instance& inst, const std::vector<double>& duals) {
  double best = 0;
  for (const ItemPattern& p : enumerate_patterns(inst)) {
    double v = 0;
    for (const auto& [i, c] : p.counts) v += duals[i] * static_cast<double>(c);
    best = std::max(best, v);
  }
  return best;
}

Instance random_small_instance(std::mt19937_64& rng) {
  int n = static_cast<int>(testing::rand_range(rng, 1, 6));
  std::vector<std::pair<Rat, long long>> items;
  long long total = 0;
  for (int i = 0; i < n && total < 30; ++i) {
    long long q = testing::rand_range(rng, 1, 12);
    long long p = testing::rand_range(rng, 1, q);
    long long m = testing::rand_range(rng, 1, std::min<long long>(6, 30 - total));
    items.emplace_back(Rat(p, q), m);
    total += m;
  }
  return make_instance(items);
}

}  // namespace

TEST_SUITE_BEGIN("lp");

TEST_CASE("pricing with zero duals returns the empty pattern") {
  auto [p, value] = price_pattern({Rat(1, 2), Rat(1, 4)}, {0.0, 0.0}, 4);
  CHECK(p.counts.empty());
  CHECK(value == 0.0);
}

TEST_CASE("pricing matches exhaustive enumeration on two types") {
  Instance inst = make_instance({{Rat(3, 5), 1}, {Rat(2, 5), 1}});
  std::vector<double> duals{0.9, 0.5};
  auto [p, value] = price_pattern(inst.sizes, duals, 5);
  CHECK(value == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(value == doctest::Approx(best_pattern_value(inst, duals)).epsilon(1e-12));
  REQUIRE(p.counts.size() == 2);
  CHECK(p.counts[0] == std::pair<int, long long>{0, 1});
  CHECK(p.counts[1] == std::pair<int, long long>{1, 1});
}

TEST_CASE("pricing fills capacity") {
  auto [p, value] = price_pattern({Rat(1, 3)}, {1.0}, 3);
  REQUIRE(p.counts.size() == 1);
  CHECK(p.counts[0].second == 3);
  CHECK(value == doctest::Approx(3.0));
}

TEST_CASE("pricing rejects an oversized lattice") {
  CHECK_THROWS_AS(price_pattern({Rat(1, 2)}, {1.0}, 200000000), LpError);
}

TEST_CASE("three distinct near-third types fit one pattern") {
  Instance inst = make_instance({{Rat(34, 100), 1}, {Rat(33, 100), 1}, {Rat(32, 100), 1}});
  CHECK(solve_gg_lp(inst).objective == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("halves pack in pairs") {
  Instance inst = parse_instance("0.5 3");
  CHECK(solve_gg_lp(inst).objective == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("worked example optimum") {
  Instance inst = testing::figure1_instance();
  LpSolution sol = solve_gg_lp(inst);
  CHECK(sol.objective == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(sol.objective == doctest::Approx(exact_lp(inst)).epsilon(1e-7));
}

TEST_CASE("column generation equals the full LP on random small instances") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 40; ++trial) {
    Instance inst = random_small_instance(rng);
    CAPTURE(serialize_instance(inst));
    LpSolution sol = solve_gg_lp(inst);
    CHECK(std::abs(sol.objective - exact_lp(inst)) <= 1e-7);
  }
}

TEST_CASE("solution structure invariants") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    Instance inst = random_small_instance(rng);
    CAPTURE(serialize_instance(inst));
    LpSolution sol = solve_gg_lp(inst);

    CHECK(static_cast<int>(sol.columns.size()) <= inst.num_types());  // basic
    CHECK(sol.objective >= to_double(total_size(inst)) - 1e-7);

    std::vector<double> coverage(inst.num_types(), 0.0);
    for (size_t c = 0; c < sol.columns.size(); ++c) {
      CHECK(pattern_size(inst, sol.columns[c]) <= Rat(1));  // exact feasibility
      for (const auto& [i, cnt] : sol.columns[c].counts)
        coverage[i] += sol.values[c] * static_cast<double>(cnt);
    }
    for (int i = 0; i < inst.num_types(); ++i)
      CHECK(coverage[i] >= static_cast<double>(inst.mult[i]) - 1e-9);

    // Dual feasibility at termination: no pattern prices above 1.
    std::vector<double> duals = sol.duals;
    for (double& u : duals) u = std::max(u, 0.0);
    auto [p, value] = price_pattern(inst.sizes, duals, common_denominator(inst));
    CHECK(value <= 1.0 + 1e-7);
  }
}

TEST_CASE("lower bound helper") {
  CHECK(lp_lower_bound(testing::figure1_instance()) == doctest::Approx(1.5));
  CHECK(lp_lower_bound(Instance{}) == 0.0);
  CHECK(lp_lower_bound(parse_instance("1 1")) == doctest::Approx(1.0));
}

TEST_SUITE_END();
