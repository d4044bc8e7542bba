#include <doctest.h>

#include "helpers.hpp"
#include "packlab/oracle.hpp"
#include "packlab/packgraph.hpp"

using namespace packlab;

TEST_SUITE_BEGIN("packgraph");

TEST_CASE("empty left side has zero deficiency") {
  RationalPackingGraph g;
  g.right.push_back({Rat(1, 2), Rat(3)});
  CHECK(graph_deficiency(g) == Rat(0));
}

TEST_CASE("unmatchable left node pays its size") {
  RationalPackingGraph g;
  g.left.push_back({Rat(1, 2), 1});
  CHECK(graph_deficiency(g) == Rat(1, 2));
}

TEST_CASE("flow only to larger-or-equal right nodes") {
  RationalPackingGraph g;
  g.left.push_back({Rat(1, 2), 1});
  g.right.push_back({Rat(1, 4), Rat(5)});  // too small to host the left node
  CHECK(graph_deficiency(g) == Rat(1, 2));
  g.right.push_back({Rat(1, 2), Rat(1)});
  CHECK(graph_deficiency(g) == Rat(0));
}

TEST_CASE("greedy equals the exact transportation optimum") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    RationalPackingGraph g = testing::random_rational_graph(rng);
    CAPTURE(trial);
    CHECK(to_bigrat(graph_deficiency(g)) == exact_deficiency(g));
  }
}

TEST_CASE("deficiency is monotone in the right side") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    RationalPackingGraph g = testing::random_rational_graph(rng);
    Rat base = graph_deficiency(g);
    RationalPackingGraph plus = g;
    plus.right.push_back({Rat(testing::rand_range(rng, 1, 64), 64), Rat(1)});
    CHECK(graph_deficiency(plus) <= base);
    if (!g.right.empty()) {
      RationalPackingGraph minus = g;
      minus.right.pop_back();
      CHECK(graph_deficiency(minus) >= base);
    }
  }
}

TEST_CASE("red/blue decomposition reproduces the worked swap") {
  // Seven unit-multiplicity left nodes, right nodes of matching sizes with
  // red 0.3 / blue 0.4 each: the integral red side is (0,0,0,1,0,0,1).
  RationalPackingGraph g;
  std::vector<Rat> red;
  for (int i = 0; i < 7; ++i) {
    Rat s(15 - i, 32);
    g.left.push_back({s, 1});
    g.right.push_back({s, Rat(7, 10)});
    red.push_back(Rat(3, 10));
  }
  RedBlueSplit split = decompose_red_blue(g, red, Rat(1, 2));
  CHECK(split.left_red == std::vector<long long>{0, 0, 0, 1, 0, 0, 1});
  CHECK(split.left_blue == std::vector<long long>{1, 1, 1, 0, 1, 1, 0});
}

TEST_CASE("all-zero red leaves the graph blue") {
  std::mt19937_64 rng(5);
  RationalPackingGraph g = testing::random_rational_graph(rng);
  std::vector<Rat> red(g.right.size(), Rat(0));
  RedBlueSplit split = decompose_red_blue(g, red, Rat(1));
  for (size_t u = 0; u < g.left.size(); ++u) {
    CHECK(split.left_red[u] == 0);
    CHECK(split.left_blue[u] == g.left[u].mult);
  }
}

TEST_CASE("decomposition postconditions on random graphs") {
  std::mt19937_64 rng(31337);
  int done = 0;
  for (int trial = 0; trial < 400 && done < 120; ++trial) {
    RationalPackingGraph g = testing::random_rational_graph(rng);
    if (g.right.empty() || g.left.empty()) continue;
    // sigma must dominate every red node: use the largest right size.
    Rat sigma(0);
    for (const auto& v : g.right) sigma = std::max(sigma, v.size);
    if (sigma == 0) continue;
    std::vector<Rat> red;
    for (const auto& v : g.right) {
      Rat m = v.mult * Rat(testing::rand_range(rng, 0, 4), 4);
      red.push_back(std::min(m, v.mult));
    }
    ++done;
    RedBlueSplit split = decompose_red_blue(g, red, sigma);
    for (size_t u = 0; u < g.left.size(); ++u) {
      CHECK(split.left_red[u] + split.left_blue[u] == g.left[u].mult);
      CHECK(split.left_red[u] >= 0);
      CHECK(split.left_blue[u] >= 0);
    }
    CHECK(graph_deficiency(red_subgraph(g, split, red)) == Rat(0));
    CHECK(graph_deficiency(blue_subgraph(g, split, red)) <=
          graph_deficiency(g) + sigma);
  }
  CHECK(done >= 100);
}

TEST_CASE("decomposition validates its preconditions") {
  RationalPackingGraph g;
  g.left.push_back({Rat(1, 2), 1});
  g.right.push_back({Rat(3, 4), Rat(1)});
  std::vector<Rat> red{Rat(1, 2)};
  CHECK_THROWS_AS(decompose_red_blue(g, red, Rat(1, 2)), std::invalid_argument);  // node above sigma
  red[0] = Rat(2);
  CHECK_THROWS_AS(decompose_red_blue(g, red, Rat(1)), std::invalid_argument);  // red > mult
}

TEST_SUITE_END();
