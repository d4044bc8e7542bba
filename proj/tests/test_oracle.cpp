#include <doctest.h>

#include "helpers.hpp"
#include "packlab/oracle.hpp"

using namespace packlab;

TEST_SUITE_BEGIN("oracle");

TEST_CASE("enumerate patterns for one half-size type") {
  Instance inst = parse_instance("0.5 1");
  auto pats = enumerate_patterns(inst);
  REQUIRE(pats.size() == 2);  // {1} and {2}
}

TEST_CASE("enumerate patterns for (3/5, 2/5)") {
  Instance inst = make_instance({{Rat(3, 5), 1}, {Rat(2, 5), 1}});
  auto pats = enumerate_patterns(inst);
  CHECK(pats.size() == 4);  // {1}, {2}, {2,2}, {1,2}
}

TEST_CASE("a unit-size item admits one pattern") {
  Instance inst = parse_instance("1 1");
  CHECK(enumerate_patterns(inst).size() == 1);
}

TEST_CASE("enumeration guard") {
  std::vector<std::pair<Rat, long long>> items;
  for (int i = 1; i <= 9; ++i) items.emplace_back(Rat(i, 100), 1);
  CHECK_THROWS_AS(enumerate_patterns(make_instance(items)), OracleError);
}

TEST_CASE("exact LP on the worked example") {
  // The fractional packing x_{p1} = 1, x_{p2} = 1/2 achieves 3/2, and the LP
  // can never beat the total size 3/2.
  CHECK(exact_lp(testing::figure1_instance()) == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(exact_lp(parse_instance("1/3 3")) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(exact_lp(parse_instance("1 1")) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("exact OPT") {
  CHECK(exact_opt(testing::figure1_instance()) == 2);
  CHECK(exact_opt(parse_instance("0.6 2")) == 2);
  CHECK(exact_opt(Instance{}) == 0);
  CHECK(exact_opt(parse_instance("0.25 8")) == 2);
}

TEST_CASE("exact OPT guard") {
  CHECK_THROWS_AS(exact_opt(parse_instance("0.1 16")), OracleError);
}

TEST_CASE("exact deficiency basics") {
  RationalPackingGraph g;
  CHECK(exact_deficiency(g) == 0);
  g.left.push_back({Rat(1, 2), 1});
  CHECK(exact_deficiency(g) == BigRat(1, 2));
  g.right.push_back({Rat(3, 4), Rat(1, 2)});
  CHECK(exact_deficiency(g) == BigRat(1, 4));  // half a unit remains unpacked
}

TEST_CASE("exact deficiency guard") {
  RationalPackingGraph g;
  for (int i = 0; i < 13; ++i) g.left.push_back({Rat(1, 2), 1});
  CHECK_THROWS_AS(exact_deficiency(g), OracleError);
}

TEST_SUITE_END();
