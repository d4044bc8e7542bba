#include <doctest.h>

#include "helpers.hpp"
#include "packlab/instance.hpp"

using namespace packlab;

TEST_SUITE_BEGIN("instance");

TEST_CASE("parse single line") {
  Instance inst = parse_instance("0.5 2");
  REQUIRE(inst.num_types() == 1);
  CHECK(inst.sizes[0] == Rat(1, 2));
  CHECK(inst.mult[0] == 2);
}

TEST_CASE("parse the worked example") {
  Instance inst = testing::figure1_instance();
  REQUIRE(inst.num_types() == 3);
  CHECK(inst.sizes[0] == Rat(3, 10));
  CHECK(inst.sizes[1] == Rat(2, 10));
  CHECK(inst.sizes[2] == Rat(1, 10));
  CHECK(inst.mult == std::vector<long long>{2, 1, 7});
}

TEST_CASE("equal sizes merge") {
  Instance inst = parse_instance("0.1 3\n0.1 4");
  REQUIRE(inst.num_types() == 1);
  CHECK(inst.sizes[0] == Rat(1, 10));
  CHECK(inst.mult[0] == 7);
  CHECK(parse_instance("1/10 3\n0.1 4").mult[0] == 7);  // mixed notations too
}

TEST_CASE("comments and blank lines") {
  Instance inst = parse_instance("# header\n\n0.5 1  # trailing\n");
  CHECK(inst.num_types() == 1);
}

TEST_CASE("parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_instance("0.5 1\n1.5 1"), doctest::Contains("line 2"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance("0.5 0"), doctest::Contains("multiplicity"), ParseError);
  CHECK_THROWS_WITH_AS(parse_instance("abc 1"), doctest::Contains("line 1"), ParseError);
  CHECK_THROWS_AS(parse_instance("0.5 1 junk"), ParseError);
  CHECK_THROWS_AS(parse_instance("0 1"), ParseError);
}

TEST_CASE("total size is exact") {
  CHECK(total_size(testing::figure1_instance()) == Rat(3, 2));
  CHECK(total_size(parse_instance("0.5 1")) == Rat(1, 2));
  CHECK(total_size(Instance{}) == Rat(0));
}

TEST_CASE("serialize round trip") {
  Instance a = testing::figure1_instance();
  Instance b = parse_instance(serialize_instance(a));
  CHECK(a.sizes == b.sizes);
  CHECK(a.mult == b.mult);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Instance g = generate(GenKind::uniform, 30, rng());
    Instance h = parse_instance(serialize_instance(g));
    CHECK(g.sizes == h.sizes);
    CHECK(g.mult == h.mult);
  }
}

TEST_CASE("generators are deterministic") {
  Instance a = generate(GenKind::uniform, 5, 1);
  Instance b = generate(GenKind::uniform, 5, 1);
  CHECK(serialize_instance(a) == serialize_instance(b));
  CHECK(serialize_instance(generate(GenKind::three_partition, 40, 9)) ==
        serialize_instance(generate(GenKind::three_partition, 40, 9)));
}

TEST_CASE("three_partition sizes stay strictly inside (1/4,1/2)") {
  Instance inst = generate(GenKind::three_partition, 100, 7);
  for (const Rat& s : inst.sizes) {
    CHECK(s > Rat(1, 4));
    CHECK(s < Rat(1, 2));
  }
}

TEST_CASE("discrete kind draws few distinct sizes") {
  GenParams params;
  params.distinct = 3;
  Instance inst = generate(GenKind::discrete, 50, 3, params);
  CHECK(inst.num_types() <= 3);
  CHECK(inst.total_items() == 50);
}

TEST_CASE("generate rejects bad input") {
  CHECK_THROWS_AS(generate(GenKind::uniform, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(parse_gen_kind("bogus"), std::invalid_argument);
}

TEST_CASE("rational utilities") {
  CHECK(parse_rational("0.3") == Rat(3, 10));
  CHECK(parse_rational("7/8") == Rat(7, 8));
  CHECK(parse_rational("1") == Rat(1));
  CHECK(is_power_of_two(Rat(1, 16)));
  CHECK(!is_power_of_two(Rat(3, 16)));
  CHECK(size_class_log2(Rat(1)) == 0);
  CHECK(size_class_log2(Rat(1, 2)) == 1);
  CHECK(size_class_log2(Rat(3, 10)) == 1);   // in (1/4, 1/2]
  CHECK(size_class_log2(Rat(1, 10)) == 3);   // in (1/16, 1/8]
  CHECK(common_denominator(testing::figure1_instance()) == 10);
}

TEST_SUITE_END();
