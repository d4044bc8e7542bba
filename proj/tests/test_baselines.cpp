#include <doctest.h>
TEST_SUITE_BEGIN("baselines");
TEST_SUITE_END();
