#include <doctest.h>
TEST_SUITE_BEGIN("rebuild");
TEST_SUITE_END();
