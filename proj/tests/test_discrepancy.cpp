#include <doctest.h>
TEST_SUITE_BEGIN("discrepancy");
TEST_SUITE_END();
