#include <doctest.h>
TEST_SUITE_BEGIN("containers");
TEST_SUITE_END();
