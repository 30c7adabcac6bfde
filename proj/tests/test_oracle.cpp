#include <doctest.h>

TEST_SUITE_BEGIN("oracle");

TEST_SUITE_END();
