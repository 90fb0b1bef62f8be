/** \file doctest_main.cpp
 *  \brief Shared doctest runner for the unit-test binaries.
 */
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
