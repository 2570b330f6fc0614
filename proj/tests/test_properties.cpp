#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "property_checks.hpp"

using namespace sklab_props;

namespace {

void expect_clean(const SuiteResult& result, std::size_t wanted_cases) {
  CHECK(result.cases == wanted_cases);
  INFO(result.first_failure);
  CHECK(result.failures == 0);
}

}  // namespace

TEST_CASE("metric axioms hold on random step paths") {
  expect_clean(metric_axioms_suite(1000, 101), 1000);
}

TEST_CASE("window oscillation is monotone in the window width") {
  expect_clean(oscillation_monotone_suite(1000, 102), 1000);
}

TEST_CASE("monotone paths have zero oscillation") {
  expect_clean(monotone_zero_oscillation_suite(1000, 103), 1000);
}

TEST_CASE("uniform distance dominates both metrics") {
  expect_clean(metric_dominated_by_uniform_suite(1000, 104), 1000);
}

TEST_CASE("functional image keeps its running-max coordinate monotone") {
  expect_clean(functional_monotone_coordinate_suite(1000, 105), 1000);
}
