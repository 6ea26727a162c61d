// SPDX-License-Identifier: MIT
#include <string>
#include <vector>

#include "bellman/errors.hpp"
#include "bellman/examples.hpp"
#include "doctest.h"

using namespace bellman;

TEST_SUITE("examples") {

TEST_CASE("the regression catalogue lists eight suites") {
  const std::vector<std::string> names = example_names();
  REQUIRE(names.size() == 8);
  CHECK(names.front() == "exponential");
  CHECK(names.back() == "quintic");
}

TEST_CASE("unknown suite names are rejected") {
  CHECK_THROWS_AS(run_example("no-such-suite"), ConfigError);
}

TEST_CASE("the cheapest suites pass with margin") {
  for (const std::string& name : {std::string("exponential"),
                                  std::string("power-cube")}) {
    CAPTURE(name);
    const ExampleResult r = run_example(name);
    CHECK(r.pass);
    CHECK(r.worst <= r.tolerance);
    CHECK(r.name == name);
  }
}

}  // TEST_SUITE("examples")
