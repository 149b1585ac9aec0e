#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "centeq/acceptance.hpp"

TEST_CASE("acceptance battery") {
  auto results = centeq::acceptance::run_all(std::cout);
  REQUIRE(results.size() == 11);
  for (const auto& r : results) {
    INFO("criterion ", r.id, " ", r.name, ": ", r.detail);
    CHECK(r.pass);
  }
}
