#include "qtoda/suites.hpp"

#include <doctest.h>

#include <cstdlib>

using namespace qtoda;

TEST_SUITE("suites") {
  TEST_CASE("parallel_for fills every slot, whatever the thread count") {
    for (const char* k : {"1", "3"}) {
      setenv("QTODA_THREADS", k, 1);
      CHECK(thread_count() == std::atoi(k));
      std::vector<int> out(50, -1);
      parallel_for(50, [&](int i) { out[i] = i * i; });
      for (int i = 0; i < 50; ++i) CHECK(out[i] == i * i);
    }
    setenv("QTODA_THREADS", "junk", 1);
    CHECK(thread_count() == 1);
    unsetenv("QTODA_THREADS");
  }

  TEST_CASE("suite results") {
    SuiteResult r;
    r.name = "x";
    r.add("a", true);
    CHECK(r.ok());
    r.add("b", false, "why");
    CHECK_FALSE(r.ok());
    auto j = r.to_json();
    CHECK(j["lines"].size() == 2);
    CHECK(r.text().find("FAIL") != std::string::npos);
  }

  TEST_CASE("small suites run") {
    CHECK(run_suite("periodic", 1).ok());
    CHECK(run_suite("negative", 1).ok());
    CHECK(run_suite("lax", 1, 2).ok());
    CHECK_THROWS(run_suite("nonsense", 1));
    CHECK(suite_names().size() == 10);
  }
}
