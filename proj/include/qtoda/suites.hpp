#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qtoda {

struct SuiteLine {
  std::string label;
  bool ok = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<SuiteLine> lines;
  double seconds = 0;

  bool ok() const;
  void add(std::string label, bool ok, std::string detail = {});
  nlohmann::json to_json() const;
  std::string text() const;
};

// QTODA_THREADS, at least 1
int thread_count();
// f(0..count-1) on thread_count() workers; results keep their index
void parallel_for(int count, const std::function<void(int)>& f);

// Acceptance suites, numbered as in the README.
SuiteResult suite_standard();                                          // 1
SuiteResult suite_generic(std::uint64_t seed, int pairs = 20);         // 2
SuiteResult suite_commuting(std::uint64_t seed, int pairs = 1);        // 3
// with_double_rtt adds the RTT check of the double monodromy
SuiteResult suite_lax(int nmin = 1, int nmax = 3, bool with_double_rtt = true);  // 4
SuiteResult suite_lax_matching(std::uint64_t seed, int pairs = 4);     // 5
SuiteResult suite_classification(std::uint64_t seed, int pairs = 20);  // 6
SuiteResult suite_whittaker(int degree = 4);                           // 7
SuiteResult suite_periodic();                                          // 8
SuiteResult suite_laumon(int nmax = 3, int degree = 3);                // 9
SuiteResult suite_negative(std::uint64_t seed);                        // 10

// by name: standard, generic, commuting, lax, matching, classification, whittaker, periodic,
// laumon, negative; rank <= 0 keeps the default size
SuiteResult run_suite(const std::string& name, std::uint64_t seed, int rank = 0);
const std::vector<std::string>& suite_names();

}  // namespace qtoda
