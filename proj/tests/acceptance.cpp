// One PASS/FAIL line per acceptance criterion, details indented below.
// usage: acceptance [seed] [criterion...]
#include "qtoda/suites.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <string>

using namespace qtoda;

int main(int argc, char** argv) {
  std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20240611;
  std::set<int> only;
  for (int a = 2; a < argc; ++a) only.insert(std::atoi(argv[a]));

  struct Item {
    int id;
    const char* what;
    SuiteResult (*run)(std::uint64_t);
  };
  const Item items[] = {
      {1, "closed-form standard q-Toda", [](std::uint64_t) { return suite_standard(); }},
      {2, "generic D_V1 = closed form, 20 random pairs per type", [](std::uint64_t s) { return suite_generic(s); }},
      {3, "[D_V1, D_L2V1] = 0 in A2, A3", [](std::uint64_t s) { return suite_commuting(s); }},
      {4, "Lax: RTT, H2 displays, commuting coefficients", [](std::uint64_t) { return suite_lax(); }},
      {5, "Lax matching for every compatible (pair, k)", [](std::uint64_t s) { return suite_lax_matching(s); }},
      {6, "pair conjugation, 20 random pairs per type", [](std::uint64_t s) { return suite_classification(s); }},
      {7, "Whittaker J: recursive, closed, oracle, eigencheck", [](std::uint64_t) { return suite_whittaker(4); }},
      {8, "periodic chain = affine Toda", [](std::uint64_t) { return suite_periodic(); }},
      {9, "Laumon module", [](std::uint64_t) { return suite_laumon(3, 3); }},
      {10, "negative controls", [](std::uint64_t s) { return suite_negative(s); }},
  };

  std::printf("seed %llu, %d thread(s)\n", (unsigned long long)seed, thread_count());
  int failed = 0;
  for (const Item& it : items) {
    if (!only.empty() && !only.count(it.id)) continue;
    auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = it.run(seed);
    double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d: %s  %s (%.1fs)\n", it.id, r.ok() ? "PASS" : "FAIL", it.what, sec);
    std::fputs(r.text().c_str(), stdout);
    std::fflush(stdout);
    if (!r.ok()) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed ? 1 : 0;
}
