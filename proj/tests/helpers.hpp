#pragma once

#include "qtoda/scalar.hpp"

#include <random>

namespace qtoda::testing {

// random Laurent polynomial in q and a couple of parameters, small coefficients
inline Scalar random_poly(std::mt19937_64& rng, int terms = 3) {
  static const char* names[] = {"a", "b"};
  std::uniform_int_distribution<int> c(-3, 3), e(-2, 2), s(0, 2);
  Scalar r(0);
  for (int t = 0; t < terms; ++t) {
    Scalar m(c(rng));
    m *= Scalar::q(e(rng));
    int k = s(rng);
    if (k < 2) m *= Scalar::sym(names[k], e(rng));
    r += m;
  }
  return r;
}

inline Scalar random_scalar(std::mt19937_64& rng) {
  Scalar d;
  do d = random_poly(rng, 2);
  while (d.is_zero());
  return random_poly(rng) / d;
}

}  // namespace qtoda::testing
