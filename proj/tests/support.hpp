#pragma once

#include <doctest.h>

#include <random>

#include "selfix/error.hpp"

// Runs expr and checks that it throws selfix::Error with the given code.
#define CHECK_THROWS_CODE(expr, ec)                                   \
  do {                                                                \
    try {                                                             \
      (void)(expr);                                                   \
      FAIL_CHECK("expected " << selfix::to_string(ec));               \
    } catch (const selfix::Error& err_) {                             \
      CHECK_MESSAGE(err_.code() == (ec), err_.what());                \
    }                                                                 \
  } while (0)

namespace testing {

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace testing
