#pragma once

#include <cmath>

namespace test {

inline double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace test
