#pragma once

#include <limits>

#include "ising_ldpc/bit_vector.hpp"

namespace ildpc {

struct DecodeOutcome {
  BitVector bits;
  bool success = false;
  int iterations = 0;  // BP iterations, SA sweeps, or integrator steps
  double energy = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace ildpc
