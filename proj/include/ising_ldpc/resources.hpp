#pragma once

#include <cstdint>
#include <string>

#include "ising_ldpc/parity_check.hpp"
#include "ising_ldpc/qubo.hpp"

namespace ildpc {

struct ResourceReport {
  std::int64_t num_spins = 0;
  std::int64_t num_aux_spins = 0;
  std::int64_t num_couplers = 0;            // primary count, see convention
  std::int64_t num_coupled_pairs = 0;       // distinct unordered pairs
  std::int64_t num_linear_terms = 0;
  std::string convention;
};

// Co-designed machine: one coupler per nonzero of H, one auxiliary spin per
// checksum.
ResourceReport resource_report(const ParityCheckMatrix& h);

// Quadratic model on a pairwise-coupled machine: couplers counted directed
// (two per unordered pair, one per crossbar direction); the distinct-pair
// and linear-term counts are carried alongside so either convention can be
// read off.
ResourceReport resource_report(const QuadraticModel& q);

}  // namespace ildpc
