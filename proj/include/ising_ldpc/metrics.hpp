#pragma once

#include <cstdint>
#include <vector>

#include "ising_ldpc/bit_vector.hpp"
#include "ising_ldpc/outcome.hpp"

namespace ildpc {

struct BerStats {
  std::int64_t bits_total = 0;
  std::int64_t bit_errors = 0;
  std::int64_t frames_total = 0;
  std::int64_t frame_errors = 0;

  void add(const BitVector& decoded, const BitVector& truth);
  void merge(const BerStats& o);

  double ber() const { return bits_total ? static_cast<double>(bit_errors) / bits_total : 0.0; }
  double fer() const {
    return frames_total ? static_cast<double>(frame_errors) / frames_total : 0.0;
  }
  // Normal-approximation standard error of the BER estimate.
  double stderr_ber() const;
};

// Distinct anneal solutions ranked ascending by energy (ties broken
// lexicographically by bit pattern), with per-solution multiplicities and
// bit-error counts against the ground truth.
class AnnealEnsemble {
 public:
  AnnealEnsemble(const std::vector<DecodeOutcome>& anneals, const BitVector& truth);

  struct Solution {
    BitVector bits;
    double energy;
    int multiplicity;
    int bit_errors;  // F(k)
  };

  const std::vector<Solution>& ranked() const { return ranked_; }
  int total_anneals() const { return total_; }

 private:
  std::vector<Solution> ranked_;
  int total_ = 0;
};

// E(BER(N_a)) = sum_k [ (sum_{r>=k} P(r))^Na - (sum_{r>=k+1} P(r))^Na ] F(k)/N.
double expected_ber(const AnnealEnsemble& ensemble, int n_a, int num_bits);

// Two-sided sign test: p-value for `wins` successes out of wins+losses
// fair-coin trials (ties dropped by the caller).
double sign_test_two_sided(std::int64_t wins, std::int64_t losses);

// Gaussian tail Q(x); uncoded BPSK BER at Eb/No e dB is Q(sqrt(2 r 10^(e/10))).
double q_function(double x);

}  // namespace ildpc
