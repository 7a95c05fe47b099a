#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ising_ldpc/bit_vector.hpp"
#include "ising_ldpc/rng.hpp"

namespace ildpc {

// One received word: R = S + N(0, sigma^2) with derived intrinsic LLRs.
struct ChannelObservation {
  std::vector<double> received;
  double noise_variance = 0.0;
  double ebno_db = 0.0;
  std::vector<double> llr;
  std::uint64_t seed = 0;  // harness metadata
};

// BPSK: bit 0 -> +1, bit 1 -> -1.
std::vector<double> modulate(const BitVector& c);

// sigma^2 = 1 / (2 * rate * 10^(ebno_db/10)), unit symbol energy.
double noise_variance_for(double ebno_db, double rate);

ChannelObservation transmit(std::span<const double> s, double ebno_db, double rate, Rng& rng);

// As transmit, but with the standard-normal draws supplied by the caller
// (common-random-numbers across decoders and Eb/No points).
ChannelObservation observe_with_noise(std::span<const double> s, double ebno_db, double rate,
                                      std::span<const double> z);

// Elementwise 2R/sigma^2.
std::vector<double> llr_init(const ChannelObservation& obs);

}  // namespace ildpc
