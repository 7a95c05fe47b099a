#pragma once

#include <cstdint>
#include <vector>

#include "ising_ldpc/bit_vector.hpp"
#include "ising_ldpc/parity_check.hpp"

namespace ildpc {

// Systematic generator derived by GF(2) elimination of H. Pivoting prefers
// the trailing n-m columns so bundled codes keep their natural information
// positions; the resulting column split is exposed so channel and decoders
// always work in codeword order.
class GeneratorMatrix {
 public:
  int n() const { return n_; }
  int k() const { return static_cast<int>(message_pos_.size()); }
  int rank() const { return rank_; }
  bool rank_deficient() const { return rank_deficient_; }

  const std::vector<std::int32_t>& message_positions() const { return message_pos_; }
  const std::vector<std::int32_t>& parity_positions() const { return parity_pos_; }

  // Codeword in natural column order; message bits land on message_positions.
  BitVector encode(const BitVector& message) const;

  // Row i of G as a length-n vector (basis codeword for message bit i).
  BitVector row(int i) const;

  // Message bits of a codeword-ordered vector.
  BitVector extract_message(const BitVector& codeword) const;

  friend GeneratorMatrix build_generator(const ParityCheckMatrix& h);

 private:
  int n_ = 0;
  int rank_ = 0;
  bool rank_deficient_ = false;
  std::vector<std::int32_t> message_pos_, parity_pos_;
  // parity_eq_[r] holds the packed message-coefficients of parity bit r:
  // codeword[parity_pos_[r]] = XOR over message bits selected by the mask.
  std::vector<std::vector<std::uint64_t>> parity_eq_;
};

// Rank-deficient H is reported (rank_deficient(), effective k = n - rank)
// and encoding proceeds with the reduced parity count.
GeneratorMatrix build_generator(const ParityCheckMatrix& h);

BitVector random_message(int k, class Rng& rng);

}  // namespace ildpc
