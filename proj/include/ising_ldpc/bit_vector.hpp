#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

// Packed binary vector. Length is fixed at construction.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

  static BitVector from_bits(std::initializer_list<int> bits) {
    BitVector v(bits.size());
    std::size_t i = 0;
    for (int b : bits) v.set(i++, b != 0);
    return v;
  }

  std::size_t size() const { return n_; }
  bool empty() const { return n_ == 0; }

  bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1ULL; }
  bool operator[](std::size_t i) const { return get(i); }

  void set(std::size_t i, bool b) {
    std::uint64_t mask = 1ULL << (i & 63);
    if (b)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }

  void flip(std::size_t i) { words_[i >> 6] ^= 1ULL << (i & 63); }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (std::uint64_t w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

  std::size_t hamming_distance(const BitVector& other) const {
    if (other.n_ != n_) throw DimensionError("hamming_distance: length mismatch");
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += static_cast<std::size_t>(__builtin_popcountll(words_[i] ^ other.words_[i]));
    return c;
  }

  void xor_with(const BitVector& other) {
    if (other.n_ != n_) throw DimensionError("xor_with: length mismatch");
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  }

  bool operator==(const BitVector& other) const {
    return n_ == other.n_ && words_ == other.words_;
  }
  bool operator!=(const BitVector& other) const { return !(*this == other); }

  // Lexicographic by bit index 0 first; used as the deterministic tie-break.
  bool lex_less(const BitVector& other) const {
    std::size_t n = std::min(n_, other.n_);
    for (std::size_t i = 0; i < n; ++i) {
      bool a = get(i), b = other.get(i);
      if (a != b) return b;
    }
    return n_ < other.n_;
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::string to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i)
      if (get(i)) s[i] = '1';
    return s;
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace ildpc
