#include "ising_ldpc/generator.hpp"

#include <algorithm>

#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/rng.hpp"

namespace ildpc {

namespace {

struct PackedRows {
  int n;
  int words;
  std::vector<std::uint64_t> data;  // m rows of `words` words

  std::uint64_t* row(int r) { return data.data() + static_cast<std::size_t>(r) * words; }
  bool get(int r, int c) const {
    return (data[static_cast<std::size_t>(r) * words + (c >> 6)] >> (c & 63)) & 1ULL;
  }
  void xor_rows(int dst, int src) {
    std::uint64_t* d = row(dst);
    const std::uint64_t* s = data.data() + static_cast<std::size_t>(src) * words;
    for (int w = 0; w < words; ++w) d[w] ^= s[w];
  }
};

}  // namespace

GeneratorMatrix build_generator(const ParityCheckMatrix& h) {
  const int m = h.m(), n = h.n();
  PackedRows rows{n, (n + 63) / 64, {}};
  rows.data.assign(static_cast<std::size_t>(m) * rows.words, 0);
  for (int j = 0; j < m; ++j)
    for (std::int32_t i : h.row(j))
      rows.row(j)[i >> 6] ^= 1ULL << (i & 63);

  // Scan the trailing n-m columns first so structured codes keep their
  // leading columns as message positions, then sweep the rest for any
  // remaining pivots (rank-deficient or unstructured inputs).
  std::vector<int> scan_order;
  scan_order.reserve(n);
  for (int c = std::max(0, n - m); c < n; ++c) scan_order.push_back(c);
  for (int c = 0; c < std::max(0, n - m); ++c) scan_order.push_back(c);

  std::vector<char> row_used(m, 0);
  std::vector<int> pivot_row_of_col(n, -1);
  int rank = 0;
  for (int c : scan_order) {
    if (rank == m) break;
    int piv = -1;
    for (int r = 0; r < m; ++r) {
      if (!row_used[r] && rows.get(r, c)) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    row_used[piv] = 1;
    pivot_row_of_col[c] = piv;
    for (int r = 0; r < m; ++r)
      if (r != piv && rows.get(r, c)) rows.xor_rows(r, piv);
    ++rank;
  }

  GeneratorMatrix g;
  g.n_ = n;
  g.rank_ = rank;
  g.rank_deficient_ = rank < m;
  for (int c = 0; c < n; ++c) {
    if (pivot_row_of_col[c] >= 0)
      g.parity_pos_.push_back(c);
    else
      g.message_pos_.push_back(c);
  }

  // In reduced form, each pivot row reads: parity bit = XOR of the message
  // bits present in that row.
  const int k = static_cast<int>(g.message_pos_.size());
  const int kw = (k + 63) / 64;
  std::vector<std::int32_t> msg_index_of_col(n, -1);
  for (int t = 0; t < k; ++t) msg_index_of_col[g.message_pos_[t]] = t;

  g.parity_eq_.resize(g.parity_pos_.size());
  for (std::size_t p = 0; p < g.parity_pos_.size(); ++p) {
    int r = pivot_row_of_col[g.parity_pos_[p]];
    std::vector<std::uint64_t> mask(kw, 0);
    for (int c = 0; c < n; ++c) {
      if (msg_index_of_col[c] >= 0 && rows.get(r, c)) {
        int t = msg_index_of_col[c];
        mask[t >> 6] |= 1ULL << (t & 63);
      }
    }
    g.parity_eq_[p] = std::move(mask);
  }
  return g;
}

BitVector GeneratorMatrix::encode(const BitVector& message) const {
  if (static_cast<int>(message.size()) != k())
    throw DimensionError("encode: message length does not match k");
  BitVector c(n_);
  for (int t = 0; t < k(); ++t)
    if (message.get(t)) c.set(message_pos_[t], true);
  const auto& mw = message.words();
  for (std::size_t p = 0; p < parity_pos_.size(); ++p) {
    std::uint64_t acc = 0;
    const auto& mask = parity_eq_[p];
    for (std::size_t w = 0; w < mask.size(); ++w)
      acc ^= static_cast<std::uint64_t>(__builtin_popcountll(mask[w] & mw[w]));
    if (acc & 1ULL) c.set(parity_pos_[p], true);
  }
  return c;
}

BitVector GeneratorMatrix::row(int i) const {
  BitVector unit(k());
  unit.set(i, true);
  return encode(unit);
}

BitVector GeneratorMatrix::extract_message(const BitVector& codeword) const {
  if (static_cast<int>(codeword.size()) != n_)
    throw DimensionError("extract_message: codeword length does not match n");
  BitVector msg(k());
  for (int t = 0; t < k(); ++t)
    if (codeword.get(message_pos_[t])) msg.set(t, true);
  return msg;
}

BitVector random_message(int k, Rng& rng) {
  BitVector m(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i)
    if (rng.coin()) m.set(i, true);
  return m;
}

}  // namespace ildpc
