#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ising_ldpc/base_graph.hpp"
#include "ising_ldpc/bit_vector.hpp"

namespace ildpc {

// Sparse binary m x n parity check matrix stored as CSR in both orientations
// (per-row sorted column lists and per-column sorted row lists). Immutable
// after construction; safe to share read-only across workers.
class ParityCheckMatrix {
 public:
  ParityCheckMatrix() = default;

  // entries are (row, col) pairs; duplicates rejected.
  static ParityCheckMatrix from_entries(int m, int n,
                                        std::vector<std::pair<int, int>> entries,
                                        int z_block = 1);

  int m() const { return m_; }
  int n() const { return n_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx_.size()); }

  // Layer granularity for layered schedules: rows come in blocks of z_block
  // consecutive rows that share no columns (1 for codes loaded from files).
  int z_block() const { return z_block_; }

  std::span<const std::int32_t> row(int j) const {
    return {col_idx_.data() + row_ptr_[j], static_cast<std::size_t>(row_ptr_[j + 1] - row_ptr_[j])};
  }
  std::span<const std::int32_t> col(int i) const {
    return {row_idx_.data() + col_ptr_[i], static_cast<std::size_t>(col_ptr_[i + 1] - col_ptr_[i])};
  }

  int row_degree(int j) const { return row_ptr_[j + 1] - row_ptr_[j]; }
  int col_degree(int i) const { return col_ptr_[i + 1] - col_ptr_[i]; }

  const std::vector<std::int32_t>& row_ptr() const { return row_ptr_; }
  const std::vector<std::int32_t>& col_ptr() const { return col_ptr_; }
  const std::vector<std::int32_t>& row_cols() const { return col_idx_; }
  const std::vector<std::int32_t>& col_rows() const { return row_idx_; }

  bool operator==(const ParityCheckMatrix& o) const {
    return m_ == o.m_ && n_ == o.n_ && row_ptr_ == o.row_ptr_ && col_idx_ == o.col_idx_;
  }

 private:
  int m_ = 0;
  int n_ = 0;
  int z_block_ = 1;
  std::vector<std::int32_t> row_ptr_, col_idx_;  // rows_adj
  std::vector<std::int32_t> col_ptr_, row_idx_;  // cols_adj
};

// Lifts a protograph: entry (r, c, s) contributes Z ones at
// (r*Z + i, c*Z + ((i + s) mod Z)), shifts reduced modulo Z first.
ParityCheckMatrix expand_base_graph(const BaseGraph& bg, int z);

// Bit j of the result is the XOR of c over row j of h.
BitVector syndrome(const ParityCheckMatrix& h, const BitVector& c);

// MacKay alist format. Line 1 "n m"; line 2 "max_col_deg max_row_deg"; then
// per-column degrees, per-row degrees, per-column 1-based row indices and
// per-row 1-based column indices. Zero entries in index lists are padding.
ParityCheckMatrix load_alist(const std::string& path);
ParityCheckMatrix read_alist(std::istream& in);
void save_alist(const ParityCheckMatrix& h, const std::string& path);
void write_alist(const ParityCheckMatrix& h, std::ostream& out);

enum class CodeFormat { Alist, BaseGraphText };

struct LoadedCode {
  bool is_base_graph = false;
  BaseGraph bg;          // valid when is_base_graph
  ParityCheckMatrix h;   // valid otherwise
};

LoadedCode load_code(const std::string& path, CodeFormat format);

}  // namespace ildpc
