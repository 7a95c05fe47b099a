#include "ising_ldpc/parity_check.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ising_ldpc/errors.hpp"

namespace ildpc {

ParityCheckMatrix ParityCheckMatrix::from_entries(int m, int n,
                                                  std::vector<std::pair<int, int>> entries,
                                                  int z_block) {
  if (m <= 0 || n <= 0) throw IntegrityError("parity check: empty dimensions");
  for (auto [r, c] : entries)
    if (r < 0 || r >= m || c < 0 || c >= n)
      throw IntegrityError("parity check: entry out of range");
  std::sort(entries.begin(), entries.end());
  if (std::adjacent_find(entries.begin(), entries.end()) != entries.end())
    throw IntegrityError("parity check: duplicate entry");

  ParityCheckMatrix h;
  h.m_ = m;
  h.n_ = n;
  h.z_block_ = z_block;
  h.row_ptr_.assign(m + 1, 0);
  h.col_ptr_.assign(n + 1, 0);
  h.col_idx_.resize(entries.size());
  h.row_idx_.resize(entries.size());

  for (auto [r, c] : entries) ++h.row_ptr_[r + 1];
  for (int j = 0; j < m; ++j) h.row_ptr_[j + 1] += h.row_ptr_[j];
  for (std::size_t e = 0; e < entries.size(); ++e) h.col_idx_[e] = entries[e].second;

  // column-major pass
  for (auto [r, c] : entries) ++h.col_ptr_[c + 1];
  for (int i = 0; i < n; ++i) h.col_ptr_[i + 1] += h.col_ptr_[i];
  std::vector<std::int32_t> fill(h.col_ptr_.begin(), h.col_ptr_.end() - 1);
  for (auto [r, c] : entries) h.row_idx_[fill[c]++] = r;
  return h;
}

ParityCheckMatrix expand_base_graph(const BaseGraph& bg, int z) {
  if (z < 1) throw ParameterError("invalid expansion factor: Z must be >= 1");
  bg.validate();
  std::vector<std::pair<int, int>> entries;
  entries.reserve(bg.entries.size() * static_cast<std::size_t>(z));
  for (const BgEntry& e : bg.entries) {
    int s = e.shift % z;
    for (int i = 0; i < z; ++i)
      entries.emplace_back(e.row * z + i, e.col * z + (i + s) % z);
  }
  return ParityCheckMatrix::from_entries(bg.rows * z, bg.cols * z, std::move(entries), z);
}

BitVector syndrome(const ParityCheckMatrix& h, const BitVector& c) {
  if (static_cast<int>(c.size()) != h.n())
    throw DimensionError("syndrome: codeword length does not match n");
  BitVector s(h.m());
  for (int j = 0; j < h.m(); ++j) {
    int acc = 0;
    for (std::int32_t i : h.row(j)) acc ^= c.get(i) ? 1 : 0;
    if (acc) s.set(j, true);
  }
  return s;
}

namespace {

// Whitespace tokenizer that tracks line numbers for diagnostics.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  long next(const char* what) {
    long v;
    if (!try_next(v, what))
      throw ParseError(std::string("alist: unexpected end of file reading ") + what, lineno_);
    return v;
  }

  bool try_next(long& out, const char* what) {
    for (;;) {
      if (pos_ >= line_.size()) {
        if (!std::getline(in_, line_)) return false;
        ++lineno_;
        pos_ = 0;
      }
      while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
      if (pos_ >= line_.size()) continue;
      std::size_t start = pos_;
      while (pos_ < line_.size() && !std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
      try {
        out = std::stol(line_.substr(start, pos_ - start));
        return true;
      } catch (const std::exception&) {
        throw ParseError(std::string("alist: expected integer for ") + what, lineno_);
      }
    }
  }

  int line() const { return lineno_; }

 private:
  std::istream& in_;
  std::string line_;
  std::size_t pos_ = 0;
  int lineno_ = 0;
};

std::vector<std::pair<int, int>> collect_lists(const std::vector<long>& tokens,
                                               const std::vector<long>& degs, long max_deg,
                                               bool padded, long other_dim, bool rows_first,
                                               std::size_t& cursor) {
  std::vector<std::pair<int, int>> entries;
  for (std::size_t i = 0; i < degs.size(); ++i) {
    long want = degs[i];
    long slots = padded ? max_deg : want;
    long listed = 0;
    for (long k = 0; k < slots; ++k) {
      long v = tokens.at(cursor++);
      if (v == 0) continue;  // padding
      if (v < 1 || v > other_dim) throw IntegrityError("alist: index out of range");
      if (rows_first)
        entries.emplace_back(static_cast<int>(v - 1), static_cast<int>(i));
      else
        entries.emplace_back(static_cast<int>(i), static_cast<int>(v - 1));
      ++listed;
    }
    if (listed != want)
      throw IntegrityError("alist: list " + std::to_string(i + 1) + " has " +
                           std::to_string(listed) + " entries, declared " +
                           std::to_string(want));
  }
  return entries;
}

}  // namespace

ParityCheckMatrix read_alist(std::istream& in) {
  TokenReader tok(in);
  long n = tok.next("n");
  long m = tok.next("m");
  if (n <= 0 || m <= 0) throw ParseError("alist: non-positive dimensions", tok.line());
  long max_col = tok.next("max column degree");
  long max_row = tok.next("max row degree");
  if (max_col < 0 || max_row < 0) throw ParseError("alist: negative max degree", tok.line());

  std::vector<long> col_deg(n), row_deg(m);
  long nnz_cols = 0, nnz_rows = 0;
  for (long i = 0; i < n; ++i) {
    col_deg[i] = tok.next("column degree");
    if (col_deg[i] < 0 || col_deg[i] > max_col)
      throw ParseError("alist: column degree out of range", tok.line());
    nnz_cols += col_deg[i];
  }
  for (long j = 0; j < m; ++j) {
    row_deg[j] = tok.next("row degree");
    if (row_deg[j] < 0 || row_deg[j] > max_row)
      throw ParseError("alist: row degree out of range", tok.line());
    nnz_rows += row_deg[j];
  }
  if (nnz_cols != nnz_rows)
    throw IntegrityError("alist: sum of column degrees (" + std::to_string(nnz_cols) +
                         ") != sum of row degrees (" + std::to_string(nnz_rows) + ")");

  // MacKay files pad every index list with zeros to the max degree; other
  // writers list exactly the declared degree. Distinguish by token count.
  std::vector<long> tokens;
  long v;
  while (tok.try_next(v, "index list")) tokens.push_back(v);
  std::size_t unpadded = static_cast<std::size_t>(nnz_cols + nnz_rows);
  std::size_t padded = static_cast<std::size_t>(n * max_col + m * max_row);
  bool is_padded;
  if (tokens.size() == padded)
    is_padded = true;
  else if (tokens.size() == unpadded)
    is_padded = false;
  else
    throw IntegrityError("alist: index lists hold " + std::to_string(tokens.size()) +
                         " tokens; expected " + std::to_string(unpadded) + " (unpadded) or " +
                         std::to_string(padded) + " (padded)");

  std::size_t cursor = 0;
  auto entries = collect_lists(tokens, col_deg, max_col, is_padded, m, /*rows_first=*/true, cursor);
  auto row_entries = collect_lists(tokens, row_deg, max_row, is_padded, n, /*rows_first=*/false, cursor);

  std::sort(entries.begin(), entries.end());
  std::sort(row_entries.begin(), row_entries.end());
  if (entries != row_entries)
    throw IntegrityError("alist: row lists are not the transpose of the column lists");

  return ParityCheckMatrix::from_entries(static_cast<int>(m), static_cast<int>(n),
                                         std::move(entries));
}

ParityCheckMatrix load_alist(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open alist file: " + path);
  return read_alist(in);
}

void write_alist(const ParityCheckMatrix& h, std::ostream& out) {
  int max_col = 0, max_row = 0;
  for (int i = 0; i < h.n(); ++i) max_col = std::max(max_col, h.col_degree(i));
  for (int j = 0; j < h.m(); ++j) max_row = std::max(max_row, h.row_degree(j));
  out << h.n() << ' ' << h.m() << '\n';
  out << max_col << ' ' << max_row << '\n';
  for (int i = 0; i < h.n(); ++i) out << h.col_degree(i) << (i + 1 < h.n() ? ' ' : '\n');
  for (int j = 0; j < h.m(); ++j) out << h.row_degree(j) << (j + 1 < h.m() ? ' ' : '\n');
  for (int i = 0; i < h.n(); ++i) {
    auto rows = h.col(i);
    for (std::size_t k = 0; k < rows.size(); ++k)
      out << rows[k] + 1 << (k + 1 < rows.size() ? ' ' : '\n');
    if (rows.empty()) out << '\n';
  }
  for (int j = 0; j < h.m(); ++j) {
    auto cols = h.row(j);
    for (std::size_t k = 0; k < cols.size(); ++k)
      out << cols[k] + 1 << (k + 1 < cols.size() ? ' ' : '\n');
    if (cols.empty()) out << '\n';
  }
}

void save_alist(const ParityCheckMatrix& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write alist file: " + path);
  write_alist(h, out);
}

LoadedCode load_code(const std::string& path, CodeFormat format) {
  LoadedCode lc;
  if (format == CodeFormat::BaseGraphText) {
    lc.is_base_graph = true;
    lc.bg = load_base_graph_text(path);
  } else {
    lc.h = load_alist(path);
  }
  return lc;
}

}  // namespace ildpc
