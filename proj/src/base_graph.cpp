#include "ising_ldpc/base_graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ising_ldpc/errors.hpp"
#include "ising_ldpc/rng.hpp"

namespace ildpc {

void BaseGraph::validate() const {
  if (rows <= 0 || cols <= 0) throw IntegrityError("base graph: empty dimensions");
  if (rows >= cols) throw IntegrityError("base graph: rows must be < cols");
  if (z_max < 1) throw IntegrityError("base graph: z_max must be >= 1");
  std::set<std::pair<int, int>> seen;
  for (const BgEntry& e : entries) {
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw IntegrityError("base graph: entry out of range");
    if (e.shift < 0) throw IntegrityError("base graph: negative shift");
    if (!seen.emplace(e.row, e.col).second)
      throw IntegrityError("base graph: duplicate (row, col) entry");
  }
}

int BaseGraph::row_degree(int r) const {
  int d = 0;
  for (const BgEntry& e : entries)
    if (e.row == r) ++d;
  return d;
}

namespace {

// Row-degree profile of the 46x68 base graph 1 pattern (sums to 316).
constexpr int kBg1RowDegree[46] = {
    19, 19, 19, 19,                                     // core rows
    3, 8, 9, 7, 10, 9, 7, 8, 7, 6, 7, 7, 6, 6, 6, 6,    // extension rows
    6,  6, 5, 5, 6,  5, 5, 4, 5, 5, 5, 5, 5, 5, 5, 5,
    5,  5, 4, 5, 5,  4, 5, 4, 5, 4};

BaseGraph make_bundled_bg1() {
  constexpr int kRows = 46, kCols = 68, kInfoCols = 22, kZmax = 384;
  BaseGraph bg;
  bg.rows = kRows;
  bg.cols = kCols;
  bg.z_max = kZmax;
  bg.rate_label = {1, 3};

  std::vector<std::vector<int>> row_cols(kRows);

  // Core: 17-18 information columns per row plus the double-diagonal parity
  // block on columns 22..25 (upper bidiagonal, so the expanded block stays
  // invertible for every shift choice).
  for (int c = 0; c <= 16; ++c) row_cols[0].push_back(c);
  row_cols[0].push_back(22);
  row_cols[0].push_back(23);
  for (int c = 5; c <= 21; ++c) row_cols[1].push_back(c);
  row_cols[1].push_back(23);
  row_cols[1].push_back(24);
  for (int c = 0; c <= 7; ++c) row_cols[2].push_back(c);
  for (int c = 13; c <= 21; ++c) row_cols[2].push_back(c);
  row_cols[2].push_back(24);
  row_cols[2].push_back(25);
  for (int c = 0; c <= 12; ++c) row_cols[3].push_back(c);
  for (int c = 17; c <= 21; ++c) row_cols[3].push_back(c);
  row_cols[3].push_back(25);

  // Extension rows: one diagonal entry in its own parity column plus
  // degree-1 extra columns drawn from 0..25. A shuffled deck keeps column
  // coverage even; draws already present in the row are skipped.
  Rng rng(0x1db5c0de5eedULL);
  std::vector<int> deck(kInfoCols + 4);
  for (int i = 0; i < kInfoCols + 4; ++i) deck[i] = i;
  rng.shuffle(deck.data(), deck.size());
  std::size_t pos = 0;
  for (int r = 4; r < kRows; ++r) {
    row_cols[r].push_back(26 + (r - 4));
    int need = kBg1RowDegree[r] - 1;
    while (need > 0) {
      if (pos == deck.size()) {
        rng.shuffle(deck.data(), deck.size());
        pos = 0;
      }
      int c = deck[pos++];
      if (std::find(row_cols[r].begin(), row_cols[r].end(), c) == row_cols[r].end()) {
        row_cols[r].push_back(c);
        --need;
      }
    }
  }

  for (int r = 0; r < kRows; ++r) {
    std::sort(row_cols[r].begin(), row_cols[r].end());
    for (int c : row_cols[r])
      bg.entries.push_back({r, c, static_cast<int>(rng.bounded(kZmax))});
  }
  bg.validate();
  return bg;
}

}  // namespace

const BaseGraph& bundled_bg1() {
  static const BaseGraph bg = make_bundled_bg1();
  return bg;
}

BaseGraph read_base_graph_text(std::istream& in) {
  BaseGraph bg;
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw ParseError("basegraph-text: missing header", 1);
  ++lineno;
  {
    std::istringstream ss(line);
    if (!(ss >> bg.rows >> bg.cols >> bg.z_max))
      throw ParseError("basegraph-text: header must be 'rows cols Zmax'", lineno);
  }
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ss(line);
    BgEntry e;
    if (!(ss >> e.row)) continue;  // blank line
    if (!(ss >> e.col >> e.shift))
      throw ParseError("basegraph-text: entry must be 'row col shift'", lineno);
    std::string extra;
    if (ss >> extra) throw ParseError("basegraph-text: trailing tokens", lineno);
    bg.entries.push_back(e);
  }
  try {
    bg.validate();
  } catch (const IntegrityError& e) {
    throw ParseError(std::string("basegraph-text: ") + e.what(), lineno);
  }
  return bg;
}

BaseGraph load_base_graph_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open base graph file: " + path);
  return read_base_graph_text(in);
}

void write_base_graph_text(const BaseGraph& bg, std::ostream& out) {
  out << bg.rows << ' ' << bg.cols << ' ' << bg.z_max << '\n';
  for (const BgEntry& e : bg.entries)
    out << e.row << ' ' << e.col << ' ' << e.shift << '\n';
}

void save_base_graph_text(const BaseGraph& bg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write base graph file: " + path);
  write_base_graph_text(bg, out);
}

}  // namespace ildpc
