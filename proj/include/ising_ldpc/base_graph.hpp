#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ildpc {

struct BgEntry {
  int row = 0;
  int col = 0;
  int shift = 0;
};

// Protograph: a sparse rows x cols pattern whose entries carry circular-shift
// values in [0, z_max). Expansion replaces each entry with a Z x Z circularly
// shifted identity block.
struct BaseGraph {
  int rows = 0;
  int cols = 0;
  int z_max = 1;
  std::vector<BgEntry> entries;
  std::pair<int, int> rate_label{1, 3};

  // Throws on duplicate (row, col), negative shift, or rows >= cols.
  void validate() const;
  int row_degree(int r) const;
};

// The bundled BG1-shaped protograph: 46x68 with 316 entries laid out as
// 22 information columns, a double-diagonal core parity block (cols 22..25)
// and a diagonal extension block (cols 26..67). Row degrees follow the
// standard profile; shift values come from a fixed-seed generator so the
// code is reproducible without shipping standards tables.
const BaseGraph& bundled_bg1();

BaseGraph load_base_graph_text(const std::string& path);
BaseGraph read_base_graph_text(std::istream& in);
void save_base_graph_text(const BaseGraph& bg, const std::string& path);
void write_base_graph_text(const BaseGraph& bg, std::ostream& out);

}  // namespace ildpc
