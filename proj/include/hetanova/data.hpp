#pragma once

#include <utility>
#include <vector>

#include "hetanova/grid.hpp"

namespace hetanova {

// Two-way layout: a levels of factor A, b levels of factor B, and the
// per-cell sample sizes n(i,j). Requires a >= 2, b >= 2 and every cell size
// >= 2 (unbiased variances need at least two observations).
struct Layout {
  int a = 0;
  int b = 0;
  IGrid n;

  Layout() = default;
  Layout(int a_, int b_, IGrid n_);
  static Layout balanced(int a_, int b_, int cell_size);

  long total() const;  // N = sum of all n(i,j)
  Layout transposed() const;
  void validate() const;
};

// One observation: 1-based factor levels plus the response.
struct RawRecord {
  int level_a = 0;
  int level_b = 0;
  double y = 0.0;
};

struct RawDataset {
  std::vector<RawRecord> records;
};

// Per-cell sample means and unbiased sample variances (divisor n-1);
// the sufficient input for every fit and test in the library. Cells whose
// sample variance is zero are recorded as degenerate at construction and
// rejected by require_positive_variances() when a fit or test needs them.
struct CellSummaryTable {
  Layout layout;
  DGrid mean;
  DGrid var;
  std::vector<std::pair<int, int>> degenerate_cells;  // 0-based (i, j)

  CellSummaryTable() = default;
  CellSummaryTable(Layout layout_, DGrid mean_, DGrid var_);

  CellSummaryTable transposed() const;
  void require_positive_variances() const;  // throws DegenerateCellError
};

struct Marginals {
  std::vector<double> row;  // Ybar_i. : unweighted mean over columns
  std::vector<double> col;  // Ybar_.j : unweighted mean over rows
  double grand = 0.0;       // Ybar    : unweighted mean over all cells
};

// Reduces raw observations to cell summaries. Throws DimensionMismatchError
// for out-of-range levels and EmptyCellError when any cell has fewer records
// than the layout requires (or more).
CellSummaryTable summarize(const RawDataset& raw, const Layout& layout);

// Derives a layout from the records themselves: a and b are the largest
// levels seen, n(i,j) the observed counts.
Layout infer_layout(const RawDataset& raw);

// Unweighted marginal means of the cell-mean grid.
Marginals marginals(const CellSummaryTable& summary);

}  // namespace hetanova
