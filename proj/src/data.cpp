#include "hetanova/data.hpp"

#include <string>

#include "hetanova/errors.hpp"

namespace hetanova {

Layout::Layout(int a_, int b_, IGrid n_) : a(a_), b(b_), n(std::move(n_)) { validate(); }

Layout Layout::balanced(int a_, int b_, int cell_size) {
  return Layout(a_, b_, IGrid(a_, b_, cell_size));
}

long Layout::total() const {
  long sum = 0;
  for (int v : n.data()) sum += v;
  return sum;
}

Layout Layout::transposed() const { return Layout(b, a, n.transposed()); }

void Layout::validate() const {
  if (a < 2 || b < 2)
    throw DimensionMismatchError("layout requires at least 2 levels per factor, got a=" +
                                 std::to_string(a) + ", b=" + std::to_string(b));
  if (n.rows() != a || n.cols() != b)
    throw DimensionMismatchError("cell-size grid is " + std::to_string(n.rows()) + "x" +
                                 std::to_string(n.cols()) + ", layout is " + std::to_string(a) +
                                 "x" + std::to_string(b));
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j)
      if (n(i, j) < 2)
        throw EmptyCellError("cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") has n=" + std::to_string(n(i, j)) + "; every cell needs n >= 2");
}

CellSummaryTable::CellSummaryTable(Layout layout_, DGrid mean_, DGrid var_)
    : layout(std::move(layout_)), mean(std::move(mean_)), var(std::move(var_)) {
  layout.validate();
  if (mean.rows() != layout.a || mean.cols() != layout.b || !mean.same_shape(var))
    throw DimensionMismatchError("summary grids do not match layout " + std::to_string(layout.a) +
                                 "x" + std::to_string(layout.b));
  for (int i = 0; i < layout.a; ++i)
    for (int j = 0; j < layout.b; ++j) {
      if (var(i, j) < 0.0)
        throw InputError("cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                         ") has negative variance");
      if (var(i, j) == 0.0) degenerate_cells.emplace_back(i, j);
    }
}

CellSummaryTable CellSummaryTable::transposed() const {
  return CellSummaryTable(layout.transposed(), mean.transposed(), var.transposed());
}

void CellSummaryTable::require_positive_variances() const {
  if (!degenerate_cells.empty()) {
    const auto [i, j] = degenerate_cells.front();
    throw DegenerateCellError("cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                              ") has zero sample variance; tests require var > 0 in every cell");
  }
}

CellSummaryTable summarize(const RawDataset& raw, const Layout& layout) {
  layout.validate();
  const int a = layout.a, b = layout.b;
  IGrid count(a, b, 0);
  DGrid mean(a, b, 0.0);
  DGrid m2(a, b, 0.0);

  // Welford accumulation per cell.
  for (std::size_t r = 0; r < raw.records.size(); ++r) {
    const RawRecord& rec = raw.records[r];
    if (rec.level_a < 1 || rec.level_a > a || rec.level_b < 1 || rec.level_b > b)
      throw DimensionMismatchError("record " + std::to_string(r + 1) + " has levels (" +
                                   std::to_string(rec.level_a) + "," + std::to_string(rec.level_b) +
                                   ") outside the " + std::to_string(a) + "x" + std::to_string(b) +
                                   " layout");
    const int i = rec.level_a - 1, j = rec.level_b - 1;
    const int k = ++count(i, j);
    const double delta = rec.y - mean(i, j);
    mean(i, j) += delta / k;
    m2(i, j) += delta * (rec.y - mean(i, j));
  }

  DGrid var(a, b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      if (count(i, j) != layout.n(i, j))
        throw EmptyCellError("cell (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                             ") has " + std::to_string(count(i, j)) + " records, layout expects " +
                             std::to_string(layout.n(i, j)));
      var(i, j) = m2(i, j) / (count(i, j) - 1);
    }
  return CellSummaryTable(layout, std::move(mean), std::move(var));
}

Layout infer_layout(const RawDataset& raw) {
  int a = 0, b = 0;
  for (const RawRecord& rec : raw.records) {
    if (rec.level_a < 1 || rec.level_b < 1)
      throw DimensionMismatchError("factor levels must be positive integers");
    if (rec.level_a > a) a = rec.level_a;
    if (rec.level_b > b) b = rec.level_b;
  }
  if (a < 2 || b < 2)
    throw DimensionMismatchError("data spans only " + std::to_string(a) + "x" + std::to_string(b) +
                                 " levels; a two-way layout needs at least 2x2");
  IGrid n(a, b, 0);
  for (const RawRecord& rec : raw.records) ++n(rec.level_a - 1, rec.level_b - 1);
  return Layout(a, b, std::move(n));
}

Marginals marginals(const CellSummaryTable& summary) {
  const int a = summary.layout.a, b = summary.layout.b;
  Marginals m;
  m.row.assign(a, 0.0);
  m.col.assign(b, 0.0);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) {
      m.row[i] += summary.mean(i, j);
      m.col[j] += summary.mean(i, j);
      m.grand += summary.mean(i, j);
    }
  for (double& v : m.row) v /= b;
  for (double& v : m.col) v /= a;
  m.grand /= static_cast<double>(a) * b;
  return m;
}

}  // namespace hetanova
