#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "hetanova/data.hpp"
#include "hetanova/errors.hpp"
#include "hetanova/rng.hpp"
#include "oracles.hpp"
#include "reference_data.hpp"

using namespace hetanova;

namespace {

RawDataset dataset_2x2(const std::vector<std::vector<double>>& cells) {
  // cells listed row-major for a 2x2 layout
  RawDataset data;
  const int levels[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (int c = 0; c < 4; ++c)
    for (double y : cells[c]) data.records.push_back({levels[c][0], levels[c][1], y});
  return data;
}

}  // namespace

TEST_CASE("layout validation") {
  CHECK_THROWS_AS(Layout(1, 3, IGrid(1, 3, 5)), DimensionMismatchError);
  CHECK_THROWS_AS(Layout(2, 1, IGrid(2, 1, 5)), DimensionMismatchError);
  CHECK_THROWS_AS(Layout(2, 2, IGrid(2, 2, 1)), EmptyCellError);
  CHECK_THROWS_AS(Layout(2, 2, IGrid(3, 2, 5)), DimensionMismatchError);
  const Layout ok = Layout::balanced(2, 3, 4);
  CHECK(ok.total() == 24);
  CHECK(ok.transposed().a == 3);
}

TEST_CASE("summarize computes mean and unbiased variance") {
  auto data = dataset_2x2({{1, 2, 3}, {4, 4}, {5, 6}, {7, 9}});
  const Layout layout(2, 2, IGrid(2, 2, {3, 2, 2, 2}));
  const CellSummaryTable s = summarize(data, layout);
  CHECK(s.mean(0, 0) == doctest::Approx(2.0));
  CHECK(s.var(0, 0) == doctest::Approx(1.0));
  CHECK(s.mean(1, 1) == doctest::Approx(8.0));
  CHECK(s.var(1, 1) == doctest::Approx(2.0));
}

TEST_CASE("constant cells are flagged degenerate and rejected downstream") {
  auto data = dataset_2x2({{3, 3}, {4, 4}, {5, 6}, {7, 9}});
  const CellSummaryTable s = summarize(data, Layout::balanced(2, 2, 2));
  CHECK(s.var(0, 0) == 0.0);
  REQUIRE(s.degenerate_cells.size() == 2);
  CHECK(s.degenerate_cells[0] == std::pair<int, int>(0, 0));
  CHECK_THROWS_AS(s.require_positive_variances(), DegenerateCellError);
}

TEST_CASE("summarize validates counts and levels") {
  auto data = dataset_2x2({{1, 2}, {4, 4.5}, {5, 6}, {7, 9}});
  CHECK_THROWS_AS(summarize(data, Layout(2, 2, IGrid(2, 2, {3, 2, 2, 2}))), EmptyCellError);

  RawDataset bad = data;
  bad.records.push_back({3, 1, 1.0});
  CHECK_THROWS_AS(summarize(bad, Layout::balanced(2, 2, 2)), DimensionMismatchError);
}

TEST_CASE("summarize matches a two-pass oracle on random data") {
  rng::Stream stream = rng::derive_stream(77, 1);
  const Layout layout = Layout::balanced(2, 3, 5);
  RawDataset data;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 0; k < 5; ++k) data.records.push_back({i, j, 3.0 * stream.next_normal() + i});
  const CellSummaryTable s = summarize(data, layout);

  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) {
      std::vector<double> cell;
      for (const RawRecord& r : data.records)
        if (r.level_a == i + 1 && r.level_b == j + 1) cell.push_back(r.y);
      double mean = 0.0, var = 0.0;
      oracles::two_pass_moments(cell, mean, var);
      CHECK(s.mean(i, j) == doctest::Approx(mean).epsilon(1e-12));
      CHECK(s.var(i, j) == doctest::Approx(var).epsilon(1e-12));
    }
}

TEST_CASE("summarize is permutation invariant within cells") {
  rng::Stream stream = rng::derive_stream(78, 1);
  RawDataset data;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 0; k < 6; ++k) data.records.push_back({i, j, stream.next_normal()});
  const CellSummaryTable a = summarize(data, Layout::balanced(2, 2, 6));
  std::reverse(data.records.begin(), data.records.end());
  const CellSummaryTable b = summarize(data, Layout::balanced(2, 2, 6));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(a.mean(i, j) == doctest::Approx(b.mean(i, j)).epsilon(1e-13));
      CHECK(a.var(i, j) == doctest::Approx(b.var(i, j)).epsilon(1e-13));
    }
}

TEST_CASE("affine transform maps moments as c*mean+d and c^2*var") {
  rng::Stream stream = rng::derive_stream(79, 1);
  RawDataset data, mapped;
  const double c = 2.5, d = -1.25;
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j)
      for (int k = 0; k < 5; ++k) {
        const double y = stream.next_normal();
        data.records.push_back({i, j, y});
        mapped.records.push_back({i, j, c * y + d});
      }
  const CellSummaryTable s0 = summarize(data, Layout::balanced(2, 2, 5));
  const CellSummaryTable s1 = summarize(mapped, Layout::balanced(2, 2, 5));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      CHECK(s1.mean(i, j) == doctest::Approx(c * s0.mean(i, j) + d).epsilon(1e-12));
      CHECK(s1.var(i, j) == doctest::Approx(c * c * s0.var(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("marginals are unweighted") {
  SUBCASE("constant grid") {
    const CellSummaryTable s(Layout::balanced(2, 3, 4), DGrid(2, 3, 7.5), DGrid(2, 3, 1.0));
    const Marginals m = marginals(s);
    for (double v : m.row) CHECK(v == doctest::Approx(7.5));
    for (double v : m.col) CHECK(v == doctest::Approx(7.5));
    CHECK(m.grand == doctest::Approx(7.5));
  }
  SUBCASE("2x2 hand arithmetic") {
    // Deliberately unbalanced cells: marginals must ignore n.
    const CellSummaryTable s(Layout(2, 2, IGrid(2, 2, {2, 9, 4, 3})),
                             DGrid(2, 2, {0, 2, 4, 6}), DGrid(2, 2, 1.0));
    const Marginals m = marginals(s);
    CHECK(m.row[0] == doctest::Approx(1.0));
    CHECK(m.row[1] == doctest::Approx(5.0));
    CHECK(m.col[0] == doctest::Approx(2.0));
    CHECK(m.col[1] == doctest::Approx(4.0));
    CHECK(m.grand == doctest::Approx(3.0));
  }
  SUBCASE("reference data first row") {
    const Marginals m = marginals(student_grades_summary());
    CHECK(m.row[0] == doctest::Approx(10.58).epsilon(1e-12));
  }
  SUBCASE("grand mean equals mean of marginals") {
    rng::Stream stream = rng::derive_stream(80, 1);
    const CellSummaryTable s = oracles::random_summary(3, 4, stream);
    const Marginals m = marginals(s);
    double row_avg = 0.0, col_avg = 0.0;
    for (double v : m.row) row_avg += v;
    for (double v : m.col) col_avg += v;
    CHECK(m.grand == doctest::Approx(row_avg / 3).epsilon(1e-12));
    CHECK(m.grand == doctest::Approx(col_avg / 4).epsilon(1e-12));
  }
}

TEST_CASE("infer_layout reads levels and counts from records") {
  auto data = dataset_2x2({{1, 2}, {4, 4.5}, {5, 6}, {7, 9, 11}});
  const Layout layout = infer_layout(data);
  CHECK(layout.a == 2);
  CHECK(layout.b == 2);
  CHECK(layout.n(1, 1) == 3);
  CHECK_NOTHROW(summarize(data, layout));
}
