#pragma once

#include <cstddef>
#include <vector>

#include "hetanova/errors.hpp"

namespace hetanova {

// Dense row-major a x b grid. Small by construction (a, b are factor level
// counts), so plain value semantics throughout.
template <typename T>
class Grid {
 public:
  Grid() : rows_(0), cols_(0) {}
  Grid(int rows, int cols, T fill = T{})
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill) {
    if (rows < 0 || cols < 0) throw DimensionMismatchError("grid dimensions must be nonnegative");
  }
  Grid(int rows, int cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
      throw DimensionMismatchError("grid data size does not match dimensions");
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(int i, int j) { return data_[static_cast<std::size_t>(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[static_cast<std::size_t>(i) * cols_ + j]; }

  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }

  Grid transposed() const {
    Grid out(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  bool same_shape(const Grid& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }

  friend bool operator==(const Grid& x, const Grid& y) {
    return x.rows_ == y.rows_ && x.cols_ == y.cols_ && x.data_ == y.data_;
  }

 private:
  int rows_, cols_;
  std::vector<T> data_;
};

using DGrid = Grid<double>;
using IGrid = Grid<int>;

}  // namespace hetanova
