#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace curvereg {

/// Dense column-major matrix. Columns are curves throughout the library, so
/// `column(j)` is the contiguous view most kernels consume.
template <class T>
class ColumnMatrix {
 public:
  ColumnMatrix() = default;
  ColumnMatrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) noexcept {
    return data_[c * rows_ + r];
  }
  const T& operator()(std::size_t r, std::size_t c) const noexcept {
    return data_[c * rows_ + r];
  }

  T& at(std::size_t r, std::size_t c) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("ColumnMatrix::at");
    return (*this)(r, c);
  }
  const T& at(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("ColumnMatrix::at");
    return (*this)(r, c);
  }

  std::span<T> column(std::size_t c) noexcept {
    return {data_.data() + c * rows_, rows_};
  }
  std::span<const T> column(std::size_t c) const noexcept {
    return {data_.data() + c * rows_, rows_};
  }

  std::span<const T> data() const noexcept { return data_; }

  friend bool operator==(const ColumnMatrix&, const ColumnMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = ColumnMatrix<double>;

}  // namespace curvereg
