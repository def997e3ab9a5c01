#pragma once

#include <cstddef>
#include <vector>

#include "iwasawa/ring.hpp"

namespace iwasawa {

inline constexpr std::size_t kDefaultDetBound = 8;

/// Dense matrix over the truncated Iwasawa algebra, row-major.
class SeriesMatrix {
 public:
  SeriesMatrix(const RingParams& params, std::size_t rows, std::size_t cols);
  static SeriesMatrix identity(const RingParams& params, std::size_t n);
  static SeriesMatrix diagonal(const std::vector<IwasawaSeries>& entries);

  const RingParams& params() const { return params_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const IwasawaSeries& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  IwasawaSeries& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }

  /// Submatrix on the given row and column indices.
  SeriesMatrix minor(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const;

  friend SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b);
  friend bool operator==(const SeriesMatrix&, const SeriesMatrix&) = default;

 private:
  RingParams params_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<IwasawaSeries> entries_;
};

/// Determinant by Laplace expansion (memoised over column subsets). Exact in
/// the truncated ring, which has zero divisors, so no division is used.
IwasawaSeries det(const SeriesMatrix& a, std::size_t max_size = kDefaultDetBound);

}  // namespace iwasawa
