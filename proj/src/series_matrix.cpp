#include "iwasawa/series_matrix.hpp"

#include <bit>
#include <string>

namespace iwasawa {

SeriesMatrix::SeriesMatrix(const RingParams& params, std::size_t rows, std::size_t cols)
    : params_(params), rows_(rows), cols_(cols), entries_(rows * cols, IwasawaSeries(params)) {}

SeriesMatrix SeriesMatrix::identity(const RingParams& params, std::size_t n) {
  SeriesMatrix m(params, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = IwasawaSeries::one(params);
  return m;
}

SeriesMatrix SeriesMatrix::diagonal(const std::vector<IwasawaSeries>& entries) {
  if (entries.empty()) throw InvalidArgument("diagonal: need at least one entry");
  SeriesMatrix m(entries.front().params(), entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return m;
}

SeriesMatrix SeriesMatrix::minor(const std::vector<std::size_t>& row_idx,
                                 const std::vector<std::size_t>& col_idx) const {
  SeriesMatrix out(params_, row_idx.size(), col_idx.size());
  for (std::size_t i = 0; i < row_idx.size(); ++i) {
    for (std::size_t j = 0; j < col_idx.size(); ++j) out(i, j) = (*this)(row_idx[i], col_idx[j]);
  }
  return out;
}

SeriesMatrix operator*(const SeriesMatrix& a, const SeriesMatrix& b) {
  if (a.cols_ != b.rows_) throw InvalidArgument("matrix product: shape mismatch");
  if (!(a.params_ == b.params_)) throw ParamMismatch("matrix product: ring parameters differ");
  SeriesMatrix out(a.params_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const IwasawaSeries& aik = a(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

IwasawaSeries det(const SeriesMatrix& a, std::size_t max_size) {
  if (a.rows() != a.cols()) throw NotSquare("det: matrix is not square");
  const std::size_t n = a.rows();
  if (n > max_size) {
    throw SizeExceeded("det: size " + std::to_string(n) + " exceeds bound " + std::to_string(max_size));
  }
  const RingParams& params = a.params();
  if (n == 0) return IwasawaSeries::one(params);

  // minors[S] = det of the first |S| rows restricted to the column set S,
  // expanded along the last of those rows.
  const std::size_t subsets = std::size_t{1} << n;
  std::vector<IwasawaSeries> minors(subsets, IwasawaSeries(params));
  minors[0] = IwasawaSeries::one(params);
  for (std::size_t s = 1; s < subsets; ++s) {
    const int k = std::popcount(s);
    const std::size_t row = static_cast<std::size_t>(k - 1);
    IwasawaSeries acc(params);
    int position = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (!(s & (std::size_t{1} << j))) continue;
      const IwasawaSeries& entry = a(row, j);
      const IwasawaSeries& sub = minors[s & ~(std::size_t{1} << j)];
      if (!entry.is_zero() && !sub.is_zero()) {
        if ((position + k - 1) % 2 == 0) acc += entry * sub;
        else acc -= entry * sub;
      }
      ++position;
    }
    minors[s] = std::move(acc);
  }
  return minors[subsets - 1];
}

}  // namespace iwasawa
