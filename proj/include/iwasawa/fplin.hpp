#pragma once

// Dense exact linear algebra over F_p and Z/p^k.
//
// Convention shared with the module layer: generators index rows, relations
// are columns, and the cokernel is (rows-space) / (column span).

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

#include "iwasawa/errors.hpp"

namespace iwasawa::fplin {

inline constexpr std::size_t kDefaultDimensionBudget = 8192;

/// Dense matrix over F_p, p < 2^16.
class FpMatrix {
 public:
  FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols);
  static FpMatrix identity(std::uint32_t p, std::size_t n);

  FpMatrix(const FpMatrix& other);
  FpMatrix& operator=(const FpMatrix& other);
  FpMatrix(FpMatrix&& other) noexcept;
  FpMatrix& operator=(FpMatrix&& other) noexcept;

  std::uint32_t prime() const { return p_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint32_t operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  /// Stores value mod p.
  void set(std::size_t r, std::size_t c, std::uint64_t value);
  /// Copies `block` with its top-left corner at (row0, col0).
  void set_block(std::size_t row0, std::size_t col0, const FpMatrix& block);

  FpMatrix transposed() const;

  /// Rank by Gaussian elimination; computed once and cached.
  std::size_t rank() const;

  friend bool operator==(const FpMatrix& a, const FpMatrix& b);

 private:
  std::uint32_t p_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint16_t> entries_;
  mutable std::atomic<std::int64_t> rank_cache_{-1};
};

/// rows - rank: dimension of the cokernel of the column map.
std::size_t cokernel_dim(const FpMatrix& a);

/// Multiplication by fbar on F_p[X]/(X^dim), basis 1, X, ..., X^{dim-1};
/// column k is fbar * X^k. Coefficients of fbar beyond dim are ignored.
FpMatrix truncated_mult_matrix(std::uint32_t p, std::span<const std::uint32_t> fbar, std::size_t dim);

/// truncated_mult_matrix at dim = p^n, guarded by a dimension budget.
FpMatrix mult_matrix(std::uint32_t p, std::span<const std::uint32_t> fbar, int n,
                     std::size_t budget = kDefaultDimensionBudget);

/// p^n, or throws DimensionBudgetExceeded when p^n * copies exceeds the budget.
std::size_t level_dimension(std::uint32_t p, int n, std::size_t copies, std::size_t budget);

/// Dense matrix over Z/p^k.
class PkMatrix {
 public:
  PkMatrix(std::uint32_t p, int k, std::size_t rows, std::size_t cols);

  std::uint32_t prime() const { return p_; }
  int exponent() const { return k_; }
  std::uint64_t modulus() const { return modulus_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::uint64_t operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, std::uint64_t value) { entries_[r * cols_ + c] = value % modulus_; }

 private:
  std::uint32_t p_;
  int k_;
  std::uint64_t modulus_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<std::uint64_t> entries_;
};

/// Exponents e of the cyclic factors Z/p^e (1 <= e <= k) of the cokernel,
/// sorted ascending. A factor with e == k may be truncated by the modulus.
std::vector<int> invariant_factor_exponents(const PkMatrix& a);

/// Length of the cokernel: log_p of its order.
std::size_t cokernel_length(const PkMatrix& a);

}  // namespace iwasawa::fplin
