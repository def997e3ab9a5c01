#include "iwasawa/fplin.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace iwasawa::fplin {

namespace {

std::uint32_t inverse_mod_p(std::uint32_t a, std::uint32_t p) {
  // p is prime: a^{p-2}.
  std::uint64_t result = 1;
  std::uint64_t base = a % p;
  std::uint32_t e = p - 2;
  while (e > 0) {
    if (e & 1U) result = result * base % p;
    base = base * base % p;
    e >>= 1U;
  }
  return static_cast<std::uint32_t>(result);
}

// Row-echelon rank. For p < 128 entries are bytes and the row update is a
// branch-free add-then-conditional-subtract of a precomputed multiple of the
// pivot row, which the compiler vectorises.
template <typename T>
std::size_t rank_kernel(std::uint32_t p, std::size_t rows, std::size_t cols, std::vector<T>& a) {
  constexpr bool small = sizeof(T) == 1;
  std::size_t rank = 0;
  std::vector<T> multiples;
  std::vector<char> ready;
  if constexpr (small) {
    multiples.resize(static_cast<std::size_t>(p) * cols);
    ready.resize(p);
  }
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    while (pivot < rows && a[pivot * cols + c] == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != rank) {
      std::swap_ranges(a.begin() + static_cast<std::ptrdiff_t>(pivot * cols + c),
                       a.begin() + static_cast<std::ptrdiff_t>(pivot * cols + cols),
                       a.begin() + static_cast<std::ptrdiff_t>(rank * cols + c));
    }
    T* prow = &a[rank * cols];
    const std::uint32_t inv = inverse_mod_p(prow[c], p);
    for (std::size_t k = c; k < cols; ++k) prow[k] = static_cast<T>(std::uint64_t{prow[k]} * inv % p);
    if constexpr (small) std::fill(ready.begin(), ready.end(), 0);

    for (std::size_t r = rank + 1; r < rows; ++r) {
      T* row = &a[r * cols];
      const std::uint32_t e = row[c];
      if (e == 0) continue;
      const std::uint32_t f = p - e;
      if constexpr (small) {
        T* m = &multiples[f * cols];
        if (!ready[f]) {
          for (std::size_t k = c; k < cols; ++k) m[k] = static_cast<T>(std::uint32_t{prow[k]} * f % p);
          ready[f] = 1;
        }
        const T pp = static_cast<T>(p);
        for (std::size_t k = c; k < cols; ++k) {
          const T x = static_cast<T>(row[k] + m[k]);
          row[k] = x >= pp ? static_cast<T>(x - pp) : x;
        }
      } else {
        for (std::size_t k = c; k < cols; ++k) {
          row[k] = static_cast<T>((std::uint64_t{row[k]} + std::uint64_t{f} * prow[k]) % p);
        }
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

FpMatrix::FpMatrix(std::uint32_t p, std::size_t rows, std::size_t cols)
    : p_(p), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
  if (p < 2 || p >= 65536) throw InvalidArgument("FpMatrix: p must be a prime below 2^16");
}

FpMatrix FpMatrix::identity(std::uint32_t p, std::size_t n) {
  FpMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = 1;
  return m;
}

FpMatrix::FpMatrix(const FpMatrix& other)
    : p_(other.p_), rows_(other.rows_), cols_(other.cols_), entries_(other.entries_),
      rank_cache_(other.rank_cache_.load()) {}

FpMatrix& FpMatrix::operator=(const FpMatrix& other) {
  if (this != &other) {
    p_ = other.p_;
    rows_ = other.rows_;
    cols_ = other.cols_;
    entries_ = other.entries_;
    rank_cache_.store(other.rank_cache_.load());
  }
  return *this;
}

FpMatrix::FpMatrix(FpMatrix&& other) noexcept
    : p_(other.p_), rows_(other.rows_), cols_(other.cols_), entries_(std::move(other.entries_)),
      rank_cache_(other.rank_cache_.load()) {}

FpMatrix& FpMatrix::operator=(FpMatrix&& other) noexcept {
  p_ = other.p_;
  rows_ = other.rows_;
  cols_ = other.cols_;
  entries_ = std::move(other.entries_);
  rank_cache_.store(other.rank_cache_.load());
  return *this;
}

void FpMatrix::set(std::size_t r, std::size_t c, std::uint64_t value) {
  entries_[r * cols_ + c] = static_cast<std::uint16_t>(value % p_);
  rank_cache_.store(-1);
}

void FpMatrix::set_block(std::size_t row0, std::size_t col0, const FpMatrix& block) {
  if (block.p_ != p_ || row0 + block.rows_ > rows_ || col0 + block.cols_ > cols_) {
    throw InvalidArgument("set_block: block does not fit");
  }
  for (std::size_t r = 0; r < block.rows_; ++r) {
    std::copy_n(block.entries_.begin() + static_cast<std::ptrdiff_t>(r * block.cols_), block.cols_,
                entries_.begin() + static_cast<std::ptrdiff_t>((row0 + r) * cols_ + col0));
  }
  rank_cache_.store(-1);
}

FpMatrix FpMatrix::transposed() const {
  FpMatrix t(p_, cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t.entries_[c * rows_ + r] = entries_[r * cols_ + c];
  }
  return t;
}

std::size_t FpMatrix::rank() const {
  const std::int64_t cached = rank_cache_.load();
  if (cached >= 0) return static_cast<std::size_t>(cached);
  std::size_t r = 0;
  if (rows_ > 0 && cols_ > 0) {
    if (p_ < 128) {
      std::vector<std::uint8_t> scratch(entries_.begin(), entries_.end());
      r = rank_kernel(p_, rows_, cols_, scratch);
    } else {
      std::vector<std::uint16_t> scratch(entries_);
      r = rank_kernel(p_, rows_, cols_, scratch);
    }
  }
  rank_cache_.store(static_cast<std::int64_t>(r));
  return r;
}

bool operator==(const FpMatrix& a, const FpMatrix& b) {
  return a.p_ == b.p_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
}

std::size_t cokernel_dim(const FpMatrix& a) { return a.rows() - a.rank(); }

FpMatrix truncated_mult_matrix(std::uint32_t p, std::span<const std::uint32_t> fbar, std::size_t dim) {
  FpMatrix m(p, dim, dim);
  const std::size_t terms = std::min(fbar.size(), dim);
  for (std::size_t shift = 0; shift < terms; ++shift) {
    const std::uint32_t c = fbar[shift] % p;
    if (c == 0) continue;
    for (std::size_t k = 0; k + shift < dim; ++k) m.set(k + shift, k, c);
  }
  return m;
}

std::size_t level_dimension(std::uint32_t p, int n, std::size_t copies, std::size_t budget) {
  if (n < 0) throw InvalidArgument("level must be non-negative");
  std::size_t dim = 1;
  for (int i = 0; i < n; ++i) {
    dim *= p;
    if (dim > budget) break;
  }
  if (dim * std::max<std::size_t>(copies, 1) > budget) {
    throw DimensionBudgetExceeded("level " + std::to_string(n) + " needs dimension beyond budget " +
                                  std::to_string(budget));
  }
  return dim;
}

FpMatrix mult_matrix(std::uint32_t p, std::span<const std::uint32_t> fbar, int n, std::size_t budget) {
  return truncated_mult_matrix(p, fbar, level_dimension(p, n, 1, budget));
}

PkMatrix::PkMatrix(std::uint32_t p, int k, std::size_t rows, std::size_t cols)
    : p_(p), k_(k), modulus_(1), rows_(rows), cols_(cols), entries_(rows * cols, 0) {
  if (k < 1) throw InvalidArgument("PkMatrix: exponent must be positive");
  for (int i = 0; i < k; ++i) {
    if (modulus_ > (std::uint64_t{1} << 62) / p) throw InvalidArgument("PkMatrix: p^k exceeds 2^62");
    modulus_ *= p;
  }
}

std::vector<int> invariant_factor_exponents(const PkMatrix& a) {
  const std::uint64_t q = a.modulus();
  const std::uint32_t p = a.prime();
  const int k = a.exponent();
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<std::uint64_t> m(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m[r * cols + c] = a(r, c);
  }
  auto valuation = [&](std::uint64_t v) {
    if (v == 0) return k;
    int e = 0;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    return e;
  };
  auto mulmod = [q](std::uint64_t x, std::uint64_t y) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % q);
  };
  auto inverse = [&](std::uint64_t u, std::uint64_t mod) {
    __int128 old_r = static_cast<__int128>(u % mod), r = static_cast<__int128>(mod), old_s = 1, s = 0;
    while (r != 0) {
      const __int128 t = old_r / r;
      std::swap(old_r, r);
      r -= t * old_r;
      std::swap(old_s, s);
      s -= t * old_s;
    }
    const __int128 md = static_cast<__int128>(mod);
    return static_cast<std::uint64_t>(((old_s % md) + md) % md);
  };

  // Local elimination: the entry of least valuation divides everything left,
  // so clearing its column by row operations and then dropping its row and
  // column splits off one cyclic factor.
  std::vector<char> row_live(rows, 1);
  std::vector<char> col_live(cols, 1);
  std::vector<int> factors;
  std::size_t pivots = 0;
  while (true) {
    int best = k;
    std::size_t pr = 0, pc = 0;
    for (std::size_t r = 0; r < rows && best > 0; ++r) {
      if (!row_live[r]) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!col_live[c]) continue;
        const std::uint64_t v = m[r * cols + c];
        if (v == 0) continue;
        const int e = valuation(v);
        if (e < best) {
          best = e;
          pr = r;
          pc = c;
          if (e == 0) break;
        }
      }
    }
    if (best == k) break;
    std::uint64_t scale = 1;
    for (int i = 0; i < best; ++i) scale *= p;
    const std::uint64_t reduced_mod = q / scale;
    const std::uint64_t unit_inv = inverse(m[pr * cols + pc] / scale, reduced_mod);
    for (std::size_t r = 0; r < rows; ++r) {
      if (!row_live[r] || r == pr) continue;
      const std::uint64_t v = m[r * cols + pc];
      if (v == 0) continue;
      const std::uint64_t t = mulmod(v / scale % reduced_mod, unit_inv) % reduced_mod;
      const std::uint64_t neg_t = (q - t) % q;
      for (std::size_t c = 0; c < cols; ++c) {
        if (!col_live[c]) continue;
        const std::uint64_t pv = m[pr * cols + c];
        if (pv == 0) continue;
        m[r * cols + c] = (m[r * cols + c] + mulmod(neg_t, pv)) % q;
      }
    }
    row_live[pr] = 0;
    col_live[pc] = 0;
    ++pivots;
    if (best > 0) factors.push_back(best);
  }
  for (std::size_t r = pivots; r < rows; ++r) factors.push_back(k);
  std::sort(factors.begin(), factors.end());
  return factors;
}

std::size_t cokernel_length(const PkMatrix& a) {
  const auto f = invariant_factor_exponents(a);
  return static_cast<std::size_t>(std::accumulate(f.begin(), f.end(), 0));
}

}  // namespace iwasawa::fplin
