#include "doctest.h"
#include "iwasawa/fplin.hpp"
#include "iwasawa/random.hpp"
#include "iwasawa/ring.hpp"
#include "oracle.hpp"

using namespace iwasawa;
using fplin::FpMatrix;
using fplin::PkMatrix;

namespace {

FpMatrix random_fp(std::uint32_t p, std::size_t rows, std::size_t cols, Rng& rng, std::uint64_t zero_bias = 0) {
  FpMatrix a(p, rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) a.set(r, c, rng.below(zero_bias + 1) == 0 ? rng.below(p) : 0);
  }
  return a;
}

std::vector<std::vector<std::int64_t>> to_rows(const FpMatrix& a) {
  std::vector<std::vector<std::int64_t>> out(a.rows(), std::vector<std::int64_t>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[r][c] = a(r, c);
  }
  return out;
}

using IntMatrix = std::vector<std::vector<std::uint64_t>>;

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b, std::uint64_t q) {
  IntMatrix c(a.size(), std::vector<std::uint64_t>(b[0].size(), 0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] = (c[i][j] + oracle::mulmod(a[i][k], b[k][j], q)) % q;
    }
  }
  return c;
}

// Product of random elementary matrices: invertible over Z/q.
IntMatrix unimodular(std::size_t n, std::uint64_t q, Rng& rng) {
  IntMatrix u(n, std::vector<std::uint64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;
  for (int step = 0; step < 4 * static_cast<int>(n); ++step) {
    const std::size_t i = rng.below(n);
    const std::size_t j = rng.below(n);
    if (i == j) continue;
    const std::uint64_t c = rng.below(q);
    for (std::size_t k = 0; k < n; ++k) u[i][k] = (u[i][k] + oracle::mulmod(c, u[j][k], q)) % q;
  }
  return u;
}

}  // namespace

TEST_SUITE("fplin") {

TEST_CASE("rank against textbook elimination") {
  Rng rng(51);
  for (std::uint32_t p : {3U, 5U, 7U, 251U}) {
    for (int trial = 0; trial < 25; ++trial) {
      const std::size_t rows = rng.below(40) + 1;
      const std::size_t cols = rng.below(40) + 1;
      const FpMatrix a = random_fp(p, rows, cols, rng, rng.below(4));
      CHECK(a.rank() == oracle::rank_mod_p(to_rows(a), p));
    }
  }
}

TEST_CASE("rank of transpose") {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const FpMatrix a = random_fp(3, rng.below(30) + 1, rng.below(30) + 1, rng, rng.below(3));
    CHECK(a.rank() == a.transposed().rank());
  }
}

TEST_CASE("cokernel_dim examples") {
  CHECK(fplin::cokernel_dim(FpMatrix(3, 4, 6)) == 4);
  CHECK(fplin::cokernel_dim(FpMatrix::identity(3, 7)) == 0);
  const std::vector<std::uint32_t> x{0, 1};
  const FpMatrix shift = fplin::mult_matrix(3, x, 1);
  CHECK(fplin::cokernel_dim(shift) == 1);
}

TEST_CASE("mult_matrix examples") {
  const std::vector<std::uint32_t> one{1};
  for (int n = 0; n <= 3; ++n) CHECK(fplin::mult_matrix(3, one, n) == FpMatrix::identity(3, oracle::powmod(3, n, 1000)));

  const std::vector<std::uint32_t> x{0, 1};
  const FpMatrix shift = fplin::mult_matrix(3, x, 1);
  FpMatrix expected(3, 3, 3);
  expected.set(1, 0, 1);
  expected.set(2, 1, 1);
  CHECK(shift == expected);

  // 3 + 4X reduces to X mod 3.
  const RingParams params(3, 6, 32);
  const auto bar = reduce_mod_p(IwasawaSeries(params, {3, 4}));
  CHECK(fplin::mult_matrix(3, bar, 1) == shift);
}

TEST_CASE("mult_matrix is lower-triangular Toeplitz") {
  const std::vector<std::uint32_t> f{2, 1, 0, 4, 3};
  const FpMatrix a = fplin::truncated_mult_matrix(5, f, 7);
  for (std::size_t r = 0; r < 7; ++r) {
    for (std::size_t c = 0; c < 7; ++c) CHECK(a(r, c) == (r >= c && r - c < f.size() ? f[r - c] : 0U));
  }
}

TEST_CASE("dimension budget") {
  const std::vector<std::uint32_t> one{1};
  CHECK_THROWS_AS(fplin::mult_matrix(3, one, 9), DimensionBudgetExceeded);
  CHECK_THROWS_AS(fplin::mult_matrix(3, one, 3, 20), DimensionBudgetExceeded);
  CHECK(fplin::level_dimension(3, 2, 2, 18) == 9);
  CHECK_THROWS_AS(fplin::level_dimension(3, 2, 3, 18), DimensionBudgetExceeded);
  CHECK_THROWS_AS(fplin::level_dimension(3, -1, 1, 18), InvalidArgument);
}

TEST_CASE("cokernel_dim under permutations and unit scaling") {
  Rng rng(57);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t rows = rng.below(12) + 2;
    const std::size_t cols = rng.below(12) + 2;
    const FpMatrix a = random_fp(5, rows, cols, rng, 2);
    std::vector<std::size_t> rp(rows);
    std::vector<std::size_t> cp(cols);
    for (std::size_t i = 0; i < rows; ++i) rp[i] = i;
    for (std::size_t i = 0; i < cols; ++i) cp[i] = i;
    for (std::size_t i = rows; i > 1; --i) std::swap(rp[i - 1], rp[rng.below(i)]);
    for (std::size_t i = cols; i > 1; --i) std::swap(cp[i - 1], cp[rng.below(i)]);
    const std::size_t scaled_row = rng.below(rows);
    const std::uint64_t unit = rng.below(4) + 1;
    FpMatrix b(5, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        b.set(r, c, std::uint64_t{a(rp[r], cp[c])} * (r == scaled_row ? unit : 1));
      }
    }
    CHECK(fplin::cokernel_dim(a) == fplin::cokernel_dim(b));
  }
}

TEST_CASE("cokernel_dim is additive over blocks") {
  Rng rng(59);
  for (int trial = 0; trial < 50; ++trial) {
    const FpMatrix a = random_fp(3, rng.below(10) + 1, rng.below(10) + 1, rng, 2);
    const FpMatrix b = random_fp(3, rng.below(10) + 1, rng.below(10) + 1, rng, 2);
    FpMatrix d(3, a.rows() + b.rows(), a.cols() + b.cols());
    d.set_block(0, 0, a);
    d.set_block(a.rows(), a.cols(), b);
    CHECK(fplin::cokernel_dim(d) == fplin::cokernel_dim(a) + fplin::cokernel_dim(b));
  }
}

TEST_CASE("Smith exponents of disguised diagonal matrices") {
  Rng rng(61);
  for (std::uint32_t p : {3U, 5U}) {
    const int k = 4;
    const std::uint64_t q = oracle::powmod(p, k, UINT64_MAX);
    for (int trial = 0; trial < 40; ++trial) {
      const std::size_t rows = rng.below(6) + 1;
      const std::size_t cols = rng.below(6) + 1;
      // Diagonal p^{e_i} with e_i in [0, k]; e = k is a zero entry.
      IntMatrix d(rows, std::vector<std::uint64_t>(cols, 0));
      std::vector<int> expected;
      for (std::size_t i = 0; i < rows; ++i) {
        if (i < cols) {
          const int e = static_cast<int>(rng.below(k + 1));
          d[i][i] = oracle::powmod(p, e, q) % q;
          if (e > 0) expected.push_back(e);
        } else {
          expected.push_back(k);
        }
      }
      std::sort(expected.begin(), expected.end());
      const IntMatrix a = multiply(multiply(unimodular(rows, q, rng), d, q), unimodular(cols, q, rng), q);
      PkMatrix m(p, k, rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, a[r][c]);
      }
      CHECK(fplin::invariant_factor_exponents(m) == expected);
      std::size_t length = 0;
      for (int e : expected) length += static_cast<std::size_t>(e);
      CHECK(fplin::cokernel_length(m) == length);
    }
  }
}

TEST_CASE("constructor checks") {
  CHECK_THROWS_AS(FpMatrix(65537, 1, 1), InvalidArgument);
  CHECK_THROWS_AS(PkMatrix(3, 0, 1, 1), InvalidArgument);
  FpMatrix a(3, 2, 2);
  CHECK_THROWS_AS(a.set_block(1, 1, FpMatrix::identity(3, 2)), InvalidArgument);
}

}  // TEST_SUITE
