#pragma once

// Naive reference computations used as test oracles. They share no code with
// the library beyond modular reduction of inputs.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracle {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

inline u64 powmod(u64 b, u64 e, u64 q) {
  u64 r = 1 % q;
  for (u64 i = 0; i < e; ++i) r = mulmod(r, b, q);
  return r;
}

/// Schoolbook product truncated to `len` terms.
inline std::vector<u64> poly_mul(const std::vector<u64>& a, const std::vector<u64>& b, u64 q, std::size_t len) {
  std::vector<u64> c(len, 0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], q)) % q;
  }
  return c;
}

/// f(u X + (u - 1)) expanded term by term with the binomial theorem.
inline std::vector<u64> compose_affine(const std::vector<u64>& f, u64 u, u64 q, std::size_t len) {
  const u64 c = (u + q - 1) % q;
  std::vector<u64> out(len, 0);
  std::vector<std::vector<u64>> binom(f.size(), std::vector<u64>(f.size(), 0));
  for (std::size_t k = 0; k < f.size(); ++k) {
    binom[k][0] = 1 % q;
    for (std::size_t j = 1; j <= k; ++j) binom[k][j] = (binom[k - 1][j - 1] + (j < k ? binom[k - 1][j] : 0)) % q;
  }
  for (std::size_t k = 0; k < f.size(); ++k) {
    for (std::size_t j = 0; j <= k && j < len; ++j) {
      u64 term = mulmod(f[k], binom[k][j], q);
      term = mulmod(term, powmod(u, j, q), q);
      term = mulmod(term, powmod(c, k - j, q), q);
      out[j] = (out[j] + term) % q;
    }
  }
  return out;
}

/// Determinant by the Leibniz permutation sum. Entries are truncated series.
inline std::vector<u64> leibniz_det(const std::vector<std::vector<std::vector<u64>>>& a, u64 q, std::size_t len) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<u64> total(len, 0);
  if (n == 0) {
    total[0] = 1 % q;
    return total;
  }
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    }
    std::vector<u64> term(len, 0);
    term[0] = 1 % q;
    for (std::size_t i = 0; i < n; ++i) term = poly_mul(term, a[i][perm[i]], q, len);
    for (std::size_t k = 0; k < len; ++k) {
      total[k] = inversions % 2 == 0 ? (total[k] + term[k]) % q : (total[k] + q - term[k]) % q;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// Rank over F_p by textbook elimination on int64 entries.
inline std::size_t rank_mod_p(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    std::int64_t inv = 1;
    while ((a[rank][c] % p) * inv % p != 1) ++inv;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::int64_t factor = (a[r][c] % p) * inv % p;
      if (factor == 0) continue;
      for (std::size_t k = 0; k < cols; ++k) a[r][k] = ((a[r][k] - factor * a[rank][k]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

}  // namespace oracle
