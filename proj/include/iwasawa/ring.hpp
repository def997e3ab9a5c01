#pragma once

// Truncated Iwasawa algebra (Z/p^N)[X]/(X^M).
//
// Every IwasawaSeries carries the RingParams it lives in; coefficients are
// kept as canonical residues in [0, p^N), so equality is plain coefficient
// comparison.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iwasawa/errors.hpp"

namespace iwasawa {

using Residue = std::uint64_t;

namespace modarith {

Residue mul(Residue a, Residue b, Residue modulus);
Residue pow(Residue base, std::uint64_t exp, Residue modulus);
/// Inverse of a unit modulo `modulus`; throws InvalidArgument for non-units.
Residue inverse(Residue a, Residue modulus);
Residue reduce(std::int64_t value, Residue modulus);
/// Symmetric representative in (-modulus/2, modulus/2].
std::int64_t centered(Residue value, Residue modulus);

}  // namespace modarith

bool is_prime(std::uint64_t n);

class RingParams {
 public:
  /// u0 defaults to 1 + p.
  RingParams(std::uint32_t p, int precision_p, int precision_x);
  RingParams(std::uint32_t p, int precision_p, int precision_x, std::int64_t u0);

  std::uint32_t prime() const { return p_; }
  int precision_p() const { return precision_p_; }
  int precision_x() const { return precision_x_; }
  Residue u0() const { return u0_; }
  /// p^N.
  Residue modulus() const { return modulus_; }

  /// p-adic valuation of a residue, capped at N (so valuation(0) == N).
  int valuation(Residue value) const;

  /// Same ring with a different topological-generator image.
  RingParams with_u0(std::int64_t u0) const;

  std::string describe() const;

  friend bool operator==(const RingParams&, const RingParams&) = default;

 private:
  std::uint32_t p_;
  int precision_p_;
  int precision_x_;
  Residue modulus_;
  Residue u0_;
};

class IwasawaSeries {
 public:
  /// The zero series.
  explicit IwasawaSeries(const RingParams& params);
  /// Little-endian coefficients; terms at X^M and beyond are dropped.
  IwasawaSeries(const RingParams& params, std::span<const std::int64_t> coeffs);
  IwasawaSeries(const RingParams& params, std::initializer_list<std::int64_t> coeffs);

  static IwasawaSeries from_residues(const RingParams& params, std::vector<Residue> coeffs);
  static IwasawaSeries constant(const RingParams& params, std::int64_t c);
  static IwasawaSeries one(const RingParams& params) { return constant(params, 1); }
  static IwasawaSeries x(const RingParams& params) { return monomial(params, 1, 1); }
  static IwasawaSeries monomial(const RingParams& params, int degree, std::int64_t c);

  const RingParams& params() const { return params_; }
  std::span<const Residue> coeffs() const { return coeffs_; }
  Residue operator[](std::size_t i) const { return coeffs_[i]; }
  int length() const { return params_.precision_x(); }

  bool is_zero() const;
  /// Index of the highest nonzero coefficient, -1 for zero.
  int degree() const;
  /// Zero modulo p.
  bool is_zero_mod_p() const;
  bool is_unit() const;

  IwasawaSeries operator-() const;
  IwasawaSeries& operator+=(const IwasawaSeries& rhs);
  IwasawaSeries& operator-=(const IwasawaSeries& rhs);
  IwasawaSeries& operator*=(const IwasawaSeries& rhs);
  IwasawaSeries scaled(std::int64_t c) const;
  IwasawaSeries scaled_residue(Residue c) const;

  friend IwasawaSeries operator+(IwasawaSeries a, const IwasawaSeries& b) { return a += b; }
  friend IwasawaSeries operator-(IwasawaSeries a, const IwasawaSeries& b) { return a -= b; }
  friend IwasawaSeries operator*(const IwasawaSeries& a, const IwasawaSeries& b);
  friend bool operator==(const IwasawaSeries&, const IwasawaSeries&) = default;

  std::string to_string() const;

 private:
  IwasawaSeries(const RingParams& params, std::vector<Residue> coeffs);

  RingParams params_;
  std::vector<Residue> coeffs_;
};

/// Ring operation selector matching the command surface of ring_arith.
enum class RingOp { add, sub, mul };
IwasawaSeries ring_arith(const IwasawaSeries& a, const IwasawaSeries& b, RingOp op);

/// (1+X)^{p^n} - 1. Requires p^n < M.
IwasawaSeries omega(const RingParams& params, int n);

struct SeriesInvariants {
  int mu = 0;
  int lambda = 0;
  friend bool operator==(const SeriesInvariants&, const SeriesInvariants&) = default;
};

/// mu = least p-adic valuation of a coefficient, lambda = first index attaining it.
SeriesInvariants series_invariants(const IwasawaSeries& f);

/// Monic of degree d with every lower coefficient divisible by p (and zero above d).
bool is_distinguished(const IwasawaSeries& f);

/// f(u0^i (1+X) - 1), with f read as the polynomial of its M stored coefficients.
/// Exact for polynomials; for general series the coefficients up to X^{M-N} are
/// independent of the discarded tail.
IwasawaSeries twist_substitute(const IwasawaSeries& f, std::int64_t i);

/// Coefficients of f mod p as values in [0, p).
std::vector<std::uint32_t> reduce_mod_p(const IwasawaSeries& f);

}  // namespace iwasawa
