#include "doctest.h"
#include "iwasawa/random.hpp"
#include "iwasawa/series_matrix.hpp"
#include "oracle.hpp"

using namespace iwasawa;

namespace {

SeriesMatrix random_matrix(const RingParams& params, std::size_t n, int degree, Rng& rng) {
  SeriesMatrix a(params, n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a(r, c) = random_polynomial(params, degree, rng);
  }
  return a;
}

std::vector<std::vector<std::vector<std::uint64_t>>> raw(const SeriesMatrix& a) {
  std::vector<std::vector<std::vector<std::uint64_t>>> out(a.rows());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) out[r].emplace_back(a(r, c).coeffs().begin(), a(r, c).coeffs().end());
  }
  return out;
}

}  // namespace

TEST_SUITE("series_matrix") {

TEST_CASE("determinant examples") {
  const RingParams params(3, 6, 32);
  const SeriesMatrix d = SeriesMatrix::diagonal({IwasawaSeries(params, {3, 1}), IwasawaSeries(params, {3})});
  CHECK(det(d) == IwasawaSeries(params, {9, 3}));

  SeriesMatrix a(params, 2, 2);
  a(0, 0) = IwasawaSeries::x(params);
  a(0, 1) = IwasawaSeries::constant(params, 3);
  a(1, 0) = IwasawaSeries::constant(params, 3);
  a(1, 1) = IwasawaSeries::x(params);
  CHECK(det(a) == IwasawaSeries(params, {-9, 0, 1}));

  CHECK(det(SeriesMatrix::identity(params, 5)) == IwasawaSeries::one(params));
}

TEST_CASE("determinant errors") {
  const RingParams params(3, 6, 32);
  CHECK_THROWS_AS(det(SeriesMatrix(params, 2, 3)), NotSquare);
  CHECK_THROWS_AS(det(SeriesMatrix::identity(params, 9)), SizeExceeded);
  CHECK(det(SeriesMatrix::identity(params, 9), 9) == IwasawaSeries::one(params));
}

TEST_CASE("determinant agrees with the Leibniz sum") {
  const RingParams params(5, 5, 16);
  Rng rng(41);
  for (std::size_t n = 1; n <= 5; ++n) {
    for (int trial = 0; trial < 6; ++trial) {
      const SeriesMatrix a = random_matrix(params, n, 4, rng);
      const IwasawaSeries d = det(a);
      CHECK(std::vector<std::uint64_t>(d.coeffs().begin(), d.coeffs().end()) ==
            oracle::leibniz_det(raw(a), params.modulus(), 16));
    }
  }
}

TEST_CASE("determinant is multiplicative") {
  const RingParams params(3, 6, 32);
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const SeriesMatrix a = random_matrix(params, 3, 3, rng);
    const SeriesMatrix b = random_matrix(params, 3, 3, rng);
    CHECK(det(a * b) == det(a) * det(b));
  }
}

TEST_CASE("minor and product shapes") {
  const RingParams params(3, 6, 32);
  Rng rng(47);
  const SeriesMatrix a = random_matrix(params, 4, 2, rng);
  const SeriesMatrix m = a.minor({0, 2}, {1, 3});
  CHECK(m.rows() == 2);
  CHECK(m(1, 0) == a(2, 1));
  CHECK_THROWS_AS(SeriesMatrix(params, 2, 3) * SeriesMatrix(params, 2, 3), InvalidArgument);
  CHECK(a * SeriesMatrix::identity(params, 4) == a);
}

}  // TEST_SUITE
