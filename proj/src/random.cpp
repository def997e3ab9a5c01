#include "iwasawa/random.hpp"

namespace iwasawa {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x51ed2701ULL));
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below: empty range");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

std::int64_t Rng::uniform(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgument("Rng::uniform: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

IwasawaSeries random_polynomial(const RingParams& params, int max_degree, Rng& rng) {
  std::vector<Residue> c(static_cast<std::size_t>(std::min(max_degree + 1, params.precision_x())));
  for (auto& v : c) v = rng.below(params.modulus());
  return IwasawaSeries::from_residues(params, std::move(c));
}

IwasawaSeries random_nonzero_series(const RingParams& params, Rng& rng) {
  while (true) {
    IwasawaSeries f = random_polynomial(params, params.precision_x() - 1, rng);
    const int mu = static_cast<int>(rng.below(static_cast<std::uint64_t>(params.precision_p())));
    const Residue scale = modarith::pow(params.prime(), static_cast<std::uint64_t>(mu), params.modulus());
    f = f.scaled_residue(scale);
    if (!f.is_zero()) return f;
  }
}

IwasawaSeries random_distinguished(const RingParams& params, int degree, Rng& rng) {
  if (degree < 0 || degree >= params.precision_x()) throw InvalidArgument("random_distinguished: bad degree");
  std::vector<Residue> c(static_cast<std::size_t>(degree) + 1);
  const Residue reduced = params.modulus() / params.prime();
  for (int j = 0; j < degree; ++j) c[static_cast<std::size_t>(j)] = rng.below(reduced) * params.prime();
  c[static_cast<std::size_t>(degree)] = 1;
  return IwasawaSeries::from_residues(params, std::move(c));
}

IwasawaSeries random_unit_polynomial(const RingParams& params, int max_degree, Rng& rng) {
  IwasawaSeries f = random_polynomial(params, max_degree, rng);
  std::vector<Residue> c(f.coeffs().begin(), f.coeffs().end());
  const Residue p = params.prime();
  c[0] = c[0] - c[0] % p + 1 + rng.below(p - 1);
  return IwasawaSeries::from_residues(params, std::move(c));
}

}  // namespace iwasawa
