#include "iwasawa/ring.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace iwasawa {

namespace modarith {

Residue mul(Residue a, Residue b, Residue modulus) {
  return static_cast<Residue>(static_cast<unsigned __int128>(a) * b % modulus);
}

Residue pow(Residue base, std::uint64_t exp, Residue modulus) {
  Residue result = 1 % modulus;
  base %= modulus;
  while (exp > 0) {
    if (exp & 1U) result = mul(result, base, modulus);
    base = mul(base, base, modulus);
    exp >>= 1U;
  }
  return result;
}

Residue inverse(Residue a, Residue modulus) {
  __int128 old_r = static_cast<__int128>(a % modulus), r = static_cast<__int128>(modulus);
  __int128 old_s = 1, s = 0;
  while (r != 0) {
    const __int128 q = old_r / r;
    std::swap(old_r, r);
    r -= q * old_r;
    std::swap(old_s, s);
    s -= q * old_s;
  }
  if (old_r != 1) throw InvalidArgument("inverse: value is not a unit");
  __int128 m = static_cast<__int128>(modulus);
  return static_cast<Residue>(((old_s % m) + m) % m);
}

Residue reduce(std::int64_t value, Residue modulus) {
  const __int128 m = static_cast<__int128>(modulus);
  __int128 v = static_cast<__int128>(value) % m;
  if (v < 0) v += m;
  return static_cast<Residue>(v);
}

std::int64_t centered(Residue value, Residue modulus) {
  value %= modulus;
  if (value > modulus / 2) return -static_cast<std::int64_t>(modulus - value);
  return static_cast<std::int64_t>(value);
}

}  // namespace modarith

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

RingParams::RingParams(std::uint32_t p, int precision_p, int precision_x)
    : RingParams(p, precision_p, precision_x, static_cast<std::int64_t>(p) + 1) {}

RingParams::RingParams(std::uint32_t p, int precision_p, int precision_x, std::int64_t u0)
    : p_(p), precision_p_(precision_p), precision_x_(precision_x), modulus_(1), u0_(0) {
  if (p < 3 || !is_prime(p)) throw InvalidArgument("p must be an odd prime");
  if (precision_p < 1) throw InvalidArgument("N must be at least 1");
  if (precision_x < 2) throw InvalidArgument("M must be at least 2");
  for (int i = 0; i < precision_p; ++i) {
    if (modulus_ > (Residue{1} << 62) / p) throw InvalidArgument("p^N exceeds 2^62");
    modulus_ *= p;
  }
  u0_ = modarith::reduce(u0, modulus_);
  if (u0_ % p != 1 % p) throw InvalidArgument("u0 must be congruent to 1 mod p");
}

int RingParams::valuation(Residue value) const {
  value %= modulus_;
  if (value == 0) return precision_p_;
  int v = 0;
  while (value % p_ == 0) {
    value /= p_;
    ++v;
  }
  return v;
}

RingParams RingParams::with_u0(std::int64_t u0) const {
  return RingParams(p_, precision_p_, precision_x_, u0);
}

std::string RingParams::describe() const {
  std::ostringstream out;
  out << "p=" << p_ << " N=" << precision_p_ << " M=" << precision_x_ << " u0=" << u0_;
  return out.str();
}

IwasawaSeries::IwasawaSeries(const RingParams& params)
    : params_(params), coeffs_(static_cast<std::size_t>(params.precision_x()), 0) {}

IwasawaSeries::IwasawaSeries(const RingParams& params, std::vector<Residue> coeffs)
    : params_(params), coeffs_(std::move(coeffs)) {}

IwasawaSeries::IwasawaSeries(const RingParams& params, std::span<const std::int64_t> coeffs)
    : IwasawaSeries(params) {
  const std::size_t n = std::min(coeffs.size(), coeffs_.size());
  for (std::size_t i = 0; i < n; ++i) coeffs_[i] = modarith::reduce(coeffs[i], params_.modulus());
}

IwasawaSeries::IwasawaSeries(const RingParams& params, std::initializer_list<std::int64_t> coeffs)
    : IwasawaSeries(params, std::span<const std::int64_t>(coeffs.begin(), coeffs.size())) {}

IwasawaSeries IwasawaSeries::from_residues(const RingParams& params, std::vector<Residue> coeffs) {
  coeffs.resize(static_cast<std::size_t>(params.precision_x()), 0);
  for (auto& c : coeffs) c %= params.modulus();
  return IwasawaSeries(params, std::move(coeffs));
}

IwasawaSeries IwasawaSeries::constant(const RingParams& params, std::int64_t c) {
  IwasawaSeries s(params);
  s.coeffs_[0] = modarith::reduce(c, params.modulus());
  return s;
}

IwasawaSeries IwasawaSeries::monomial(const RingParams& params, int degree, std::int64_t c) {
  IwasawaSeries s(params);
  if (degree < 0) throw InvalidArgument("monomial: negative degree");
  if (degree < params.precision_x()) {
    s.coeffs_[static_cast<std::size_t>(degree)] = modarith::reduce(c, params.modulus());
  }
  return s;
}

bool IwasawaSeries::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](Residue c) { return c == 0; });
}

int IwasawaSeries::degree() const {
  for (int i = static_cast<int>(coeffs_.size()) - 1; i >= 0; --i) {
    if (coeffs_[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

bool IwasawaSeries::is_zero_mod_p() const {
  const auto p = params_.prime();
  return std::all_of(coeffs_.begin(), coeffs_.end(), [p](Residue c) { return c % p == 0; });
}

bool IwasawaSeries::is_unit() const { return coeffs_[0] % params_.prime() != 0; }

IwasawaSeries IwasawaSeries::operator-() const {
  IwasawaSeries out(*this);
  const Residue q = params_.modulus();
  for (auto& c : out.coeffs_) c = c == 0 ? 0 : q - c;
  return out;
}

static void require_same(const RingParams& a, const RingParams& b) {
  if (!(a == b)) throw ParamMismatch("ring parameters differ: " + a.describe() + " vs " + b.describe());
}

IwasawaSeries& IwasawaSeries::operator+=(const IwasawaSeries& rhs) {
  require_same(params_, rhs.params_);
  const Residue q = params_.modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    Residue s = coeffs_[i] + rhs.coeffs_[i];
    coeffs_[i] = s >= q ? s - q : s;
  }
  return *this;
}

IwasawaSeries& IwasawaSeries::operator-=(const IwasawaSeries& rhs) {
  require_same(params_, rhs.params_);
  const Residue q = params_.modulus();
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    coeffs_[i] = coeffs_[i] >= rhs.coeffs_[i] ? coeffs_[i] - rhs.coeffs_[i] : coeffs_[i] + q - rhs.coeffs_[i];
  }
  return *this;
}

IwasawaSeries operator*(const IwasawaSeries& a, const IwasawaSeries& b) {
  require_same(a.params_, b.params_);
  const Residue q = a.params_.modulus();
  const std::size_t m = a.coeffs_.size();
  const int da = a.degree();
  const int db = b.degree();
  std::vector<Residue> out(m, 0);
  if (da < 0 || db < 0) return IwasawaSeries(a.params_, std::move(out));
  for (std::size_t i = 0; i <= static_cast<std::size_t>(da); ++i) {
    const Residue ai = a.coeffs_[i];
    if (ai == 0) continue;
    const std::size_t top = std::min(m - i, static_cast<std::size_t>(db) + 1);
    for (std::size_t j = 0; j < top; ++j) {
      if (b.coeffs_[j] == 0) continue;
      Residue s = out[i + j] + modarith::mul(ai, b.coeffs_[j], q);
      out[i + j] = s >= q ? s - q : s;
    }
  }
  return IwasawaSeries(a.params_, std::move(out));
}

IwasawaSeries& IwasawaSeries::operator*=(const IwasawaSeries& rhs) { return *this = *this * rhs; }

IwasawaSeries IwasawaSeries::scaled(std::int64_t c) const {
  return scaled_residue(modarith::reduce(c, params_.modulus()));
}

IwasawaSeries IwasawaSeries::scaled_residue(Residue c) const {
  IwasawaSeries out(*this);
  for (auto& v : out.coeffs_) v = modarith::mul(v, c, params_.modulus());
  return out;
}

std::string IwasawaSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const std::int64_t c = modarith::centered(coeffs_[i], params_.modulus());
    if (c == 0) continue;
    if (!first) out << (c < 0 ? " - " : " + ");
    else if (c < 0) out << "-";
    const std::int64_t a = c < 0 ? -c : c;
    if (i == 0 || a != 1) out << a;
    if (i >= 1) out << "X";
    if (i >= 2) out << "^" << i;
    first = false;
  }
  return first ? "0" : out.str();
}

IwasawaSeries ring_arith(const IwasawaSeries& a, const IwasawaSeries& b, RingOp op) {
  switch (op) {
    case RingOp::add: return a + b;
    case RingOp::sub: return a - b;
    case RingOp::mul: return a * b;
  }
  throw InvalidArgument("ring_arith: unknown op");
}

IwasawaSeries omega(const RingParams& params, int n) {
  if (n < 0) throw InvalidArgument("omega: negative level");
  std::uint64_t pn = 1;
  for (int i = 0; i < n; ++i) {
    pn *= params.prime();
    if (pn >= static_cast<std::uint64_t>(params.precision_x())) {
      throw PrecisionExhausted("omega: p^n must be below the X-adic precision M");
    }
  }
  // (1+X)^{p^n} by repeated p-th powers; nothing is truncated since p^n < M.
  IwasawaSeries power(params, {1, 1});
  for (int i = 0; i < n; ++i) {
    IwasawaSeries acc = IwasawaSeries::one(params);
    for (std::uint32_t k = 0; k < params.prime(); ++k) acc *= power;
    power = acc;
  }
  return power - IwasawaSeries::one(params);
}

SeriesInvariants series_invariants(const IwasawaSeries& f) {
  const RingParams& params = f.params();
  if (f.is_zero()) throw PrecisionExhausted("series is zero modulo (p^N, X^M)");
  int mu = params.precision_p();
  for (Residue c : f.coeffs()) mu = std::min(mu, params.valuation(c));
  for (int j = 0; j < f.length(); ++j) {
    if (params.valuation(f[static_cast<std::size_t>(j)]) == mu) return {mu, j};
  }
  throw PrecisionExhausted("no unit coefficient below X^M");
}

bool is_distinguished(const IwasawaSeries& f) {
  const int d = f.degree();
  if (d < 0 || f[static_cast<std::size_t>(d)] != 1) return false;
  const auto p = f.params().prime();
  for (int j = 0; j < d; ++j) {
    if (f[static_cast<std::size_t>(j)] % p != 0) return false;
  }
  return true;
}

IwasawaSeries twist_substitute(const IwasawaSeries& f, std::int64_t i) {
  const RingParams& params = f.params();
  const Residue q = params.modulus();
  const Residue u = i >= 0 ? modarith::pow(params.u0(), static_cast<std::uint64_t>(i), q)
                           : modarith::pow(modarith::inverse(params.u0(), q),
                                           static_cast<std::uint64_t>(-(i + 1)) + 1, q);
  // X -> (u - 1) + u X, evaluated by Horner's rule.
  const IwasawaSeries linear = IwasawaSeries::from_residues(params, {(u + q - 1) % q, u});
  const int d = f.degree();
  if (d < 0) return f;
  IwasawaSeries acc = IwasawaSeries::from_residues(params, {f[static_cast<std::size_t>(d)]});
  for (int k = d - 1; k >= 0; --k) {
    acc = acc * linear + IwasawaSeries::from_residues(params, {f[static_cast<std::size_t>(k)]});
  }
  return acc;
}

std::vector<std::uint32_t> reduce_mod_p(const IwasawaSeries& f) {
  std::vector<std::uint32_t> out;
  out.reserve(f.coeffs().size());
  for (Residue c : f.coeffs()) out.push_back(static_cast<std::uint32_t>(c % f.params().prime()));
  return out;
}

}  // namespace iwasawa
