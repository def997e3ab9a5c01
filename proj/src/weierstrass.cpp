#include "iwasawa/weierstrass.hpp"

namespace iwasawa {

namespace {

// (f - (f mod X^d)) / X^d.
IwasawaSeries high_part(const IwasawaSeries& f, int d) {
  std::vector<Residue> c(f.coeffs().begin() + d, f.coeffs().end());
  return IwasawaSeries::from_residues(f.params(), std::move(c));
}

}  // namespace

IwasawaSeries WeierstrassData::recompose() const {
  const RingParams& params = unit.params();
  const Residue scale = modarith::pow(params.prime(), static_cast<std::uint64_t>(mu), params.modulus());
  return (unit * distinguished).scaled_residue(scale);
}

IwasawaSeries unit_inverse(const IwasawaSeries& u) {
  const RingParams& params = u.params();
  if (!u.is_unit()) throw InvalidArgument("unit_inverse: constant term divisible by p");
  const Residue q = params.modulus();
  const Residue c0_inv = modarith::inverse(u[0], q);
  const std::size_t m = static_cast<std::size_t>(params.precision_x());
  std::vector<Residue> v(m, 0);
  v[0] = c0_inv;
  for (std::size_t k = 1; k < m; ++k) {
    Residue acc = 0;
    for (std::size_t j = 1; j <= k; ++j) {
      acc = (acc + modarith::mul(u[j], v[k - j], q)) % q;
    }
    v[k] = modarith::mul((q - acc) % q, c0_inv, q);
  }
  return IwasawaSeries::from_residues(params, std::move(v));
}

WeierstrassDivision weierstrass_divide(const IwasawaSeries& f, const IwasawaSeries& g) {
  if (!(f.params() == g.params())) throw ParamMismatch("weierstrass_divide: ring parameters differ");
  const RingParams& params = g.params();
  const SeriesInvariants inv = series_invariants(g);
  if (inv.mu > 0) throw NotDivisible("weierstrass_divide: divisor has positive mu");
  const int d = inv.lambda;
  if (d >= params.precision_x()) throw PrecisionExhausted("weierstrass_divide: lambda(g) >= M");

  // g = B + X^d C with B = 0 mod p and C a unit. Each pass moves the part of the
  // residual at X^d and above into the quotient; what remains above X^d gains a
  // factor of p, so N passes suffice.
  const IwasawaSeries c_inv = unit_inverse(high_part(g, d));
  IwasawaSeries quotient(params);
  IwasawaSeries residual = f;
  for (int pass = 0; pass <= params.precision_p(); ++pass) {
    const IwasawaSeries top = high_part(residual, d);
    if (top.is_zero()) return {quotient, residual};
    const IwasawaSeries step = top * c_inv;
    quotient += step;
    residual -= step * g;
  }
  throw PrecisionExhausted("weierstrass_divide: residual did not vanish");
}

WeierstrassData weierstrass_prepare(const IwasawaSeries& f) {
  const RingParams& params = f.params();
  const SeriesInvariants inv = series_invariants(f);
  Residue scale = 1;
  for (int i = 0; i < inv.mu; ++i) scale *= params.prime();
  std::vector<Residue> stripped(f.coeffs().begin(), f.coeffs().end());
  for (auto& c : stripped) c /= scale;
  const IwasawaSeries primitive = IwasawaSeries::from_residues(params, std::move(stripped));

  // X^d = q * primitive + r, so primitive = q^{-1} (X^d - r).
  const IwasawaSeries xd = IwasawaSeries::monomial(params, inv.lambda, 1);
  const WeierstrassDivision div = weierstrass_divide(xd, primitive);
  IwasawaSeries distinguished = xd - div.remainder;
  IwasawaSeries unit = unit_inverse(div.quotient);
  return {inv.mu, std::move(distinguished), std::move(unit), inv.lambda};
}

}  // namespace iwasawa
