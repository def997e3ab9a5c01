#pragma once

#include "iwasawa/ring.hpp"

namespace iwasawa {

/// f = p^mu * unit * distinguished at working precision.
struct WeierstrassData {
  int mu = 0;
  IwasawaSeries distinguished;
  IwasawaSeries unit;
  int degree = 0;

  IwasawaSeries recompose() const;
};

struct WeierstrassDivision {
  IwasawaSeries quotient;
  IwasawaSeries remainder;  ///< degree below lambda(g)
};

/// Inverse of a unit power series (constant term prime to p).
IwasawaSeries unit_inverse(const IwasawaSeries& u);

/// f = q g + r with deg r < lambda(g). Requires mu(g) == 0.
WeierstrassDivision weierstrass_divide(const IwasawaSeries& f, const IwasawaSeries& g);

WeierstrassData weierstrass_prepare(const IwasawaSeries& f);

}  // namespace iwasawa
