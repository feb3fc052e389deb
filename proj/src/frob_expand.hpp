#pragma once

// Truncated Frobenius image of the basis differential x^i dx / y^j:
//   p x^{p(i+1)-1} y^{-jp} sum_{l<N} sum_b D_{j,l} (F^l)_b x^{pb} y^{-plr} dx.

#include <vector>

#include "curve.hpp"
#include "padic.hpp"

namespace cz {

// binom(-j/r, k) in Z/p^W; k < p.
PElt binom_frac(int j, int r, int k, const RingCtx& ctx);

// sum_{k=l}^{N-1} (-1)^{k-l} binom(-j/r, k) binom(k, l)
PElt compute_D(int j, int ell, int N, int r, const RingCtx& ctx);

// F^l for l = 0..N-1 with exact integer coefficients.
std::vector<PPoly> frob_powers(const CurveSpec& c, const RingCtx& ctx, int N);

struct FrobTerms {
  int i = 0;
  int j = 0;
  // mu[l][b] = p D_{j,l} (F^l)_b, multiplying x^{p(i+1+b)-1} y^{-p(j+lr)} dx
  std::vector<std::vector<PElt>> mu;
};

FrobTerms frob_terms(const CurveSpec& c, const RingCtx& ctx, int i, int j, int N,
                     const std::vector<PPoly>* powers = nullptr);

}  // namespace cz
