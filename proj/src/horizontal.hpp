#pragma once

// Horizontal reduction: lowering the x-degree of G(x) x^s y^-t dx at fixed t.

#include <cstdint>
#include <string>
#include <vector>

#include "curve.hpp"
#include "frob_expand.hpp"
#include "linrec.hpp"
#include "padic.hpp"

namespace cz {

// G(x) x^s y^-t dx with c[h] the coefficient of x^(s+h), h = 0..d-1.
struct WVec {
  std::int64_t s = 0;
  std::int64_t t = 0;
  std::vector<PElt> c;
};

// D_H(s) v' = M_H(s) v: subdiagonal D, last column C.
struct HStep {
  std::int64_t t = 0;
  std::int64_t s = 0;
  __int128 D_int = 0;  // d(t - r) - r s, so that D = D_int * f_d
  PElt D;
  std::vector<PElt> C;
};

HStep h_step_matrix(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, std::int64_t s);

// Maps v in W_{s,t} to the cohomologous vector in W_{s-1,t}.
WVec h_reduce_one(const CurveSpec& c, const RingCtx& ctx, const WVec& v);

// M_H(s) and D_H(s) as linear functions of s.
LinMat h_linmat(const CurveSpec& c, const RingCtx& ctx, std::int64_t t);
LinMat h_denominator_linmat(const CurveSpec& c, const RingCtx& ctx, std::int64_t t);

// Interval data indexed by l: M(l) = M_H(pl, p(l+1)-d-1), D(l) likewise.
struct HIntervals {
  std::vector<PElt> D;
  std::vector<PMat> M;
  std::size_t size() const { return M.size(); }
};

// Direct computation for l = 0..L.
HIntervals h_interval_matrices(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, int L, LinStrategy strategy,
                               std::vector<std::string>* notes = nullptr);

// Extends known (l = 0..known.size()-1) to l = 0..lmax by interpolation in l;
// the interpolated entries carry precision N.
HIntervals h_interpolate(const RingCtx& ctx, const HIntervals& known, int lmax, int N);

// All intervals a strip at pole order t needs (l = 0..lmax), combining direct
// computation, interpolation and a self-check of one extra direct sample.
HIntervals h_strip_intervals(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, int lmax, int N,
                             LinStrategy strategy, bool interpolate, std::vector<std::string>* notes = nullptr);

// A term coeff * x^e y^-t dx. Exponents must lie in a zone
// [pl - d - 1, pl - 1] for some l >= 1, and the coefficient of x^(pl-1)
// must be divisible by p.
struct ZoneTerm {
  std::int64_t e = 0;
  PElt coeff;
};

// Reduces each term list to W_{-1,t}. intervals == nullptr selects
// step-by-step reduction.
std::vector<WVec> h_reduce_zones(const CurveSpec& c, const RingCtx& ctx, std::int64_t t,
                                 const std::vector<std::vector<ZoneTerm>>& terms, const HIntervals* intervals, int N);

// Zone terms of the Frobenius image of x^i dx / y^j at y-pole order p(kr + j).
std::vector<ZoneTerm> frob_zone_terms(const CurveSpec& c, const FrobTerms& terms, int k);

WVec h_reduce_full(const CurveSpec& c, const RingCtx& ctx, int i, int j, int k, const FrobTerms& terms,
                   const HIntervals* intervals, int N);

}  // namespace cz
