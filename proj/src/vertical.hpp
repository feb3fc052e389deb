#pragma once

// Vertical reduction: lowering the y-pole order of x^i y^-(rt+j) dx, i < d-1.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "curve.hpp"
#include "horizontal.hpp"
#include "linrec.hpp"
#include "padic.hpp"

namespace cz {

// sum_i c[i] x^i y^-(r t + j) dx
struct VVec {
  int j = 0;
  std::int64_t t = 0;
  std::vector<PElt> c;
};

// x^i = R_i F + S_i F' for i = 0..d-2.
struct Bezout {
  std::vector<PPoly> R, S;
};

std::pair<PPoly, PPoly> bezout_RS(const CurveSpec& c, const RingCtx& ctx, int i);
Bezout bezout_all(const CurveSpec& c, const RingCtx& ctx);

// D_V(t) v' = M_V(t) v, mapping V_t^j to V_{t-1}^j.
struct VStep {
  int j = 0;
  std::int64_t t = 0;
  std::int64_t D_int = 0;  // r t - r + j
  PElt D;
  PMat M;
};

VStep v_step_matrix(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, int j, std::int64_t t);
LinMat v_linmat(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, int j);
LinMat v_denominator_linmat(const CurveSpec& c, const RingCtx& ctx, int j);

// Where the horizontal outputs of column j land: w_k sits at
// V^beta_{p(k+lambda)+delta_loc}.
struct VPlan {
  int j = 0;
  std::int64_t alpha = 0;
  int beta = 0;
  int lambda = 0;
  std::int64_t delta_loc = 0;
};

VPlan v_plan(const CurveSpec& c, int j);

// M[0] covers (eps, delta_loc); M[l] for l >= 1 covers
// (delta_loc + p(l-1), delta_loc + pl), already divided by its denominator.
std::vector<PMat> v_batch_matrices(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, const VPlan& plan,
                                   int N, LinStrategy strategy, std::vector<std::string>* notes = nullptr);

// w[k] in W_{-1, p(kr + j)} for k = 0..N-1; result at V^beta_eps.
VVec v_reduce(const CurveSpec& c, const RingCtx& ctx, const VPlan& plan, const std::vector<PMat>& batches,
              const std::vector<WVec>& w, int N);

// Same result by single steps, for the low-memory strategy.
VVec v_reduce_naive(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, const VPlan& plan,
                    const std::vector<WVec>& w, int N);

// Determinant of a square matrix reduced mod p.
std::uint64_t det_mod_p(const PMat& m);

}  // namespace cz
