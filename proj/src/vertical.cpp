#include "vertical.hpp"

#include <algorithm>

#include "fp.hpp"

namespace cz {

namespace {

PPoly curve_poly(const CurveSpec& c, const RingCtx& ctx) {
  PPoly f(ctx, c.F.size());
  for (std::size_t b = 0; b < c.F.size(); ++b) f[b] = ctx.from_int(static_cast<std::int64_t>(c.F[b]));
  return f;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

std::pair<PPoly, PPoly> bezout_RS(const CurveSpec& c, const RingCtx& ctx, int i) {
  if (i < 0 || i > c.d - 2) fail(Errc::InvalidArgument, "bezout_RS index out of range");
  const PPoly F = curve_poly(c, ctx);
  const PPoly dF = poly_derivative(F);
  auto [R0, S0] = poly_xgcd_lift(ctx, F, dF);
  PPoly A(ctx, i + 1);
  A[i] = ctx.one();
  // A S0 = T F + S, R = A R0 + T F'
  PPoly T(ctx, 0), S(ctx, 0);
  poly_divmod(A * S0, F, T, S);
  PPoly R = A * R0 + T * dF;
  R.resize(std::max(c.d - 1, 1));
  S.resize(c.d);
  PPoly check = R * F + S * dF - A;
  for (std::size_t k = 0; k < check.size(); ++k) {
    if (check[k].valuation() < ctx.W()) fail(Errc::Internal, "Bezout identity x^i = R F + S F' fails");
  }
  return {R, S};
}

Bezout bezout_all(const CurveSpec& c, const RingCtx& ctx) {
  Bezout bz;
  for (int i = 0; i <= c.d - 2; ++i) {
    auto [R, S] = bezout_RS(c, ctx, i);
    bz.R.push_back(std::move(R));
    bz.S.push_back(std::move(S));
  }
  return bz;
}

VStep v_step_matrix(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, int j, std::int64_t t) {
  const int n = c.d - 1;
  VStep st;
  st.j = j;
  st.t = t;
  st.D_int = static_cast<std::int64_t>(c.r) * t - c.r + j;
  st.D = ctx.from_int(st.D_int);
  st.M = PMat(ctx, n, n);
  const PElt r = ctx.from_int(c.r);
  for (int i = 0; i < n; ++i) {
    const PPoly dS = poly_derivative(bz.S[i]);
    for (int h = 0; h < n; ++h) st.M.at(h, i) = st.D * bz.R[i].coeff(h) + r * dS.coeff(h);
  }
  return st;
}

LinMat v_linmat(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, int j) {
  PMat m0 = v_step_matrix(c, ctx, bz, j, 0).M;
  PMat m1 = v_step_matrix(c, ctx, bz, j, 1).M;
  return LinMat{m0, m1 - m0};
}

LinMat v_denominator_linmat(const CurveSpec& c, const RingCtx& ctx, int j) {
  PMat m0(ctx, 1, 1), m1(ctx, 1, 1);
  m0.at(0, 0) = ctx.from_int(j - c.r);
  m1.at(0, 0) = ctx.from_int(c.r);
  return LinMat{m0, m1};
}

VPlan v_plan(const CurveSpec& c, int j) {
  VPlan pl;
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  pl.j = j;
  pl.alpha = p * j / c.r;
  pl.beta = static_cast<int>(p * j % c.r);
  pl.lambda = static_cast<int>(floor_div(pl.alpha - c.eps, p));
  pl.delta_loc = ((pl.alpha - c.eps) % p + p) % p + c.eps;
  if (pl.beta < 1 || pl.beta > c.r - 1) fail(Errc::Internal, "vertical target residue out of range");
  if (c.r * (p * pl.lambda + pl.delta_loc) + pl.beta != p * j) fail(Errc::Internal, "vertical level alignment fails");
  if (pl.lambda < 0 || pl.delta_loc < c.eps) fail(Errc::Internal, "vertical descent starts below its target");
  return pl;
}

std::uint64_t det_mod_p(const PMat& m) {
  const std::uint64_t p = m.ctx().p();
  const int n = m.rows();
  std::vector<std::vector<std::uint64_t>> a(n, std::vector<std::uint64_t>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = mpz_fdiv_ui(m.at(i, j).residue().get_mpz_t(), p);
  std::uint64_t det = 1;
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (a[r][col] != 0) { piv = r; break; }
    if (piv < 0) return 0;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = fp::submod(0, det, p);
    }
    det = fp::mulmod(det, a[col][col], p);
    const std::uint64_t inv = fp::invmod(a[col][col], p);
    for (int r = col + 1; r < n; ++r) {
      const std::uint64_t f = fp::mulmod(a[r][col], inv, p);
      if (f == 0) continue;
      for (int k = col; k < n; ++k) a[r][k] = fp::submod(a[r][k], fp::mulmod(f, a[col][k], p), p);
    }
  }
  return det;
}

std::vector<PMat> v_batch_matrices(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, const VPlan& plan,
                                   int N, LinStrategy strategy, std::vector<std::string>* notes) {
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  const int nb = plan.lambda + N - 1;
  IntervalSet I;
  I.emplace_back(c.eps, plan.delta_loc);
  for (int l = 1; l <= nb; ++l) I.emplace_back(plan.delta_loc + p * (l - 1), plan.delta_loc + p * l);
  const std::int64_t K = I.back().second;
  if (strategy == LinStrategy::Bsgs && !bsgs_applicable(I, K, c.p)) {
    if (notes) notes->push_back("vertical j=" + std::to_string(plan.j) + ": bsgs precondition fails, using naive products");
    strategy = LinStrategy::Naive;
  }
  std::vector<PMat> M = eval_intervals(v_linmat(c, ctx, bz, plan.beta), I, K, strategy);
  std::vector<PMat> D = eval_intervals(v_denominator_linmat(c, ctx, plan.beta), I, K, strategy);

  std::vector<PMat> out;
  const PElt d0 = D[0].at(0, 0);
  if (!d0.is_unit()) fail(Errc::IntegralityViolation, "vertical head interval has a p-divisible denominator");
  out.push_back(mat_scale(M[0], elt_inv(d0)));
  for (int l = 1; l <= nb; ++l) {
    const PElt& dl = D[l].at(0, 0);
    if (dl.val_upto(2) != 1) fail(Errc::IntegralityViolation, "vertical batch denominator does not have valuation 1");
    const std::int64_t t1 = I[l].first;
    if (det_mod_p(v_step_matrix(c, ctx, bz, plan.beta, t1 + 1).M) == 0) {
      fail(Errc::IntegralityViolation, "M_V is singular mod p at the p-divisible position");
    }
    const PMat& m = M[l];
    PMat y(ctx, m.rows(), m.cols());
    const PElt dinv = elt_inv(elt_div_p(dl, 1));
    for (int a = 0; a < m.rows(); ++a) {
      for (int b = 0; b < m.cols(); ++b) {
        if (m.at(a, b).val_upto(1) < 1) {
          fail(Errc::IntegralityViolation, "vertical batch matrix is not zero mod p");
        }
        y.at(a, b) = elt_div_p(m.at(a, b), 1) * dinv;
      }
    }
    out.push_back(std::move(y));
  }
  return out;
}

namespace {

std::vector<PElt> to_vvec(const CurveSpec& c, const WVec& w) {
  if (static_cast<int>(w.c.size()) != c.d || w.s != -1) fail(Errc::InvalidArgument, "vertical input must lie in W_{-1,t}");
  if (!w.c[0].is_zero()) fail(Errc::InvalidArgument, "vertical input has an x^-1 term");
  return std::vector<PElt>(w.c.begin() + 1, w.c.end());
}

void check_inputs(const CurveSpec& c, const VPlan& plan, const std::vector<WVec>& w, int N) {
  if (static_cast<int>(w.size()) != N) fail(Errc::InvalidArgument, "vertical reduction needs one vector per k < N");
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  for (int k = 0; k < N; ++k) {
    if (w[k].t != p * (static_cast<std::int64_t>(k) * c.r + plan.j)) fail(Errc::InvalidArgument, "vertical input at wrong pole order");
  }
}

VVec finish(const CurveSpec& c, const VPlan& plan, std::vector<PElt> v, int N) {
  for (const auto& e : v) {
    if (e.prec() < N) {
      fail(Errc::PrecisionExhausted, "vertical reduction lost precision (" + std::to_string(e.prec()) + " < " +
                                         std::to_string(N) + ")");
    }
  }
  VVec out;
  out.j = plan.beta;
  out.t = c.eps;
  out.c = std::move(v);
  return out;
}

}  // namespace

VVec v_reduce(const CurveSpec& c, const RingCtx& ctx, const VPlan& plan, const std::vector<PMat>& batches,
              const std::vector<WVec>& w, int N) {
  check_inputs(c, plan, w, N);
  const int top = N - 1 + plan.lambda;
  if (static_cast<int>(batches.size()) != top + 1) fail(Errc::InvalidArgument, "wrong number of vertical batches");
  (void)ctx;
  std::vector<PElt> v = to_vvec(c, w[N - 1]);
  for (int l = top; l >= 1; --l) {
    v = mat_vec(batches[l], v);
    if (l - 1 >= plan.lambda) {
      const std::vector<PElt> add = to_vvec(c, w[l - 1 - plan.lambda]);
      for (std::size_t h = 0; h < v.size(); ++h) v[h] += add[h];
    }
  }
  v = mat_vec(batches[0], v);
  return finish(c, plan, std::move(v), N);
}

VVec v_reduce_naive(const CurveSpec& c, const RingCtx& ctx, const Bezout& bz, const VPlan& plan,
                    const std::vector<WVec>& w, int N) {
  check_inputs(c, plan, w, N);
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  const int top = N - 1 + plan.lambda;
  const int W = ctx.W();
  std::vector<PElt> v = to_vvec(c, w[N - 1]);
  auto step = [&](std::int64_t t, bool divisible) {
    VStep st = v_step_matrix(c, ctx, bz, plan.beta, t);
    std::vector<PElt> num = mat_vec(st.M, v);
    if (!divisible) {
      if (st.D_int % p == 0) fail(Errc::UnexpectedZeroDenominator, "unexpected p-divisible vertical denominator");
      const PElt inv = elt_inv(st.D);
      for (auto& e : num) e *= inv;
    } else {
      if (st.D_int % p != 0 || (st.D_int / p) % p == 0) {
        fail(Errc::IntegralityViolation, "vertical denominator at the batch boundary does not have valuation 1");
      }
      const PElt inv = elt_inv(ctx.from_int(st.D_int / p));
      for (auto& e : num) e = elt_div_p(e, 1) * inv;
    }
    v = std::move(num);
  };
  std::int64_t level = plan.delta_loc + p * top;
  for (int l = top; l >= 1; --l) {
    int k0 = W;
    for (const auto& e : v) k0 = std::min(k0, e.prec());
    for (std::int64_t t = level; t > level - p; --t) step(t, t == level - p + 1);
    // The batch product is zero mod p, so the division above costs no
    // digits of the batch input.
    for (auto& e : v) e.assume_prec(std::max(e.prec(), std::min(k0, W - 1)));
    level -= p;
    if (l - 1 >= plan.lambda) {
      const std::vector<PElt> add = to_vvec(c, w[l - 1 - plan.lambda]);
      for (std::size_t h = 0; h < v.size(); ++h) v[h] += add[h];
    }
  }
  for (std::int64_t t = level; t > c.eps; --t) step(t, false);
  return finish(c, plan, std::move(v), N);
}

}  // namespace cz
