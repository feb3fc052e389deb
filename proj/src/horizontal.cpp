#include "horizontal.hpp"

#include <algorithm>
#include <map>

namespace cz {

namespace {

PElt from_i128(const RingCtx& ctx, __int128 v) {
  if (v >= INT64_MIN && v <= INT64_MAX) return ctx.from_int(static_cast<std::int64_t>(v));
  const bool neg = v < 0;
  unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  mpz_class z = static_cast<unsigned long>(u >> 64);
  z <<= 64;
  z += static_cast<unsigned long>(u & ~std::uint64_t(0));
  if (neg) z = -z;
  return ctx.from_mpz(z);
}

int val_p(__int128 v, std::uint64_t p) {
  if (v == 0) return 1 << 20;
  int k = 0;
  while (v % static_cast<__int128>(p) == 0) {
    v /= static_cast<__int128>(p);
    ++k;
  }
  return k;
}

struct Lifted {
  PElt fd;
  std::vector<PElt> P;  // F minus its leading term, size d
};

Lifted lift_curve(const CurveSpec& c, const RingCtx& ctx) {
  Lifted l;
  l.fd = ctx.from_int(static_cast<std::int64_t>(c.fd));
  for (int h = 0; h < c.d; ++h) l.P.push_back(ctx.from_int(static_cast<std::int64_t>(c.F[h])));
  return l;
}

HStep make_step(const CurveSpec& c, const RingCtx& ctx, const Lifted& l, std::int64_t t, std::int64_t s) {
  HStep st;
  st.t = t;
  st.s = s;
  const __int128 d = c.d, r = c.r;
  st.D_int = d * (t - r) - r * static_cast<__int128>(s);
  st.D = from_i128(ctx, st.D_int) * l.fd;
  st.C.reserve(c.d);
  for (int h = 0; h < c.d; ++h) st.C.push_back(from_i128(ctx, r * s - static_cast<__int128>(t - r) * h) * l.P[h]);
  return st;
}

// Applies one step to several vectors sharing (s, t).
class StepApplier {
 public:
  StepApplier(const CurveSpec& c, const RingCtx& ctx, const HStep& st) : c_(c), st_(st) {
    const std::uint64_t p = c.p;
    if (st.D_int == 0) fail(Errc::UnexpectedZeroDenominator, "D_H vanishes at s = " + std::to_string(st.s));
    const int v = val_p(st.D_int, p);
    if (v == 0) {
      unit_ = true;
      dinv_ = elt_inv(st.D);
      return;
    }
    const std::int64_t pm = static_cast<std::int64_t>(p);
    if (((st.s + c.d) % pm + pm) % pm != 0) {
      fail(Errc::UnexpectedZeroDenominator, "p divides D_H at s = " + std::to_string(st.s) + " with s != -d mod p");
    }
    if (v >= 2) fail(Errc::IntegralityViolation, "p^2 divides D_H at s = " + std::to_string(st.s));
    unit_ = false;
    dinv_ = elt_inv(from_i128(ctx, st.D_int / static_cast<__int128>(p)) * ctx.from_int(static_cast<std::int64_t>(c.fd)));
  }

  void apply(std::vector<PElt>& v) const {
    const int d = c_.d;
    std::vector<PElt> out(d);
    if (unit_) {
      const PElt u = v[d - 1] * dinv_;
      out[0] = st_.C[0] * u;
      for (int h = 0; h + 1 < d; ++h) out[h + 1] = v[h] + st_.C[h + 1] * u;
    } else {
      out[0] = elt_div_p(st_.C[0] * v[d - 1], 1) * dinv_;
      for (int h = 0; h + 1 < d; ++h) out[h + 1] = elt_div_p(st_.D * v[h] + st_.C[h + 1] * v[d - 1], 1) * dinv_;
    }
    v = std::move(out);
  }

 private:
  const CurveSpec& c_;
  const HStep& st_;
  bool unit_ = true;
  PElt dinv_;
};

}  // namespace

HStep h_step_matrix(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, std::int64_t s) {
  return make_step(c, ctx, lift_curve(c, ctx), t, s);
}

WVec h_reduce_one(const CurveSpec& c, const RingCtx& ctx, const WVec& v) {
  if (static_cast<int>(v.c.size()) != c.d) fail(Errc::InvalidArgument, "WVec must have d coefficients");
  HStep st = h_step_matrix(c, ctx, v.t, v.s);
  StepApplier ap(c, ctx, st);
  WVec out = v;
  ap.apply(out.c);
  out.s = v.s - 1;
  return out;
}

namespace {

PMat dense_step(const CurveSpec& c, const RingCtx& ctx, const HStep& st) {
  PMat m(ctx, c.d, c.d);
  for (int h = 0; h + 1 < c.d; ++h) m.at(h + 1, h) = st.D;
  for (int h = 0; h < c.d; ++h) m.at(h, c.d - 1) += st.C[h];
  return m;
}

}  // namespace

LinMat h_linmat(const CurveSpec& c, const RingCtx& ctx, std::int64_t t) {
  const Lifted l = lift_curve(c, ctx);
  PMat m0 = dense_step(c, ctx, make_step(c, ctx, l, t, 0));
  PMat m1 = dense_step(c, ctx, make_step(c, ctx, l, t, 1));
  return LinMat{m0, m1 - m0};
}

LinMat h_denominator_linmat(const CurveSpec& c, const RingCtx& ctx, std::int64_t t) {
  const Lifted l = lift_curve(c, ctx);
  PMat m0(ctx, 1, 1), m1(ctx, 1, 1);
  m0.at(0, 0) = make_step(c, ctx, l, t, 0).D;
  m1.at(0, 0) = make_step(c, ctx, l, t, 1).D - m0.at(0, 0);
  return LinMat{m0, m1};
}

HIntervals h_interval_matrices(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, int L, LinStrategy strategy,
                               std::vector<std::string>* notes) {
  HIntervals out;
  if (L < 0) return out;
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  IntervalSet I;
  for (std::int64_t l = 0; l <= L; ++l) I.emplace_back(p * l, p * (l + 1) - c.d - 1);
  const std::int64_t K = I.back().second;
  if (strategy == LinStrategy::Bsgs && !bsgs_applicable(I, K, c.p)) {
    if (notes) notes->push_back("horizontal t=" + std::to_string(t) + ": bsgs precondition fails, using naive products");
    strategy = LinStrategy::Naive;
  }
  out.M = eval_intervals(h_linmat(c, ctx, t), I, K, strategy);
  std::vector<PMat> D = eval_intervals(h_denominator_linmat(c, ctx, t), I, K, strategy);
  for (auto& m : D) out.D.push_back(m.at(0, 0));
  return out;
}

HIntervals h_interpolate(const RingCtx& ctx, const HIntervals& known, int lmax, int N) {
  HIntervals out;
  const int n = static_cast<int>(known.size());
  if (n == 0) fail(Errc::InvalidArgument, "interpolation needs at least one sample");
  std::vector<PElt> nodes;
  std::vector<PMat> dvals;
  for (int l = 0; l < n; ++l) {
    nodes.push_back(ctx.from_int(l));
    PMat dm(ctx, 1, 1);
    dm.at(0, 0) = known.D[l];
    dvals.push_back(dm);
  }
  const std::vector<PMat> qm = vandermonde_solve(nodes, known.M);
  const std::vector<PMat> qd = vandermonde_solve(nodes, dvals);
  for (int l = 0; l <= lmax; ++l) {
    if (l < n) {
      out.M.push_back(known.M[l]);
      out.D.push_back(known.D[l]);
      continue;
    }
    const PElt x = ctx.from_int(l);
    PMat m = matpoly_eval(qm, x);
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) m.at(i, j) = m.at(i, j).with_prec(N);
    out.M.push_back(std::move(m));
    out.D.push_back(matpoly_eval(qd, x).at(0, 0).with_prec(N));
  }
  return out;
}

HIntervals h_strip_intervals(const CurveSpec& c, const RingCtx& ctx, std::int64_t t, int lmax, int N,
                             LinStrategy strategy, bool interpolate, std::vector<std::string>* notes) {
  const int L = std::min(N - 1, lmax);
  if (!interpolate || L == lmax) return h_interval_matrices(c, ctx, t, lmax, strategy, notes);
  // one sample beyond L validates the interpolation
  HIntervals direct = h_interval_matrices(c, ctx, t, L + 1, strategy, notes);
  HIntervals known;
  known.M.assign(direct.M.begin(), direct.M.begin() + L + 1);
  known.D.assign(direct.D.begin(), direct.D.begin() + L + 1);
  HIntervals all = h_interpolate(ctx, known, lmax, N);
  const bool ok = mat_equal_mod(all.M[L + 1], direct.M[L + 1], N) && all.D[L + 1].equals_mod(direct.D[L + 1], N);
  if (!ok) {
    if (notes) notes->push_back("horizontal t=" + std::to_string(t) + ": interpolation self-check failed, computing directly");
    return h_interval_matrices(c, ctx, t, lmax, strategy, notes);
  }
  all.M[L + 1] = direct.M[L + 1];
  all.D[L + 1] = direct.D[L + 1];
  return all;
}

std::vector<WVec> h_reduce_zones(const CurveSpec& c, const RingCtx& ctx, std::int64_t t,
                                 const std::vector<std::vector<ZoneTerm>>& terms, const HIntervals* intervals, int N) {
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  const int d = c.d;
  const std::size_t nv = terms.size();

  std::vector<std::map<std::int64_t, PElt>> inj(nv);
  std::int64_t ltop = 0;
  for (std::size_t k = 0; k < nv; ++k) {
    for (const auto& z : terms[k]) {
      const std::int64_t l = (z.e + 1 + p - 1) / p;
      if (z.e < 0 || l < 1 || p * l - (z.e + 1) > d) {
        fail(Errc::InvalidArgument, "term exponent " + std::to_string(z.e) + " is outside every injection zone");
      }
      auto it = inj[k].find(z.e);
      if (it == inj[k].end()) inj[k].emplace(z.e, z.coeff);
      else it->second += z.coeff;
      ltop = std::max(ltop, l);
    }
  }

  std::vector<std::vector<PElt>> v(nv, std::vector<PElt>(d, ctx.zero()));
  const Lifted lifted = lift_curve(c, ctx);
  auto step_all = [&](std::int64_t s) {
    HStep st = make_step(c, ctx, lifted, t, s);
    StepApplier ap(c, ctx, st);
    for (auto& x : v) ap.apply(x);
  };
  auto inject = [&](std::int64_t s) {
    for (std::size_t k = 0; k < nv; ++k) {
      auto it = inj[k].find(s);
      if (it != inj[k].end()) v[k][0] += it->second;
    }
  };

  for (std::int64_t l = ltop; l >= 1; --l) {
    if (l < ltop) {
      for (const auto& x : v) {
        if (x[0].prec() >= 1 && x[0].val_upto(1) < 1) {
          fail(Errc::IntegralityViolation, "reduction vector is not 1-correct at s = " + std::to_string(p * l - 1));
        }
      }
    }
    for (int q = 0; q <= d; ++q) {
      const std::int64_t s = p * l - 1 - q;
      inject(s);
      if (q < d) step_all(s);
    }
    if (intervals != nullptr) {
      const std::size_t li = static_cast<std::size_t>(l - 1);
      if (li >= intervals->size()) fail(Errc::Internal, "missing interval matrix");
      const PElt dinv = elt_inv(intervals->D[li]);
      for (auto& x : v) {
        std::vector<PElt> y = mat_vec(intervals->M[li], x);
        for (auto& e : y) e *= dinv;
        x = std::move(y);
      }
    } else {
      for (std::int64_t s = p * l - d - 1; s > p * (l - 1); --s) step_all(s);
    }
    step_all(p * (l - 1));
  }

  std::vector<WVec> out(nv);
  for (std::size_t k = 0; k < nv; ++k) {
    if (!v[k][0].is_zero()) fail(Errc::Internal, "x^-1 coefficient survived horizontal reduction");
    for (int h = 1; h < d; ++h) {
      if (v[k][h].prec() < N) {
        fail(Errc::PrecisionExhausted, "horizontal reduction lost precision (" + std::to_string(v[k][h].prec()) +
                                           " < " + std::to_string(N) + ")");
      }
    }
    out[k].s = -1;
    out[k].t = t;
    out[k].c = std::move(v[k]);
  }
  return out;
}

std::vector<ZoneTerm> frob_zone_terms(const CurveSpec& c, const FrobTerms& terms, int k) {
  std::vector<ZoneTerm> z;
  if (k < 0 || k >= static_cast<int>(terms.mu.size())) return z;
  const std::int64_t p = static_cast<std::int64_t>(c.p);
  const auto& row = terms.mu[k];
  for (std::size_t b = 0; b < row.size(); ++b) {
    if (row[b].is_zero()) continue;
    z.push_back(ZoneTerm{p * (terms.i + 1 + static_cast<std::int64_t>(b)) - 1, row[b]});
  }
  return z;
}

WVec h_reduce_full(const CurveSpec& c, const RingCtx& ctx, int i, int j, int k, const FrobTerms& terms,
                   const HIntervals* intervals, int N) {
  if (terms.i != i || terms.j != j) fail(Errc::InvalidArgument, "Frobenius terms belong to another basis element");
  const std::int64_t t = static_cast<std::int64_t>(c.p) * (static_cast<std::int64_t>(k) * c.r + j);
  return h_reduce_zones(c, ctx, t, {frob_zone_terms(c, terms, k)}, intervals, N).front();
}

}  // namespace cz
