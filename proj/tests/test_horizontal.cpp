#include <doctest.h>

#include <random>

#include "frob_expand.hpp"
#include "horizontal.hpp"
#include "oracles.hpp"

using namespace cz;

namespace {

template <class F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

mpq_class rational_D(int j, int l, int N, int r) {
  mpq_class s = 0;
  for (int k = l; k < N; ++k) {
    const mpq_class term = oracle::qbinom(mpq_class(-j, r), k) * oracle::qbinom(mpq_class(k), l);
    s += (k - l) % 2 ? -term : term;
  }
  return s;
}

// r * d(x^a y^-(t-r)) as zone terms, times the multiplier.
std::vector<ZoneTerm> exact_zone(const CurveSpec& c, const RingCtx& ctx, std::int64_t a, std::int64_t t,
                                 const PElt& mult) {
  std::vector<ZoneTerm> z;
  for (int k = 0; k <= c.d; ++k) {
    const std::int64_t coef = (c.r * a - (t - c.r) * k) * static_cast<std::int64_t>(c.F[k]);
    if (a - 1 + k < 0) continue;
    z.push_back(ZoneTerm{a - 1 + k, ctx.from_int(coef) * mult});
  }
  return z;
}

}  // namespace

TEST_CASE("h_step_matrix") {
  SUBCASE("denominator example") {
    const CurveSpec c = curve_new(127, 5, {1, 0, 0, 0, 0, 1});
    RingCtx ctx(c.p, c.N + 2);
    const HStep st = h_step_matrix(c, ctx, 127 * 6, 126);
    CHECK(static_cast<long>(st.D_int) == 5 * (762 - 5) - 5 * 126);
    CHECK(static_cast<long>(st.D_int) == 3155);
    CHECK(st.D.residue() == 3155);
  }
  SUBCASE("F = x^d has no last-column terms") {
    CurveSpec c;
    c.p = 31;
    c.r = 2;
    c.d = 3;
    c.F = {0, 0, 0, 1};
    c.fd = 1;
    RingCtx ctx(31, 3);
    const HStep st = h_step_matrix(c, ctx, 31 * 3, 17);
    for (const auto& e : st.C) CHECK(e.is_zero());
  }
  SUBCASE("vanishing denominator") {
    const CurveSpec c = curve_new(31, 2, {1, 2, 0, 1});
    RingCtx ctx(c.p, 4);
    // d(t - r) = r s at t = 4, s = 3
    CHECK(static_cast<long>(h_step_matrix(c, ctx, 4, 3).D_int) == 0);
    WVec v{3, 4, std::vector<PElt>(3, ctx.one())};
    CHECK(error_of([&] { h_reduce_one(c, ctx, v); }) == Errc::UnexpectedZeroDenominator);
  }
}

TEST_CASE("h_reduce_one agrees with exact rational reduction") {
  std::mt19937_64 rng(8);
  const CurveSpec c = curve_new(31, 2, {3, -2, 5, 1});
  RingCtx ctx(c.p, 4);
  const mpz_class pW = ctx.modulus_z();
  WVec zero{40, 31 * 5, std::vector<PElt>(3, ctx.zero())};
  const WVec z1 = h_reduce_one(c, ctx, zero);
  for (const auto& e : z1.c) CHECK(e.is_zero());
  CHECK(z1.s == 39);

  for (int it = 0; it < 200; ++it) {
    const std::int64_t t = 31 * (1 + static_cast<std::int64_t>(rng() % 6));
    const std::int64_t s = static_cast<std::int64_t>(rng() % 200);
    std::vector<mpq_class> v(3);
    for (auto& x : v) x = static_cast<long>(rng() % 100000);
    const __int128 Dint = static_cast<__int128>(c.d) * (t - c.r) - static_cast<__int128>(c.r) * s;
    if (Dint == 0) continue;
    const bool pdiv = Dint % 31 == 0;
    if (pdiv) v[2] *= 31;  // numerator must then be divisible by p
    WVec w{s, t, {}};
    for (const auto& x : v) w.c.push_back(ctx.from_mpz(x.get_num()));
    WVec got;
    try {
      got = h_reduce_one(c, ctx, w);
    } catch (const Error& e) {
      // a p^2 | D position is outside the theorem's range
      CHECK(e.code() == Errc::IntegralityViolation);
      CHECK((Dint / 31) % 31 == 0);
      continue;
    }
    const auto want = oracle::horizontal_step(c, v, s, t);
    CHECK(got.s == s - 1);
    for (int h = 0; h < 3; ++h) {
      const int prec = got.c[h].prec();
      CHECK(prec >= (pdiv ? 3 : 4));
      mpz_class pk;
      mpz_ui_pow_ui(pk.get_mpz_t(), 31, static_cast<unsigned long>(prec));
      CHECK(got.c[h].lift() == oracle::qmod(want[h], pk));
    }
  }
}

TEST_CASE("interval matrices") {
  const CurveSpec c = curve_new(127, 5, {1, 0, 0, 0, 0, 1});
  RingCtx ctx(c.p, c.N + 2);
  const std::int64_t t = 127 * (5 + 6);
  const HIntervals fast = h_interval_matrices(c, ctx, t, 3, LinStrategy::Bsgs);
  const HIntervals slow = h_interval_matrices(c, ctx, t, 3, LinStrategy::Naive);
  REQUIRE(fast.size() == 4);
  for (std::size_t l = 0; l < 4; ++l) {
    CHECK(mat_equal_mod(fast.M[l], slow.M[l], ctx.W()));
    CHECK(fast.D[l].equals_mod(slow.D[l], ctx.W()));
  }
  // M(l) / D(l) carries W_{p(l+1)-d-1} to W_{pl}
  std::mt19937_64 rng(9);
  for (std::size_t l = 0; l < 4; ++l) {
    WVec v{127 * static_cast<std::int64_t>(l + 1) - c.d - 1, t, {}};
    for (int h = 0; h < c.d; ++h) v.c.push_back(ctx.from_int(static_cast<std::int64_t>(rng() % 1000)));
    std::vector<PElt> viaM = mat_vec(slow.M[l], v.c);
    const PElt dinv = elt_inv(slow.D[l]);
    for (auto& e : viaM) e *= dinv;
    WVec w = v;
    while (w.s > 127 * static_cast<std::int64_t>(l)) w = h_reduce_one(c, ctx, w);
    CHECK(w.s == 127 * static_cast<std::int64_t>(l));
    for (int h = 0; h < c.d; ++h) CHECK(w.c[h].equals_mod(viaM[h], ctx.W()));
  }
}

TEST_CASE("h_interpolate") {
  RingCtx ctx(101, 4);
  SUBCASE("constant family") {
    HIntervals known;
    PMat A(ctx, 2, 2);
    A.at(0, 0) = ctx.from_int(3);
    A.at(1, 0) = ctx.from_int(-7);
    A.at(1, 1) = ctx.from_int(11);
    for (int l = 0; l < 3; ++l) {
      known.M.push_back(A);
      known.D.push_back(ctx.from_int(5));
    }
    const HIntervals all = h_interpolate(ctx, known, 9, 4);
    REQUIRE(all.size() == 10);
    for (int l = 0; l < 10; ++l) {
      CHECK(mat_equal_mod(all.M[l], A, 4));
      CHECK(all.D[l].residue() == 5);
    }
  }
  SUBCASE("nothing to extend") {
    HIntervals known;
    known.M.push_back(PMat::identity(ctx, 2));
    known.D.push_back(ctx.one());
    const HIntervals all = h_interpolate(ctx, known, 0, 4);
    REQUIRE(all.size() == 1);
    CHECK(mat_equal_mod(all.M[0], PMat::identity(ctx, 2), 4));
  }
  SUBCASE("interpolated matrices equal direct ones on toy curves") {
    for (int N : {1, 2}) {
      const CurveSpec c = curve_new(31, 2, {1, 2, 0, 1}, N);
      RingCtx rc(c.p, N + 2);
      for (int j = c.jmin(); j <= c.jmax(); ++j) {
        for (int k = 0; k < 4; ++k) {
          const std::int64_t t = 31 * (k * c.r + j);
          const int lmax = c.d * k + c.d - 2;
          const HIntervals direct = h_interval_matrices(c, rc, t, lmax, LinStrategy::Naive);
          const int L = std::min(N - 1, lmax);
          HIntervals known;
          known.M.assign(direct.M.begin(), direct.M.begin() + L + 1);
          known.D.assign(direct.D.begin(), direct.D.begin() + L + 1);
          const HIntervals all = h_interpolate(rc, known, lmax, N);
          for (int l = 0; l <= lmax; ++l) {
            CHECK(mat_equal_mod(all.M[l], direct.M[l], N));
            CHECK(all.D[l].equals_mod(direct.D[l], N));
          }
          std::vector<std::string> notes;
          const HIntervals strip = h_strip_intervals(c, rc, t, lmax, N, LinStrategy::Naive, true, &notes);
          CHECK(notes.empty());
          for (int l = 0; l <= lmax; ++l) CHECK(mat_equal_mod(strip.M[l], direct.M[l], N));
        }
      }
    }
  }
}

TEST_CASE("h_reduce_full agrees with exact rational reduction") {
  for (int N : {1, 2}) {
    for (const auto& F : {std::vector<std::int64_t>{1, 2, 0, 1}, std::vector<std::int64_t>{-3, 4, 2, 5}}) {
      const CurveSpec c = curve_new(31, 2, F, N);
      RingCtx ctx(c.p, N + 2);
      mpz_class pN;
      mpz_ui_pow_ui(pN.get_mpz_t(), 31, static_cast<unsigned long>(N));
      const oracle::QPoly Fq = oracle::curve_F(c);
      for (int j = c.jmin(); j <= c.jmax(); ++j) {
        for (int i = 0; i <= c.d - 2; ++i) {
          const FrobTerms terms = frob_terms(c, ctx, i, j, N);
          for (int k = 0; k < N; ++k) {
            const std::int64_t t = 31 * (k * c.r + j);
            const oracle::QPoly Fk = oracle::qpow(Fq, k);
            oracle::QPoly G;
            for (std::size_t b = 0; b < Fk.size(); ++b) {
              const std::int64_t e = 31 * (i + 1 + static_cast<std::int64_t>(b)) - 1;
              if (static_cast<std::int64_t>(G.size()) <= e) G.resize(e + 1, mpq_class(0));
              G[e] += mpq_class(31) * rational_D(j, k, N, c.r) * Fk[b];
            }
            const oracle::QPoly want = oracle::reduce_horizontal(c, G, t);
            const HIntervals iv = h_strip_intervals(c, ctx, t, c.d * k + c.d - 2, N, LinStrategy::Naive, true);
            for (const HIntervals* ivp : {static_cast<const HIntervals*>(nullptr), &iv}) {
              const WVec got = h_reduce_full(c, ctx, i, j, k, terms, ivp, N);
              CHECK(got.s == -1);
              CHECK(got.t == t);
              CHECK(got.c[0].is_zero());
              for (int h = 1; h < c.d; ++h) {
                const mpq_class w = h - 1 < static_cast<int>(want.size()) ? want[h - 1] : mpq_class(0);
                CHECK(got.c[h].prec() >= N);
                CHECK(got.c[h].with_prec(N).lift() == oracle::qmod(w, pN));
              }
            }
          }
        }
      }
    }
  }
}

TEST_CASE("h_reduce_zones") {
  const CurveSpec c = curve_new(127, 5, {1, 0, 0, 0, 0, 1});
  RingCtx ctx(c.p, c.N + 2);
  const std::int64_t t = 127 * 6;
  SUBCASE("no terms") {
    const auto out = h_reduce_zones(c, ctx, t, {{}}, nullptr, c.N);
    for (const auto& e : out[0].c) CHECK(e.is_zero());
  }
  SUBCASE("exponent outside every zone") {
    CHECK(error_of([&] { h_reduce_zones(c, ctx, t, {{ZoneTerm{50, ctx.one()}}}, nullptr, c.N); }) ==
          Errc::InvalidArgument);
  }
  SUBCASE("exact forms reduce to zero") {
    std::mt19937_64 rng(12);
    const PElt p = ctx.from_int(127);
    for (int k = 0; k < 3; ++k) {
      const std::int64_t tk = 127 * (k * c.r + 6);
      const int lmax = c.d * k + c.d - 2;
      const HIntervals iv = h_strip_intervals(c, ctx, tk, lmax, c.N, LinStrategy::Bsgs, true);
      for (int it = 0; it < 4; ++it) {
        std::vector<ZoneTerm> terms;
        for (int l = 1; l <= lmax + 1; ++l) {
          if (rng() % 2) continue;
          const PElt g = p * ctx.from_int(static_cast<std::int64_t>(rng() % 1000) - 500);
          const auto z = exact_zone(c, ctx, 127 * l - c.d, tk, g);
          terms.insert(terms.end(), z.begin(), z.end());
        }
        for (const HIntervals* ivp : {static_cast<const HIntervals*>(nullptr), &iv}) {
          const auto out = h_reduce_zones(c, ctx, tk, {terms}, ivp, c.N);
          for (const auto& e : out[0].c) CHECK(e.with_prec(c.N).is_zero());
        }
      }
    }
  }
}
