#include <doctest.h>

#include <random>

#include "horizontal.hpp"
#include "linrec.hpp"
#include "oracles.hpp"
#include "vertical.hpp"

using namespace cz;

namespace {

std::vector<WVec> random_inputs(const CurveSpec& c, const RingCtx& ctx, int j, int N, std::mt19937_64& rng) {
  std::vector<WVec> w(N);
  for (int k = 0; k < N; ++k) {
    w[k].s = -1;
    w[k].t = static_cast<std::int64_t>(c.p) * (static_cast<std::int64_t>(k) * c.r + j);
    w[k].c.push_back(ctx.zero());
    for (int h = 1; h < c.d; ++h) w[k].c.push_back(ctx.from_int(static_cast<std::int64_t>(rng() % 100000)));
  }
  return w;
}

}  // namespace

TEST_CASE("bezout_RS") {
  SUBCASE("F = x^2 + 1") {
    const CurveSpec c = curve_new(13, 3, {1, 0, 1});
    RingCtx ctx(c.p, c.N + 2);
    auto [R, S] = bezout_RS(c, ctx, 0);
    // R (x^2 + 1) + S (2x) = 1, checked over Z mod p^W
    std::vector<mpz_class> acc(4, 0);
    for (std::size_t a = 0; a < R.size(); ++a) {
      acc[a] += R[a].residue();
      acc[a + 2] += R[a].residue();
    }
    for (std::size_t a = 0; a < S.size(); ++a) acc[a + 1] += 2 * S[a].residue();
    acc[0] -= 1;
    for (auto& v : acc) CHECK(mpz_divisible_p(v.get_mpz_t(), ctx.modulus_z().get_mpz_t()) != 0);
  }
  SUBCASE("identity and degree bounds on random curves") {
    std::mt19937_64 rng(31);
    for (int it = 0; it < 50; ++it) {
      const int r = 2 + static_cast<int>(rng() % 5);
      const int d = std::max(2, 5 - r) + static_cast<int>(rng() % 5);
      const auto rc = oracle::random_curve(rng, r, d);
      const CurveSpec c = curve_new(rc.p, rc.r, rc.F);
      RingCtx ctx(c.p, c.N + 2);
      // the library lifts F through its residues in [0, p)
      const PPoly F = PPoly::from_ints(ctx, std::vector<std::int64_t>(c.F.begin(), c.F.end()));
      const PPoly dF = poly_derivative(F);
      const Bezout bz = bezout_all(c, ctx);
      REQUIRE(static_cast<int>(bz.R.size()) == d - 1);
      for (int i = 0; i <= d - 2; ++i) {
        PPoly xi(ctx, i + 1);
        xi[i] = ctx.one();
        CHECK(poly_equal_mod(bz.R[i] * F + bz.S[i] * dF, xi, ctx.W()));
        CHECK(bz.R[i].degree() < d - 1);
        CHECK(bz.S[i].degree() < d);
      }
    }
  }
}

TEST_CASE("v_step_matrix agrees with exact rational reduction") {
  for (const auto& spec : {std::pair<int, std::vector<std::int64_t>>{2, {1, 1, 0, 1}},
                           std::pair<int, std::vector<std::int64_t>>{3, {2, -1, 0, 4, 1}},
                           std::pair<int, std::vector<std::int64_t>>{3, {1, 0, 1}}}) {
    const CurveSpec c = curve_new(101, spec.first, spec.second);
    RingCtx ctx(c.p, c.N + 2);
    const Bezout bz = bezout_all(c, ctx);
    for (int j = 1; j < c.r; ++j) {
      for (std::int64_t t = 1; t < 40; ++t) {
        const VStep st = v_step_matrix(c, ctx, bz, j, t);
        CHECK(st.D_int == c.r * t - c.r + j);
        CHECK(st.D_int > 0);
        if (st.D_int % 101 == 0) continue;
        const PElt dinv = elt_inv(st.D);
        for (int i = 0; i <= c.d - 2; ++i) {
          oracle::QPoly G(i + 1, mpq_class(0));
          G[i] = 1;
          const oracle::QPoly Q = oracle::reduce_vertical_step(c, G, c.r * (t - 1) + j);
          for (int h = 0; h <= c.d - 2; ++h) {
            const mpq_class want = h < static_cast<int>(Q.size()) ? Q[h] : mpq_class(0);
            CHECK((st.M.at(h, i) * dinv).residue() == oracle::qmod(want, ctx.modulus_z()));
          }
        }
        if (c.d == 2) {
          const PPoly dS = poly_derivative(bz.S[0]);
          CHECK(st.M.at(0, 0).equals(st.D * bz.R[0].coeff(0) + ctx.from_int(c.r) * dS.coeff(0)));
        }
      }
    }
  }
}

TEST_CASE("v_plan alignment") {
  std::mt19937_64 rng(32);
  for (int it = 0; it < 200; ++it) {
    const int r = 2 + static_cast<int>(rng() % 6);
    const int d = std::max(1, 5 - r) + static_cast<int>(rng() % 6);
    const auto rc = oracle::random_curve(rng, r, d);
    const CurveSpec c = curve_new(rc.p, rc.r, rc.F);
    const std::int64_t p = static_cast<std::int64_t>(c.p);
    for (int j = c.jmin(); j <= c.jmax(); ++j) {
      const VPlan pl = v_plan(c, j);
      CHECK(pl.beta >= 1);
      CHECK(pl.beta <= r - 1);
      for (int k = 0; k < c.N; ++k) {
        const std::int64_t level = p * (k + pl.lambda) + pl.delta_loc;
        CHECK(static_cast<std::int64_t>(r) * level + pl.beta == p * (static_cast<std::int64_t>(k) * r + j));
      }
    }
  }
}

TEST_CASE("vertical batches") {
  SUBCASE("lambda = 0 and N = 1 gives only the head batch") {
    const CurveSpec c = curve_new(13, 2, {1, 1, 0, 1}, 1);
    RingCtx ctx(c.p, 3);
    const Bezout bz = bezout_all(c, ctx);
    const VPlan pl = v_plan(c, 1);
    CHECK(pl.lambda == 0);
    CHECK(v_batch_matrices(c, ctx, bz, pl, 1, LinStrategy::Naive).size() == 1);
  }
  SUBCASE("bsgs equals naive, and batches are integral") {
    std::mt19937_64 rng(33);
    for (int it = 0; it < 12; ++it) {
      const int r = 2 + static_cast<int>(rng() % 4);
      const int d = std::max(2, 5 - r) + static_cast<int>(rng() % 4);
      auto rc = oracle::random_curve(rng, r, d);
      rc.p = oracle::next_prime(rc.p * 4);
      while (!oracle::squarefree_mod_p(rc.F, rc.p)) rc.p = oracle::next_prime(rc.p + 1);
      const CurveSpec c = curve_new(rc.p, rc.r, rc.F);
      RingCtx ctx(c.p, c.N + 2);
      const Bezout bz = bezout_all(c, ctx);
      const std::int64_t p = static_cast<std::int64_t>(c.p);
      for (int j = c.jmin(); j <= c.jmax(); ++j) {
        const VPlan pl = v_plan(c, j);
        const auto slow = v_batch_matrices(c, ctx, bz, pl, c.N, LinStrategy::Naive);
        std::vector<std::string> notes;
        const auto fast = v_batch_matrices(c, ctx, bz, pl, c.N, LinStrategy::Bsgs, &notes);
        REQUIRE(slow.size() == static_cast<std::size_t>(pl.lambda + c.N));
        REQUIRE(fast.size() == slow.size());
        for (std::size_t l = 0; l < slow.size(); ++l) {
          CHECK(mat_equal_mod(fast[l], slow[l], c.N));
          CHECK(fast[l].min_prec() >= c.N);
        }
        // raw interval products vanish mod p and D has valuation one
        const LinMat LM = v_linmat(c, ctx, bz, pl.beta);
        for (int l = 1; l <= pl.lambda + c.N - 1; ++l) {
          const std::int64_t a = pl.delta_loc + p * (l - 1);
          const auto M = eval_intervals(LM, {{a, a + p}}, a + p, LinStrategy::Naive);
          const auto D = eval_intervals(v_denominator_linmat(c, ctx, pl.beta), {{a, a + p}}, a + p,
                                        LinStrategy::Naive);
          CHECK(D[0].at(0, 0).val_upto(3) == 1);
          for (int x = 0; x < M[0].rows(); ++x)
            for (int y = 0; y < M[0].cols(); ++y) CHECK(M[0].at(x, y).val_upto(1) >= 1);
          CHECK(det_mod_p(v_step_matrix(c, ctx, bz, pl.beta, a + 1).M) != 0);
        }
      }
    }
  }
}

TEST_CASE("v_reduce") {
  std::mt19937_64 rng(34);
  for (const auto& spec : {std::pair<int, std::vector<std::int64_t>>{2, {1, 1, 0, 1}},
                           std::pair<int, std::vector<std::int64_t>>{3, {1, 0, 0, 1}},
                           std::pair<int, std::vector<std::int64_t>>{4, {3, 1, 1, 0, 2}}}) {
    std::uint64_t p = 3;
    CurveSpec c;
    while (true) {
      p = oracle::next_prime(p + 1);
      try {
        c = curve_new(p, spec.first, spec.second);
        break;
      } catch (const Error&) {
      }
    }
    RingCtx ctx(c.p, c.N + 2);
    const Bezout bz = bezout_all(c, ctx);
    for (int j = c.jmin(); j <= c.jmax(); ++j) {
      const VPlan pl = v_plan(c, j);
      const auto batches = v_batch_matrices(c, ctx, bz, pl, c.N, LinStrategy::Naive);
      std::vector<WVec> zero = random_inputs(c, ctx, j, c.N, rng);
      for (auto& w : zero)
        for (auto& e : w.c) e = ctx.zero();
      for (const auto& e : v_reduce(c, ctx, pl, batches, zero, c.N).c) CHECK(e.is_zero());

      const auto w = random_inputs(c, ctx, j, c.N, rng);
      const VVec a = v_reduce(c, ctx, pl, batches, w, c.N);
      const VVec b = v_reduce_naive(c, ctx, bz, pl, w, c.N);
      CHECK(a.j == pl.beta);
      CHECK(a.t == c.eps);
      for (int h = 0; h < c.d - 1; ++h) {
        CHECK(a.c[h].prec() >= c.N);
        CHECK(a.c[h].equals_mod(b.c[h], c.N));
      }

      // the same descent with exact rationals
      mpz_class pN;
      mpz_ui_pow_ui(pN.get_mpz_t(), c.p, static_cast<unsigned long>(c.N));
      const std::int64_t P = static_cast<std::int64_t>(c.p);
      std::int64_t top = 0;
      for (int k = 0; k < c.N; ++k) top = std::max(top, (P * (k * c.r + j) - pl.beta) / c.r);
      oracle::QPoly acc;
      for (std::int64_t T = top; T >= c.eps; --T) {
        for (int k = 0; k < c.N; ++k) {
          if ((P * (k * c.r + j) - pl.beta) / c.r != T) continue;
          acc.resize(std::max<std::size_t>(acc.size(), c.d - 1), mpq_class(0));
          for (int h = 1; h < c.d; ++h) acc[h - 1] += mpq_class(w[k].c[h].residue());
        }
        if (T > c.eps) acc = oracle::reduce_vertical_step(c, acc, c.r * (T - 1) + pl.beta);
      }
      for (int h = 0; h < c.d - 1; ++h) {
        const mpq_class want = h < static_cast<int>(acc.size()) ? acc[h] : mpq_class(0);
        CHECK(a.c[h].with_prec(c.N).lift() == oracle::qmod(want, pN));
      }
    }
  }
}
