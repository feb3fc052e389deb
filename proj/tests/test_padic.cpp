#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "padic.hpp"

using namespace cz;

namespace {

mpz_class ipow(unsigned long p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, static_cast<unsigned long>(k));
  return r;
}

template <class F>
Errc error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

PMat random_mat(const RingCtx& ctx, int n, std::mt19937_64& rng) {
  PMat m(ctx, n, n);
  std::uniform_int_distribution<std::int64_t> dist(-1000000, 1000000);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = ctx.from_int(dist(rng));
  return m;
}

}  // namespace

TEST_CASE("ring context validation") {
  CHECK(error_of([] { RingCtx(9, 3); }) == Errc::NotPrime);
  CHECK(error_of([] { RingCtx(2, 3); }) == Errc::NotPrime);
  RingCtx ctx(7, 3);
  CHECK(ctx.modulus_z() == 343);
  CHECK(ctx.from_int(-1).residue() == 342);
}

TEST_CASE("elt_inv") {
  RingCtx ctx(7, 3);
  CHECK(elt_inv(ctx.one()).residue() == 1);
  mpz_class expect, two = 2, m = 343;
  mpz_invert(expect.get_mpz_t(), two.get_mpz_t(), m.get_mpz_t());
  const PElt inv2 = elt_inv(ctx.from_int(2));
  CHECK(inv2.residue() == expect);
  CHECK(inv2.residue() == 172);
  CHECK(inv2.prec() == 3);
  CHECK(error_of([&] { elt_inv(ctx.from_int(14)); }) == Errc::NonUnit);
}

TEST_CASE("elt_inv is an involution on units") {
  std::mt19937_64 rng(11);
  for (std::uint64_t p : {3ULL, 5ULL, 7ULL, 10007ULL, 4294967291ULL}) {
    for (int W = 1; W <= 6; ++W) {
      RingCtx ctx(p, W);
      std::uniform_int_distribution<std::int64_t> dist(1, 1LL << 60);
      for (int it = 0; it < 20; ++it) {
        std::int64_t a = dist(rng);
        if (static_cast<std::uint64_t>(a) % p == 0) ++a;
        const int prec = 1 + static_cast<int>(rng() % W);
        const PElt x = ctx.from_int(a).with_prec(prec);
        const PElt y = elt_inv(elt_inv(x));
        CHECK(y.equals_mod(x, prec));
        CHECK((x * elt_inv(x)).equals_mod(ctx.one(), prec));
      }
    }
  }
}

TEST_CASE("elt_div_p") {
  RingCtx ctx(5, 4);
  const PElt a = ctx.from_int(50);
  const PElt q1 = elt_div_p(a, 1);
  CHECK(q1.residue() == 10);
  CHECK(q1.prec() == 3);
  const PElt q2 = elt_div_p(a, 2);
  CHECK(q2.residue() == 2);
  CHECK(q2.prec() == 2);
  CHECK(error_of([&] { elt_div_p(ctx.from_int(51), 1); }) == Errc::InexactDivision);
  CHECK(error_of([&] { elt_div_p(ctx.from_int(0).with_prec(1), 2); }) == Errc::PrecisionExhausted);
}

TEST_CASE("poly_xgcd_lift") {
  SUBCASE("F = x, G = 1") {
    RingCtx ctx(7, 3);
    auto [R, S] = poly_xgcd_lift(ctx, PPoly::from_ints(ctx, {0, 1}), PPoly::from_ints(ctx, {1}));
    CHECK(R.degree() == -1);
    CHECK(S.coeff(0).residue() == 1);
    CHECK(S.degree() == 0);
  }
  SUBCASE("F = x^2 + 1, G = 2x mod 49") {
    RingCtx ctx(7, 2);
    auto [R, S] = poly_xgcd_lift(ctx, PPoly::from_ints(ctx, {1, 0, 1}), PPoly::from_ints(ctx, {0, 2}));
    // independent check of R F + S G = 1 with integer arithmetic
    std::vector<mpz_class> acc(4, 0);
    const std::vector<long> F = {1, 0, 1}, G = {0, 2};
    for (std::size_t a = 0; a < R.size(); ++a)
      for (std::size_t b = 0; b < F.size(); ++b) acc[a + b] += R[a].residue() * F[b];
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = 0; b < G.size(); ++b) acc[a + b] += S[a].residue() * G[b];
    for (std::size_t k = 0; k < acc.size(); ++k) {
      mpz_class v = acc[k] - (k == 0 ? 1 : 0);
      CHECK(mpz_divisible_ui_p(v.get_mpz_t(), 49) != 0);
    }
    CHECK(R.degree() < 1);
    CHECK(S.degree() < 2);
  }
  SUBCASE("common root") {
    RingCtx ctx(7, 2);
    CHECK(error_of([&] { poly_xgcd_lift(ctx, PPoly::from_ints(ctx, {0, 0, 1}), PPoly::from_ints(ctx, {0, 2})); }) ==
          Errc::NotCoprime);
  }
  SUBCASE("random coprime pairs at every precision") {
    std::mt19937_64 rng(5);
    for (std::uint64_t p : {5ULL, 31ULL, 65521ULL}) {
      for (int W = 1; W <= 8; ++W) {
        RingCtx ctx(p, W);
        for (int it = 0; it < 10; ++it) {
          const int dF = 2 + static_cast<int>(rng() % 5);
          std::vector<std::int64_t> f(dF + 1), gp(dF);
          for (auto& x : f) x = static_cast<std::int64_t>(rng() % 1000);
          f[dF] = 1;
          if (static_cast<std::uint64_t>(dF) % p == 0) continue;
          for (int k = 1; k <= dF; ++k) gp[k - 1] = f[k] * k;
          const PPoly F = PPoly::from_ints(ctx, f), G = PPoly::from_ints(ctx, gp);
          try {
            auto [R, S] = poly_xgcd_lift(ctx, F, G);
            const PPoly one = R * F + S * G;
            CHECK(poly_equal_mod(one, PPoly::from_ints(ctx, {1}), W));
            CHECK(R.degree() < G.degree());
            CHECK(S.degree() < F.degree());
          } catch (const Error& e) {
            CHECK(e.code() == Errc::NotCoprime);
          }
        }
      }
    }
  }
}

TEST_CASE("mat_charpoly") {
  RingCtx ctx(7, 3);
  SUBCASE("identity") {
    const PPoly c = mat_charpoly(PMat::identity(ctx, 2));
    CHECK(c.coeff(0).residue() == 1);
    CHECK(c.coeff(1).lift_symmetric() == -2);
    CHECK(c.coeff(2).residue() == 1);
  }
  SUBCASE("zero") {
    const PPoly c = mat_charpoly(PMat(ctx, 3, 3));
    for (int k = 0; k < 3; ++k) CHECK(c.coeff(k).is_zero());
    CHECK(c.coeff(3).residue() == 1);
  }
  SUBCASE("cofactor expansion agrees on sizes up to 4") {
    std::mt19937_64 rng(17);
    for (std::uint64_t p : {3ULL, 5ULL, 7ULL}) {
      for (int W = 1; W <= 3; ++W) {
        RingCtx c2(p, W);
        for (int n = 1; n <= 4; ++n) {
          for (int it = 0; it < 8; ++it) {
            const PMat m = random_mat(c2, n, rng);
            std::vector<std::vector<mpz_class>> z(n, std::vector<mpz_class>(n));
            for (int i = 0; i < n; ++i)
              for (int j = 0; j < n; ++j) z[i][j] = m.at(i, j).residue();
            const auto expect = oracle::charpoly_cofactor(z, c2.modulus_z());
            const PPoly got = mat_charpoly(m);
            for (int k = 0; k <= n; ++k) CHECK(got.coeff(k).residue() == expect[k]);
          }
        }
      }
    }
  }
}

TEST_CASE("vandermonde_solve") {
  RingCtx ctx(101, 3);
  std::mt19937_64 rng(3);
  SUBCASE("one node") {
    const PMat A = random_mat(ctx, 2, rng);
    const auto q = vandermonde_solve({ctx.from_int(5)}, {A});
    REQUIRE(q.size() == 1);
    CHECK(mat_equal_mod(q[0], A, 3));
  }
  SUBCASE("constant data") {
    const PMat A = random_mat(ctx, 3, rng);
    const auto q = vandermonde_solve({ctx.from_int(0), ctx.from_int(1)}, {A, A});
    CHECK(mat_equal_mod(q[0], A, 3));
    CHECK(mat_equal_mod(q[1], PMat(ctx, 3, 3), 3));
  }
  SUBCASE("recovers a quadratic") {
    const std::vector<PMat> coef = {random_mat(ctx, 2, rng), random_mat(ctx, 2, rng), random_mat(ctx, 2, rng)};
    std::vector<PElt> nodes;
    std::vector<PMat> vals;
    for (int x = 0; x < 3; ++x) {
      const PElt X = ctx.from_int(x);
      nodes.push_back(X);
      vals.push_back(coef[0] + mat_scale(coef[1], X) + mat_scale(coef[2], X * X));
    }
    const auto q = vandermonde_solve(nodes, vals);
    REQUIRE(q.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(mat_equal_mod(q[k], coef[k], 3));
    CHECK(mat_equal_mod(matpoly_eval(q, ctx.from_int(17)),
                        coef[0] + mat_scale(coef[1], ctx.from_int(17)) + mat_scale(coef[2], ctx.from_int(289)), 3));
  }
  SUBCASE("nodes congruent mod p") {
    const PMat A = random_mat(ctx, 1, rng);
    CHECK(error_of([&] { vandermonde_solve({ctx.from_int(0), ctx.from_int(101)}, {A, A}); }) ==
          Errc::SingularNodes);
  }
}

TEST_CASE("trusted digits are correct through random expressions") {
  // Each node carries the exact integer it stands for; the residue may be
  // wrong above its precision and must still be right below it.
  std::mt19937_64 rng(99);
  for (std::uint64_t p : {3ULL, 7ULL, 65521ULL, 4294967291ULL}) {
    const int W = 6;
    RingCtx ctx(p, W);
    const mpz_class pz = static_cast<unsigned long>(p);
    struct Node {
      PElt e;
      mpz_class exact;
    };
    auto leaf = [&]() {
      const int prec = 1 + static_cast<int>(rng() % W);
      mpz_class v = static_cast<unsigned long>(rng() % 100000);
      if (rng() % 3 == 0) v *= pz;
      mpz_class noise = static_cast<unsigned long>(rng() % 1000);
      PElt e = ctx.from_mpz(v + noise * ipow(static_cast<unsigned long>(p), prec)).with_prec(prec);
      return Node{e, v};
    };
    for (int trial = 0; trial < 300; ++trial) {
      std::vector<Node> pool;
      for (int k = 0; k < 4; ++k) pool.push_back(leaf());
      for (int step = 0; step < 12; ++step) {
        const Node& a = pool[rng() % pool.size()];
        const Node& b = pool[rng() % pool.size()];
        Node out;
        switch (rng() % 4) {
          case 0:
            out = {a.e + b.e, a.exact + b.exact};
            CHECK(out.e.prec() == std::min(a.e.prec(), b.e.prec()));
            break;
          case 1:
            out = {a.e - b.e, a.exact - b.exact};
            CHECK(out.e.prec() == std::min(a.e.prec(), b.e.prec()));
            break;
          case 2:
            out = {a.e * b.e, a.exact * b.exact};
            CHECK(out.e.prec() >= std::min(a.e.prec(), b.e.prec()));
            CHECK(out.e.prec() <= W);
            break;
          default: {
            if (a.e.prec() < 1 || !mpz_divisible_ui_p(a.exact.get_mpz_t(), p)) continue;
            out = {elt_div_p(a.e, 1), a.exact / pz};
            CHECK(out.e.prec() == a.e.prec() - 1);
          }
        }
        const mpz_class want = out.exact;
        CHECK(out.e.equals_mod(ctx.from_mpz(want), out.e.prec()));
        pool.push_back(out);
      }
    }
  }
}

TEST_CASE("polynomial products match schoolbook over Z") {
  std::mt19937_64 rng(7);
  for (std::uint64_t p : {5ULL, 10007ULL, 4294967291ULL}) {
    for (int W : {1, 3, 9}) {
      RingCtx ctx(p, W);
      for (std::size_t len : {1u, 5u, 31u, 32u, 33u, 100u, 257u}) {
        std::vector<std::int64_t> a(len), b(len + 3);
        for (auto& x : a) x = static_cast<std::int64_t>(rng() >> 2);
        for (auto& x : b) x = static_cast<std::int64_t>(rng() >> 2);
        const PPoly A = PPoly::from_ints(ctx, a), B = PPoly::from_ints(ctx, b);
        const PPoly C = A * B;
        for (std::size_t k = 0; k < a.size() + b.size() - 1; ++k) {
          mpz_class s = 0;
          for (std::size_t i = 0; i < a.size(); ++i)
            if (k >= i && k - i < b.size()) s += mpz_class(static_cast<long>(a[i])) * static_cast<long>(b[k - i]);
          mpz_mod(s.get_mpz_t(), s.get_mpz_t(), ctx.modulus_z().get_mpz_t());
          CHECK(C.coeff(k).residue() == s);
        }
        CHECK(C.min_prec() == W);
      }
    }
  }
}

TEST_CASE("polynomial product precision follows the operands") {
  RingCtx ctx(7, 5);
  std::vector<std::int64_t> a(40, 3), b(40, 5);
  PPoly A = PPoly::from_ints(ctx, a), B = PPoly::from_ints(ctx, b);
  for (auto& e : A.coeffs()) e = e.with_prec(2);
  const PPoly C = A * B;
  CHECK(C.min_prec() == 2);
  // multiplying by p restores one digit
  PPoly P = PPoly::from_ints(ctx, std::vector<std::int64_t>(40, 7));
  CHECK((A * P).min_prec() == 3);
}
