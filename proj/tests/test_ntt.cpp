#include <doctest.h>

#include <random>

#include "ntt.hpp"

using namespace cz;

namespace {

PPoly random_poly(const RingCtx& ctx, std::size_t len, std::mt19937_64& rng) {
  PPoly f(ctx, len);
  for (std::size_t i = 0; i < len; ++i) {
    mpz_class v;
    for (int k = 0; k < ctx.limbs() + 1; ++k) v = (v << 64) + static_cast<unsigned long>(rng());
    f[i] = ctx.from_mpz(v);
  }
  return f;
}

// All residues p^W - 1, the worst case for the CRT bound.
PPoly top_poly(const RingCtx& ctx, std::size_t len) {
  PPoly f(ctx, len);
  for (std::size_t i = 0; i < len; ++i) f[i] = ctx.from_int(-1);
  return f;
}

PPoly ntt_sum(const ntt::Plan& plan, const std::vector<std::pair<PPoly, PPoly>>& terms, std::size_t len, int prec) {
  std::vector<ntt::u64> fa(plan.words()), fb(plan.words()), acc(plan.words(), 0);
  for (const auto& [a, b] : terms) {
    plan.forward(a.coeffs().data(), a.size(), fa.data());
    plan.forward(b.coeffs().data(), b.size(), fb.data());
    plan.mul_acc(fa.data(), fb.data(), acc.data());
  }
  PPoly out(terms.front().first.ctx(), len);
  plan.inverse(acc.data(), len, out.coeffs().data(), prec);
  return out;
}

}  // namespace

TEST_CASE("transform products match schoolbook sums") {
  std::mt19937_64 rng(71);
  for (auto [p, W] : {std::pair<std::uint64_t, int>{3, 5}, {65521, 3}, {16381, 6}, {65521, 12}, {4294967291ULL, 15}}) {
    const RingCtx ctx(p, W);
    for (std::size_t la : {1u, 5u, 33u, 200u}) {
      const std::size_t lb = la / 2 + 3;
      for (int count : {1, 4}) {
        CAPTURE(p);
        CAPTURE(W);
        CAPTURE(la);
        CAPTURE(count);
        std::vector<std::pair<PPoly, PPoly>> terms;
        PPoly want(ctx, la + lb - 1);
        for (int t = 0; t < count; ++t) {
          terms.emplace_back(random_poly(ctx, la, rng), random_poly(ctx, lb, rng));
          want = want + terms.back().first * terms.back().second;
        }
        const auto plan = ntt::Plan::make(ctx, la + lb - 1, count * std::min(la, lb));
        REQUIRE(plan.has_value());
        CHECK(plan->size() >= la + lb - 1);
        const PPoly got = ntt_sum(*plan, terms, la + lb - 1, W);
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].residue() == want[i].residue());
      }
    }
  }
}

TEST_CASE("the prime count covers the largest sums") {
  for (auto [p, W] : {std::pair<std::uint64_t, int>{65521, 4}, {16381, 6}, {4294967291ULL, 16}}) {
    const RingCtx ctx(p, W);
    const std::size_t len = 300;
    const int count = 7;
    std::vector<std::pair<PPoly, PPoly>> terms;
    for (int t = 0; t < count; ++t) terms.emplace_back(top_poly(ctx, len), top_poly(ctx, len));
    const auto plan = ntt::Plan::make(ctx, 2 * len - 1, count * len);
    REQUIRE(plan.has_value());
    const PPoly got = ntt_sum(*plan, terms, 2 * len - 1, W);
    // coefficient i of the sum is count * min(i + 1, 2 len - 1 - i) (p^W - 1)^2
    for (std::size_t i = 0; i < got.size(); ++i) {
      const std::int64_t mult = count * static_cast<std::int64_t>(std::min(i + 1, 2 * len - 1 - i));
      CHECK(got[i].residue() == ctx.from_int(mult).residue());
    }
  }
}

TEST_CASE("plans carry the requested precision and refuse oversized transforms") {
  const RingCtx ctx(101, 4);
  std::mt19937_64 rng(72);
  const PPoly a = random_poly(ctx, 10, rng), b = random_poly(ctx, 10, rng);
  const auto plan = ntt::Plan::make(ctx, 19, 10);
  REQUIRE(plan.has_value());
  const PPoly got = ntt_sum(*plan, {{a, b}}, 19, 2);
  for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i].prec() == 2);
  CHECK_FALSE(ntt::Plan::make(ctx, (std::size_t{1} << 20) + 1, 10).has_value());
}
