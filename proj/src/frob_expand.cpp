#include "frob_expand.hpp"

#include <gmpxx.h>

namespace cz {

PElt binom_frac(int j, int r, int k, const RingCtx& ctx) {
  if (k < 0) return ctx.zero();
  if (static_cast<std::uint64_t>(k) >= ctx.p()) fail(Errc::InvalidArgument, "binom_frac needs k < p");
  // prod_{m<k} (-j - m r) / (r^k k!)
  mpz_class num = 1, den = 1;
  for (int m = 0; m < k; ++m) {
    num *= -j - static_cast<long>(m) * r;
    den *= static_cast<long>(r) * (m + 1);
  }
  return ctx.from_mpz(num) * elt_inv(ctx.from_mpz(den));
}

PElt compute_D(int j, int ell, int N, int r, const RingCtx& ctx) {
  PElt sum = ctx.zero();
  for (int k = ell; k < N; ++k) {
    mpz_class bin;
    mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(k), static_cast<unsigned long>(ell));
    if ((k - ell) % 2) bin = -bin;
    sum += binom_frac(j, r, k, ctx) * ctx.from_mpz(bin);
  }
  return sum;
}

std::vector<PPoly> frob_powers(const CurveSpec& c, const RingCtx& ctx, int N) {
  PPoly f(ctx, c.F.size());
  for (std::size_t b = 0; b < c.F.size(); ++b) f[b] = ctx.from_int(static_cast<std::int64_t>(c.F[b]));
  std::vector<PPoly> pw;
  pw.push_back(PPoly::from_ints(ctx, {1}));
  for (int l = 1; l < N; ++l) pw.push_back(pw.back() * f);
  return pw;
}

FrobTerms frob_terms(const CurveSpec& c, const RingCtx& ctx, int i, int j, int N, const std::vector<PPoly>* powers) {
  std::vector<PPoly> local;
  if (powers == nullptr) {
    local = frob_powers(c, ctx, N);
    powers = &local;
  }
  FrobTerms t;
  t.i = i;
  t.j = j;
  const PElt p = ctx.from_int(static_cast<std::int64_t>(c.p));
  for (int l = 0; l < N; ++l) {
    const PElt scale = p * compute_D(j, l, N, c.r, ctx);
    const PPoly& fl = (*powers)[l];
    std::vector<PElt> row(static_cast<std::size_t>(c.d) * l + 1, ctx.zero());
    for (std::size_t b = 0; b < row.size(); ++b) row[b] = scale * fl.coeff(b);
    t.mu.push_back(std::move(row));
  }
  return t;
}

}  // namespace cz
