#include "zeta.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "frob_expand.hpp"
#include "horizontal.hpp"
#include "vertical.hpp"

namespace cz {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Runs fn(0..n-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr err;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        {
          std::lock_guard<std::mutex> lk(mu);
          if (err) return;
        }
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lk(mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

mpz_class weil_power_sum_bound(int g, const mpz_class& q, int i) {
  // floor(2g q^(i/2))
  mpz_class qi, v;
  mpz_pow_ui(qi.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(i));
  v = 4 * mpz_class(g) * g * qi;
  mpz_sqrt(v.get_mpz_t(), v.get_mpz_t());
  return v;
}

}  // namespace

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Auto: return "auto";
    case Strategy::Bsgs: return "bsgs";
    case Strategy::Naive: return "naive";
  }
  return "auto";
}

Strategy resolve_strategy(const CurveSpec& c, int N, Strategy requested) {
  if (requested != Strategy::Auto) return requested;
  const unsigned __int128 dn = static_cast<unsigned __int128>(c.d) * N;
  return static_cast<unsigned __int128>(c.p) < 4 * dn * dn ? Strategy::Naive : Strategy::Bsgs;
}

FrobMatrix frobenius_matrix(const CurveSpec& c, int N, const PipelineOptions& opt, PipelineTimings* timings) {
  if (N < 1) fail(Errc::InvalidArgument, "N must be positive");
  if (c.p <= prime_bound(c.d, c.r, c.eps, N)) {
    fail(Errc::PTooSmall, "p = " + std::to_string(c.p) + " must exceed d(N+eps)r = " +
                              std::to_string(prime_bound(c.d, c.r, c.eps, N)));
  }
  FrobMatrix out;
  out.ring = make_ring(c.p, N + 2);
  out.N = N;
  out.strategy = resolve_strategy(c, N, opt.strategy);
  const RingCtx& ctx = *out.ring;
  const int n = c.basis_size();
  out.m = PMat(ctx, n, n);
  if (n == 0) return out;

  const int nd = c.d - 1;
  const int nj = c.jmax() - c.jmin() + 1;
  const bool bsgs = out.strategy == Strategy::Bsgs;

  auto t0 = Clock::now();
  const std::vector<PPoly> powers = frob_powers(c, ctx, N);
  std::vector<FrobTerms> base(nj);
  for (int jj = 0; jj < nj; ++jj) base[jj] = frob_terms(c, ctx, 0, c.jmin() + jj, N, &powers);
  if (timings) timings->expansion_ms = ms_since(t0);

  // horizontal: one task per (j, k) strip, all i together
  t0 = Clock::now();
  std::vector<std::vector<std::vector<WVec>>> w(nj, std::vector<std::vector<WVec>>(nd, std::vector<WVec>(N)));
  std::vector<std::vector<std::string>> hnotes(static_cast<std::size_t>(nj) * N);
  parallel_for(static_cast<std::size_t>(nj) * N, opt.threads, [&](std::size_t task) {
    const int jj = static_cast<int>(task / N), k = static_cast<int>(task % N);
    const int j = c.jmin() + jj;
    const std::int64_t t = static_cast<std::int64_t>(c.p) * (static_cast<std::int64_t>(k) * c.r + j);
    std::vector<std::vector<ZoneTerm>> terms(nd);
    for (int i = 0; i < nd; ++i) {
      FrobTerms ft = base[jj];
      ft.i = i;
      terms[i] = frob_zone_terms(c, ft, k);
    }
    HIntervals iv;
    if (bsgs) {
      iv = h_strip_intervals(c, ctx, t, c.d * k + c.d - 2, N, LinStrategy::Bsgs, opt.interpolation, &hnotes[task]);
    }
    std::vector<WVec> res = h_reduce_zones(c, ctx, t, terms, bsgs ? &iv : nullptr, N);
    for (int i = 0; i < nd; ++i) w[jj][i][k] = std::move(res[i]);
  });
  if (timings) timings->horizontal_ms = ms_since(t0);

  // vertical: one task per j
  t0 = Clock::now();
  const Bezout bz = bezout_all(c, ctx);
  std::vector<std::vector<VVec>> cols(nj, std::vector<VVec>(nd));
  std::vector<std::vector<std::string>> vnotes(nj);
  parallel_for(static_cast<std::size_t>(nj), opt.threads, [&](std::size_t jj) {
    const VPlan plan = v_plan(c, c.jmin() + static_cast<int>(jj));
    if (bsgs) {
      const std::vector<PMat> batches = v_batch_matrices(c, ctx, bz, plan, N, LinStrategy::Bsgs, &vnotes[jj]);
      for (int i = 0; i < nd; ++i) cols[jj][i] = v_reduce(c, ctx, plan, batches, w[jj][i], N);
    } else {
      for (int i = 0; i < nd; ++i) cols[jj][i] = v_reduce_naive(c, ctx, bz, plan, w[jj][i], N);
    }
  });
  if (timings) timings->vertical_ms = ms_since(t0);

  for (auto& v : hnotes) out.notes.insert(out.notes.end(), v.begin(), v.end());
  for (auto& v : vnotes) out.notes.insert(out.notes.end(), v.begin(), v.end());

  for (int jj = 0; jj < nj; ++jj) {
    for (int i = 0; i < nd; ++i) {
      const VVec& v = cols[jj][i];
      const int col = c.basis_index(i, c.jmin() + jj);
      const int row0 = c.basis_index(0, c.eps * c.r + v.j);
      for (int h = 0; h < nd; ++h) {
        if (v.c[h].prec() < N) fail(Errc::PrecisionExhausted, "Frobenius matrix entry below precision N");
        out.m.at(row0 + h, col) = v.c[h];
      }
    }
  }
  return out;
}

std::vector<mpz_class> power_sums(const FrobMatrix& M, const CurveSpec& c, const KerEta& ker) {
  const int g = c.g;
  std::vector<mpz_class> s;
  if (g == 0) return s;
  const RingCtx& ctx = *M.ring;
  const mpz_class pN = ctx.power_z(M.N);
  const mpz_class q = static_cast<unsigned long>(c.p);
  std::vector<mpz_class> a = {1};
  PMat pw = M.m;
  for (int i = 1; i <= g; ++i) {
    if (i > 1) pw = pw * M.m;
    PElt tr = mat_trace(pw);
    if (tr.prec() < M.N) fail(Errc::PrecisionExhausted, "trace of Frobenius power below precision N");
    long corr = -1;
    for (int e : ker.cycle_type)
      if (i % e == 0) corr += e;
    mpz_class si_mod = tr.residue() - corr;
    mpz_mod(si_mod.get_mpz_t(), si_mod.get_mpz_t(), pN.get_mpz_t());
    // Newton's identity fixes s_i mod i given a_1..a_{i-1}.
    mpz_class acc = 0;
    for (int k = 1; k < i; ++k) acc += a[k] * s[i - k - 1];
    mpz_class si_mod_i = -acc;
    mpz_class ii = i;
    mpz_mod(si_mod_i.get_mpz_t(), si_mod_i.get_mpz_t(), ii.get_mpz_t());
    // CRT with modulus i p^N, p > i
    const mpz_class mod = ii * pN;
    mpz_class x = si_mod;
    while (true) {
      mpz_class r;
      mpz_mod(r.get_mpz_t(), x.get_mpz_t(), ii.get_mpz_t());
      if (r == si_mod_i) break;
      x += pN;
    }
    if (2 * x > mod) x -= mod;
    const mpz_class B = weil_power_sum_bound(g, q, i);
    if (!(2 * B < mod)) {
      fail(Errc::LiftAmbiguous, "precision N = " + std::to_string(M.N) + " cannot pin down s_" + std::to_string(i));
    }
    if (abs(x) > B) fail(Errc::BoundViolated, "lifted s_" + std::to_string(i) + " violates the Weil bound");
    s.push_back(x);
    mpz_class num = -(x + acc);
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(i))) {
      fail(Errc::NonIntegralCoefficient, "Newton identity gives a non-integral coefficient");
    }
    a.push_back(num / i);
  }
  return s;
}

LPolynomial lpolynomial_from_power_sums(const std::vector<mpz_class>& s, int g, const mpz_class& q) {
  if (static_cast<int>(s.size()) < g) fail(Errc::InvalidArgument, "need g power sums");
  LPolynomial L;
  L.g = g;
  L.q = q;
  L.a.assign(2 * g + 1, 0);
  L.a[0] = 1;
  for (int i = 1; i <= g; ++i) {
    mpz_class num = s[i - 1];
    for (int k = 1; k < i; ++k) num += L.a[k] * s[i - k - 1];
    num = -num;
    if (!mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(i))) {
      fail(Errc::NonIntegralCoefficient, "Newton identity gives a non-integral a_" + std::to_string(i));
    }
    L.a[i] = num / i;
  }
  for (int i = 0; i < g; ++i) {
    mpz_class qp;
    mpz_pow_ui(qp.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(g - i));
    L.a[2 * g - i] = qp * L.a[i];
  }
  check_lpolynomial(L);
  return L;
}

void check_lpolynomial(const LPolynomial& L) {
  const int g = L.g;
  if (static_cast<int>(L.a.size()) != 2 * g + 1 || L.a[0] != 1) fail(Errc::Internal, "malformed L-polynomial");
  for (int i = 0; i <= 2 * g; ++i) {
    if (i <= g) {
      mpz_class qp;
      mpz_pow_ui(qp.get_mpz_t(), L.q.get_mpz_t(), static_cast<unsigned long>(g - i));
      if (L.a[2 * g - i] != qp * L.a[i]) fail(Errc::BoundViolated, "functional equation fails");
    }
    mpz_class bin, qi;
    mpz_bin_uiui(bin.get_mpz_t(), static_cast<unsigned long>(2 * g), static_cast<unsigned long>(i));
    mpz_pow_ui(qi.get_mpz_t(), L.q.get_mpz_t(), static_cast<unsigned long>(i));
    if (L.a[i] * L.a[i] > bin * bin * qi) fail(Errc::BoundViolated, "Weil bound fails for a_" + std::to_string(i));
  }
}

std::vector<mpz_class> frobenius_polynomial(const LPolynomial& L) {
  return std::vector<mpz_class>(L.a.rbegin(), L.a.rend());
}

bool zeta_check_charpoly(const FrobMatrix& M, const LPolynomial& L, const std::vector<std::int64_t>& U) {
  const RingCtx& ctx = *M.ring;
  const int n = M.m.rows();
  const PPoly chi = mat_charpoly(M.m);
  // L(t) * t^(delta-1) U(1/t)
  std::vector<mpz_class> rhs(L.a.size() + U.size() - 1, 0);
  for (std::size_t i = 0; i < L.a.size(); ++i)
    for (std::size_t k = 0; k < U.size(); ++k) rhs[i + k] += L.a[i] * mpz_class(static_cast<long>(U[U.size() - 1 - k]));
  if (static_cast<int>(rhs.size()) != n + 1) return false;
  for (int m = 0; m <= n; ++m) {
    const PElt lhs = chi[n - m];
    if (!lhs.equals_mod(ctx.from_mpz(rhs[m]), M.N)) return false;
  }
  return true;
}

std::vector<mpz_class> point_counts_from_L(const LPolynomial& L, int i_max) {
  std::vector<mpz_class> s, counts;
  const int deg = 2 * L.g;
  for (int i = 1; i <= i_max; ++i) {
    mpz_class v = i <= deg ? -mpz_class(i) * L.a[i] : mpz_class(0);
    for (int k = 1; k < i; ++k)
      if (k <= deg) v -= L.a[k] * s[i - k - 1];
    s.push_back(v);
    mpz_class qi;
    mpz_pow_ui(qi.get_mpz_t(), L.q.get_mpz_t(), static_cast<unsigned long>(i));
    counts.push_back(qi + 1 - v);
  }
  return counts;
}

ZetaResult compute_zeta(const CurveSpec& c, const PipelineOptions& opt) {
  ZetaResult res;
  res.curve = c;
  res.ker = ker_eta_charpoly(c);
  if (c.fd == 1 && c.delta > 1 && ker_eta_monic_closed_form(c.p, c.delta) != res.ker.U) {
    fail(Errc::Internal, "ker(eta) factor disagrees with the monic closed form");
  }
  res.frob = frobenius_matrix(c, c.N, opt, &res.timings);
  auto t0 = Clock::now();
  const std::vector<mpz_class> s = power_sums(res.frob, c, res.ker);
  res.L = lpolynomial_from_power_sums(s, c.g, mpz_class(static_cast<unsigned long>(c.p)));
  res.charpoly_ok = zeta_check_charpoly(res.frob, res.L, res.ker.U);
  res.timings.lift_ms = ms_since(t0);
  if (!res.charpoly_ok) fail(Errc::Internal, "det(I - tM) disagrees with L(t) rev(U)(t) mod p^N");
  return res;
}

}  // namespace cz
