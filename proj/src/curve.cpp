#include "curve.hpp"

#include <gmpxx.h>

#include <numeric>
#include <string>

#include "error.hpp"
#include "fp.hpp"

namespace cz {

namespace {

using IntPoly = std::vector<std::int64_t>;

IntPoly int_mul(const IntPoly& a, const IntPoly& b) {
  IntPoly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

IntPoly t_pow_minus_one(int e) {
  IntPoly f(e + 1, 0);
  f[0] = -1;
  f[e] = 1;
  return f;
}

// Exact division by (t - 1).
IntPoly div_t_minus_one(const IntPoly& f) {
  IntPoly q(f.size() - 1, 0);
  std::int64_t carry = 0;
  for (std::size_t k = f.size(); k-- > 1;) {
    carry += f[k];
    q[k - 1] = carry;
  }
  if (carry + f[0] != 0) fail(Errc::Internal, "det(tI - P) is not divisible by t - 1");
  return q;
}

int euler_phi(int n) {
  int r = n;
  for (int q = 2; q * q <= n; ++q) {
    if (n % q == 0) {
      while (n % q == 0) n /= q;
      r -= r / q;
    }
  }
  if (n > 1) r -= r / n;
  return r;
}

}  // namespace

int genus(int d, int r) {
  const int delta = std::gcd(d, r);
  return ((d - 1) * (r - 1) - (delta - 1)) / 2;
}

int choose_precision(int g, std::uint64_t p) {
  if (g <= 0) return 1;
  int best = 1;
  const mpz_class rhs = mpz_class(16) * g * g;
  for (int i = 1; i <= g; ++i) {
    // smallest m with p^(m - i/2) >= 4g/i, i.e. i^2 p^(2m-i) >= 16 g^2
    for (int m = 0;; ++m) {
      mpz_class lhs = mpz_class(i) * i, right = rhs;
      const int e = 2 * m - i;
      mpz_class pe;
      mpz_ui_pow_ui(pe.get_mpz_t(), p, static_cast<unsigned long>(e >= 0 ? e : -e));
      if (e >= 0) lhs *= pe;
      else right *= pe;
      if (lhs >= right) {
        best = std::max(best, m);
        break;
      }
    }
  }
  return best;
}

std::uint64_t prime_bound(int d, int r, int eps, int N) {
  return static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(N + eps) * static_cast<std::uint64_t>(r);
}

CurveSpec curve_new(std::uint64_t p, int r, const std::vector<std::int64_t>& coeffs, std::optional<int> N_override) {
  if (p < 3 || !fp::is_prime(p)) fail(Errc::NotPrime, "p = " + std::to_string(p) + " is not an odd prime");
  if (r < 2) fail(Errc::DegenerateCover, "cover degree r must be at least 2");
  if (coeffs.empty()) fail(Errc::LeadingCoeffVanishes, "F has no coefficients");
  CurveSpec c;
  c.p = p;
  c.r = r;
  for (auto v : coeffs) c.F.push_back(fp::reduce(v, p));
  if (c.F.back() == 0) fail(Errc::LeadingCoeffVanishes, "leading coefficient of F vanishes mod p");
  c.d = static_cast<int>(c.F.size()) - 1;
  c.fd = c.F.back();
  if (c.d < 1 || r + c.d < 5) {
    fail(Errc::DegenerateCover, "r + d = " + std::to_string(r + c.d) + " must be at least 5 with d >= 1");
  }
  fp::Poly f(c.F.begin(), c.F.end());
  if (fp::degree(fp::gcd(f, fp::derivative(f, p), p)) != 0) {
    fail(Errc::NotSquarefree, "F is not squarefree mod p");
  }
  c.delta = std::gcd(r, c.d);
  c.eps = c.delta == 1 ? 0 : 1;
  c.g = genus(c.d, r);
  if (N_override) {
    if (*N_override < 1) fail(Errc::InvalidArgument, "N must be positive");
    c.N = *N_override;
    c.N_overridden = true;
  } else {
    c.N = choose_precision(c.g, p);
  }
  const std::uint64_t bound = prime_bound(c.d, r, c.eps, c.N);
  if (p <= bound) {
    fail(Errc::PTooSmall, "p = " + std::to_string(p) + " must exceed d(N+eps)r = " + std::to_string(bound) +
                              " (d=" + std::to_string(c.d) + ", N=" + std::to_string(c.N) +
                              ", eps=" + std::to_string(c.eps) + ", r=" + std::to_string(r) + ")");
  }
  return c;
}

KerEta ker_eta_charpoly(const CurveSpec& c) {
  KerEta k;
  if (c.delta == 1) {
    k.cycle_type = {1};
    k.U = {1};
    k.P = {-1, 1};
    return k;
  }
  fp::Poly h(c.delta + 1, 0);
  h[0] = fp::submod(0, c.fd, c.p);
  h[c.delta] = 1;
  k.cycle_type = fp::factor_degrees(h, c.p);
  IntPoly det = {1};
  for (int e : k.cycle_type) det = int_mul(det, t_pow_minus_one(e));
  k.P = det;
  k.U = div_t_minus_one(det);
  if (int_mul(k.U, {-1, 1}) != det) fail(Errc::Internal, "U reconstruction failed");
  return k;
}

std::vector<std::int64_t> ker_eta_monic_closed_form(std::uint64_t p, int delta) {
  IntPoly u = {1};
  for (int i = 2; i <= delta; ++i) {
    if (delta % i != 0) continue;
    const int k = static_cast<int>(fp::multiplicative_order(p % i, i));
    const int reps = euler_phi(i) / k;
    for (int e = 0; e < reps; ++e) u = int_mul(u, t_pow_minus_one(k));
  }
  return u;
}

}  // namespace cz
