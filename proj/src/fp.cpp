#include "fp.hpp"

#include <algorithm>

#include "error.hpp"

namespace cz::fp {

u64 powmod(u64 a, u64 e, u64 p) {
  u64 r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  // extended Euclid on signed 128-bit values
  __int128 r0 = p, r1 = a % p, s0 = 0, s1 = 1;
  while (r1 != 0) {
    __int128 q = r0 / r1;
    __int128 t = r0 - q * r1; r0 = r1; r1 = t;
    t = s0 - q * s1; s0 = s1; s1 = t;
  }
  if (r0 != 1) fail(Errc::NonUnit, "element is not invertible mod p");
  s0 %= static_cast<__int128>(p);
  if (s0 < 0) s0 += p;
  return static_cast<u64>(s0);
}

u64 reduce(std::int64_t v, u64 p) {
  __int128 m = static_cast<__int128>(v) % static_cast<__int128>(p);
  if (m < 0) m += p;
  return static_cast<u64>(m);
}

bool is_prime(u64 n) {
  if (n < 2) return false;
  static const u64 small[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : small) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) { d >>= 1; ++s; }
  for (u64 a : small) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) { composite = false; break; }
    }
    if (composite) return false;
  }
  return true;
}

u64 multiplicative_order(u64 a, u64 m) {
  if (m == 1) return 1;
  a %= m;
  u64 x = a, k = 1;
  while (x != 1) {
    x = mulmod(x, a, m);
    ++k;
    if (k > m) fail(Errc::InvalidArgument, "multiplicative_order: not a unit");
  }
  return k;
}

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly add(const Poly& a, const Poly& b, u64 p) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] = addmod(c[i], b[i], p);
  trim(c);
  return c;
}

Poly sub(const Poly& a, const Poly& b, u64 p) {
  Poly c(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) c[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) c[i] = submod(c[i], b[i], p);
  trim(c);
  return c;
}

Poly mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] = addmod(c[i + j], mulmod(a[i], b[j], p), p);
  }
  trim(c);
  return c;
}

Poly scale(const Poly& a, u64 c, u64 p) {
  Poly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mulmod(a[i], c, p);
  trim(r);
  return r;
}

Poly derivative(const Poly& a, u64 p) {
  if (a.size() <= 1) return {};
  Poly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = mulmod(a[i], i % p, p);
  trim(r);
  return r;
}

void divmod(const Poly& a, const Poly& b, u64 p, Poly& q, Poly& r) {
  if (b.empty()) fail(Errc::InvalidArgument, "polynomial division by zero");
  r = a;
  trim(r);
  q.clear();
  if (r.size() < b.size()) return;
  q.assign(r.size() - b.size() + 1, 0);
  u64 inv_lead = invmod(b.back(), p);
  for (size_t k = r.size(); k-- >= b.size();) {
    u64 c = mulmod(r[k], inv_lead, p);
    size_t shift = k - (b.size() - 1);
    q[shift] = c;
    if (c != 0) {
      for (size_t i = 0; i < b.size(); ++i) r[shift + i] = submod(r[shift + i], mulmod(c, b[i], p), p);
    }
    if (k == 0) break;
  }
  trim(r);
  trim(q);
}

Poly mod(const Poly& a, const Poly& b, u64 p) {
  Poly q, r;
  divmod(a, b, p, q, r);
  return r;
}

Poly make_monic(const Poly& a, u64 p) {
  if (a.empty()) return a;
  return scale(a, invmod(a.back(), p), p);
}

Poly gcd(Poly a, Poly b, u64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a, p);
}

Poly xgcd(const Poly& a, const Poly& b, u64 p, Poly& s, Poly& t) {
  Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    Poly q, r;
    divmod(r0, r1, p, q, r);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    r0 = std::move(r1); r1 = std::move(r);
    s0 = std::move(s1); s1 = std::move(s2);
    t0 = std::move(t1); t1 = std::move(t2);
  }
  if (r0.empty()) {
    s = std::move(s0);
    t = std::move(t0);
    return r0;
  }
  u64 c = invmod(r0.back(), p);
  s = scale(s0, c, p);
  t = scale(t0, c, p);
  return scale(r0, c, p);
}

Poly powmod(const Poly& base, u64 e, const Poly& m, u64 p) {
  Poly result = mod(Poly{1}, m, p);
  Poly b = mod(base, m, p);
  while (e) {
    if (e & 1) result = mod(mul(result, b, p), m, p);
    e >>= 1;
    if (e) b = mod(mul(b, b, p), m, p);
  }
  return result;
}

u64 eval(const Poly& f, u64 x, u64 p) {
  u64 acc = 0;
  for (size_t i = f.size(); i-- > 0;) acc = addmod(mulmod(acc, x, p), f[i], p);
  return acc;
}

std::vector<int> factor_degrees(const Poly& f_in, u64 p) {
  Poly f = make_monic(f_in, p);
  std::vector<int> out;
  if (degree(f) <= 0) return out;
  const Poly x = {0, 1};
  Poly xq = x;  // x^(p^k) mod f
  for (int k = 1; 2 * k <= degree(f); ++k) {
    xq = powmod(xq, p, f, p);
    Poly g = gcd(f, sub(xq, x, p), p);
    int dg = degree(g);
    if (dg > 0) {
      for (int c = 0; c < dg / k; ++c) out.push_back(k);
      Poly q, r;
      divmod(f, g, p, q, r);
      f = q;
      xq = mod(xq, f, p);
    }
  }
  if (degree(f) > 0) out.push_back(degree(f));
  std::sort(out.begin(), out.end());
  return out;
}

bool is_irreducible(const Poly& f, u64 p) {
  if (degree(f) <= 0) return false;
  if (gcd(f, derivative(f, p), p).size() != 1) return false;
  auto degs = factor_degrees(f, p);
  return degs.size() == 1;
}

}  // namespace cz::fp
