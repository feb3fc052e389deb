#include "oracle.hpp"

#include <numeric>
#include <string>

#include "error.hpp"
#include "fp.hpp"

namespace cz {

void SmallField::init(std::uint64_t p, int i) {
  if (i < 1 || i > 3) fail(Errc::InvalidArgument, "oracle fields have degree 1, 2 or 3");
  if (!fp::is_prime(p)) fail(Errc::NotPrime, "oracle characteristic must be prime");
  unsigned __int128 q = 1;
  for (int k = 0; k < i; ++k) {
    q *= p;
    if (q > kOracleMaxField) fail(Errc::TooLarge, "p^i exceeds the brute-force limit of 10^8");
  }
  p_ = p;
  i_ = i;
  q_ = static_cast<std::uint64_t>(q);
}

SmallField::SmallField(std::uint64_t p, int i) {
  init(p, i);
  // enumerate x^i + c_{i-1} x^{i-1} + ... + c_0 with c_0 fastest
  for (std::uint64_t idx = 0; idx < q_; ++idx) {
    std::vector<std::uint64_t> f(i + 1);
    std::uint64_t rest = idx;
    for (int k = 0; k < i; ++k) {
      f[k] = rest % p;
      rest /= p;
    }
    f[i] = 1;
    if (fp::is_irreducible(f, p)) {
      mod_ = f;
      return;
    }
  }
  fail(Errc::Internal, "no irreducible polynomial found");
}

SmallField::SmallField(std::uint64_t p, int i, const std::vector<std::uint64_t>& modulus) {
  init(p, i);
  if (static_cast<int>(modulus.size()) != i + 1 || modulus[i] != 1 || !fp::is_irreducible(modulus, p)) {
    fail(Errc::InvalidArgument, "field modulus must be monic irreducible of degree i");
  }
  mod_ = modulus;
}

SmallField::Elt SmallField::from_index(std::uint64_t idx) const {
  Elt a{0, 0, 0};
  for (int k = 0; k < i_; ++k) {
    a[k] = idx % p_;
    idx /= p_;
  }
  return a;
}

std::uint64_t SmallField::index(const Elt& a) const {
  std::uint64_t idx = 0;
  for (int k = i_; k-- > 0;) idx = idx * p_ + a[k];
  return idx;
}

SmallField::Elt SmallField::add(const Elt& a, const Elt& b) const {
  Elt c{0, 0, 0};
  for (int k = 0; k < i_; ++k) c[k] = fp::addmod(a[k], b[k], p_);
  return c;
}

SmallField::Elt SmallField::mul(const Elt& a, const Elt& b) const {
  if (i_ == 1) return Elt{fp::mulmod(a[0], b[0], p_), 0, 0};
  std::uint64_t t[5] = {0, 0, 0, 0, 0};
  for (int x = 0; x < i_; ++x)
    for (int y = 0; y < i_; ++y) t[x + y] = fp::addmod(t[x + y], fp::mulmod(a[x], b[y], p_), p_);
  for (int k = 2 * i_ - 2; k >= i_; --k) {
    const std::uint64_t c = t[k];
    if (c == 0) continue;
    t[k] = 0;
    for (int m = 0; m < i_; ++m) t[k - i_ + m] = fp::submod(t[k - i_ + m], fp::mulmod(c, mod_[m], p_), p_);
  }
  return Elt{t[0], t[1], t[2]};
}

SmallField::Elt SmallField::pow(Elt a, std::uint64_t e) const {
  Elt r = constant(1);
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t count_points(const CurveSpec& c, int i) { return count_points(c, SmallField(c.p, i)); }

std::uint64_t count_points(const CurveSpec& c, const SmallField& K) {
  if (K.p() != c.p) fail(Errc::InvalidArgument, "field characteristic differs from the curve's");
  const std::uint64_t q = K.size();
  const std::uint64_t m = std::gcd(static_cast<std::uint64_t>(c.r), q - 1);

  std::vector<unsigned char> is_power;
  if (m > 1) {
    is_power.assign(q, 0);
    for (std::uint64_t idx = 1; idx < q; ++idx) is_power[K.index(K.pow(K.from_index(idx), m))] = 1;
  }

  std::uint64_t affine = 0;
  for (std::uint64_t idx = 0; idx < q; ++idx) {
    const SmallField::Elt x = K.from_index(idx);
    SmallField::Elt fx = K.constant(0);
    for (std::size_t b = c.F.size(); b-- > 0;) fx = K.add(K.mul(fx, x), K.constant(c.F[b]));
    const std::uint64_t fi = K.index(fx);
    if (fi == 0) affine += 1;
    else if (m == 1 || is_power[fi]) affine += m;
  }

  std::uint64_t infinity = 0;
  const SmallField::Elt fd = K.constant(c.fd);
  for (std::uint64_t idx = 1; idx < q; ++idx) {
    if (K.pow(K.from_index(idx), static_cast<std::uint64_t>(c.delta)) == fd) ++infinity;
  }
  return affine + infinity;
}

}  // namespace cz
