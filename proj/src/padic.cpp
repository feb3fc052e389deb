#include "padic.hpp"

#include <algorithm>
#include <cstring>
#include <string>

#include "fp.hpp"

namespace cz {

namespace {

using u128 = unsigned __int128;

int bitlen(std::uint64_t v) { return v == 0 ? 0 : 64 - __builtin_clzll(v); }

void limbs_from_mpz(const mpz_class& z, mp_limb_t* out, int n) {
  std::memset(out, 0, sizeof(mp_limb_t) * n);
  std::size_t sz = mpz_size(z.get_mpz_t());
  const mp_limb_t* src = mpz_limbs_read(z.get_mpz_t());
  for (std::size_t i = 0; i < sz && i < static_cast<std::size_t>(n); ++i) out[i] = src[i];
}

mpz_class mpz_from_limbs(const mp_limb_t* src, int n) {
  mpz_class z;
  mp_limb_t* w = mpz_limbs_write(z.get_mpz_t(), n);
  for (int i = 0; i < n; ++i) w[i] = src[i];
  int used = n;
  while (used > 0 && w[used - 1] == 0) --used;
  mpz_limbs_finish(z.get_mpz_t(), used);
  return z;
}

}  // namespace

// ---------------------------------------------------------------- RingCtx

RingCtx::RingCtx(std::uint64_t p, int W) : p_(p), W_(W) {
  if (p < 3 || !fp::is_prime(p)) fail(Errc::NotPrime, "p = " + std::to_string(p) + " is not an odd prime");
  if (W < 1) fail(Errc::InvalidArgument, "working precision must be positive");
  mpz_class m = 1;
  powz_.push_back(m);
  for (int k = 1; k <= W; ++k) {
    m *= static_cast<unsigned long>(p);
    powz_.push_back(m);
  }
  if (mpz_size(m.get_mpz_t()) > static_cast<std::size_t>(kMaxLimbs)) {
    fail(Errc::Unsupported, "p^W exceeds the fixed residue width");
  }
  n_ = static_cast<int>(mpz_size(m.get_mpz_t()));
  bits_ = static_cast<int>(mpz_sizeinbase(m.get_mpz_t(), 2));
  pow_.resize(W + 1);
  for (int k = 0; k <= W; ++k) limbs_from_mpz(powz_[k], pow_[k].data(), kMaxLimbs);
}

RingPtr make_ring(std::uint64_t p, int W) { return std::make_shared<const RingCtx>(p, W); }

PElt RingCtx::zero() const { return PElt(*this); }

PElt RingCtx::one() const {
  PElt e(*this);
  e.r_[0] = 1;
  return e;
}

PElt RingCtx::from_int(std::int64_t v) const {
  if (n_ == 1) {
    PElt e(*this);
    std::uint64_t m = pow_[W_][0];
    __int128 t = static_cast<__int128>(v) % static_cast<__int128>(m);
    if (t < 0) t += m;
    e.r_[0] = static_cast<mp_limb_t>(t);
    return e;
  }
  return from_mpz(mpz_class(static_cast<long>(v)));
}

PElt RingCtx::from_mpz(const mpz_class& v) const {
  PElt e(*this);
  mpz_class t;
  mpz_mod(t.get_mpz_t(), v.get_mpz_t(), powz_[W_].get_mpz_t());
  limbs_from_mpz(t, e.r_.data(), n_);
  return e;
}

// ---------------------------------------------------------------- PElt

mpz_class PElt::residue() const { return mpz_from_limbs(r_.data(), ctx_->limbs()); }

mpz_class PElt::lift() const {
  mpz_class z = residue();
  mpz_mod(z.get_mpz_t(), z.get_mpz_t(), ctx_->power_z(prec_).get_mpz_t());
  return z;
}

mpz_class PElt::lift_symmetric() const {
  mpz_class z = lift();
  const mpz_class& m = ctx_->power_z(prec_);
  if (2 * z > m) z -= m;
  return z;
}

int PElt::val_upto(int cap) const {
  cap = std::min(cap, prec_);
  if (cap <= 0) return 0;
  const int n = ctx_->limbs();
  const mp_limb_t p = ctx_->p();
  if (n == 1) {
    std::uint64_t x = r_[0];
    int v = 0;
    while (v < cap) {
      if (x == 0) return cap;
      if (x % p != 0) return v;
      x /= p;
      ++v;
    }
    return v;
  }
  std::array<mp_limb_t, kMaxLimbs> t = r_;
  int used = n;
  int v = 0;
  while (v < cap) {
    while (used > 0 && t[used - 1] == 0) --used;
    if (used == 0) return cap;
    if (mpn_mod_1(t.data(), used, p) != 0) return v;
    mpn_divexact_1(t.data(), t.data(), used, p);
    ++v;
  }
  return v;
}

PElt PElt::with_prec(int k) const {
  PElt e = *this;
  e.prec_ = std::max(0, std::min(prec_, k));
  return e;
}

void PElt::assume_prec(int k) {
  if (k < 0 || k > ctx_->W()) fail(Errc::Internal, "assume_prec out of range");
  prec_ = k;
}

bool PElt::equals_mod(const PElt& o, int k) const {
  PElt d = *this - o;
  d.prec_ = k;
  return d.is_zero();
}

bool PElt::equals(const PElt& o) const { return equals_mod(o, std::min(prec_, o.prec_)); }

PElt PElt::operator-() const {
  PElt e(*ctx_);
  e.prec_ = prec_;
  const int n = ctx_->limbs();
  bool zero = true;
  for (int i = 0; i < n; ++i) zero = zero && r_[i] == 0;
  if (!zero) mpn_sub_n(e.r_.data(), ctx_->modulus(), r_.data(), n);
  return e;
}

PElt& PElt::operator+=(const PElt& o) {
  const int n = ctx_->limbs();
  const mp_limb_t* m = ctx_->modulus();
  if (n == 1) {
    u128 s = static_cast<u128>(r_[0]) + o.r_[0];
    if (s >= m[0]) s -= m[0];
    r_[0] = static_cast<mp_limb_t>(s);
  } else {
    mp_limb_t carry = mpn_add_n(r_.data(), r_.data(), o.r_.data(), n);
    if (carry || mpn_cmp(r_.data(), m, n) >= 0) mpn_sub_n(r_.data(), r_.data(), m, n);
  }
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

PElt& PElt::operator-=(const PElt& o) {
  const int n = ctx_->limbs();
  const mp_limb_t* m = ctx_->modulus();
  if (n == 1) {
    r_[0] = r_[0] >= o.r_[0] ? r_[0] - o.r_[0] : r_[0] + (m[0] - o.r_[0]);
  } else {
    mp_limb_t borrow = mpn_sub_n(r_.data(), r_.data(), o.r_.data(), n);
    if (borrow) mpn_add_n(r_.data(), r_.data(), m, n);
  }
  prec_ = std::min(prec_, o.prec_);
  return *this;
}

int product_prec(const PElt& a, const PElt& b) {
  const int W = a.ctx().W();
  int res = W;
  if (b.prec() < W) res = std::min(res, b.prec() + a.val_upto(W - b.prec()));
  if (a.prec() < W) res = std::min(res, a.prec() + b.val_upto(W - a.prec()));
  return res;
}

PElt operator*(const PElt& a, const PElt& b) {
  const RingCtx& ctx = *a.ctx_;
  PElt e(ctx);
  const int n = ctx.limbs();
  const mp_limb_t* m = ctx.modulus();
  if (n == 1) {
    e.r_[0] = static_cast<mp_limb_t>(static_cast<u128>(a.r_[0]) * b.r_[0] % m[0]);
  } else {
    mp_limb_t prod[2 * kMaxLimbs];
    mp_limb_t q[kMaxLimbs + 1];
    mpn_mul_n(prod, a.r_.data(), b.r_.data(), n);
    mpn_tdiv_qr(q, e.r_.data(), 0, prod, 2 * n, m, n);
  }
  e.prec_ = product_prec(a, b);
  return e;
}

PElt& PElt::operator*=(const PElt& o) { return *this = *this * o; }

PElt elt_inv(const PElt& a) {
  if (!a.is_unit()) fail(Errc::NonUnit, "inverse of a non-unit");
  const RingCtx& ctx = a.ctx();
  PElt e(ctx);
  if (ctx.limbs() == 1) {
    e.limbs()[0] = fp::invmod(a.limbs()[0], ctx.modulus()[0]);
  } else {
    mpz_class z = a.residue(), inv;
    mpz_invert(inv.get_mpz_t(), z.get_mpz_t(), ctx.modulus_z().get_mpz_t());
    e = ctx.from_mpz(inv);
  }
  e.assume_prec(a.prec());
  return e;
}

PElt elt_div_p(const PElt& a, int v) {
  if (v < 0) fail(Errc::InvalidArgument, "negative division exponent");
  if (v > a.prec()) fail(Errc::PrecisionExhausted, "division by p^v exceeds known precision");
  if (a.val_upto(v) < v) fail(Errc::InexactDivision, "residue is not divisible by p^v");
  PElt e = a;
  const int n = a.ctx().limbs();
  for (int k = 0; k < v; ++k) mpn_divexact_1(e.limbs(), e.limbs(), n, a.ctx().p());
  e.assume_prec(a.prec() - v);
  return e;
}

PElt elt_mul_int(const PElt& a, std::int64_t k) { return a * a.ctx().from_int(k); }

// ---------------------------------------------------------------- PPoly

PPoly::PPoly(const RingCtx& ctx, std::size_t len) : ctx_(&ctx), c_(len, ctx.zero()) {}

PPoly PPoly::from_ints(const RingCtx& ctx, const std::vector<std::int64_t>& c) {
  PPoly f(ctx, c.size());
  for (std::size_t i = 0; i < c.size(); ++i) f.c_[i] = ctx.from_int(c[i]);
  return f;
}

PElt PPoly::coeff(std::size_t i) const { return i < c_.size() ? c_[i] : ctx_->zero(); }

void PPoly::resize(std::size_t len) { c_.resize(len, ctx_->zero()); }

int PPoly::degree() const {
  for (std::size_t i = c_.size(); i-- > 0;) {
    if (!c_[i].is_zero()) return static_cast<int>(i);
  }
  return -1;
}

int PPoly::min_prec() const {
  int m = ctx_->W();
  for (const auto& e : c_) m = std::min(m, e.prec());
  return m;
}

PPoly PPoly::truncated(std::size_t len) const {
  PPoly r = *this;
  if (r.c_.size() > len) r.c_.resize(len);
  return r;
}

PPoly operator+(const PPoly& a, const PPoly& b) {
  const RingCtx& ctx = a.ctx_ptr() ? a.ctx() : b.ctx();
  PPoly r(ctx, std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

PPoly operator-(const PPoly& a, const PPoly& b) {
  const RingCtx& ctx = a.ctx_ptr() ? a.ctx() : b.ctx();
  PPoly r(ctx, std::max(a.size(), b.size()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
  return r;
}

namespace {

constexpr std::size_t kKroneckerThreshold = 32;

int min_val(const PPoly& a, int cap) {
  int v = cap;
  for (std::size_t i = 0; i < a.size() && v > 0; ++i) v = std::min(v, a[i].val_upto(cap));
  return v;
}

}  // namespace

int poly_product_prec(const PPoly& a, const PPoly& b) {
  const int W = a.ctx().W();
  const int pa = a.min_prec(), pb = b.min_prec();
  int prec = W;
  if (pb < W) prec = std::min(prec, pb + min_val(a, W - pb));
  if (pa < W) prec = std::min(prec, pa + min_val(b, W - pa));
  return prec;
}

namespace {

PPoly kron_mul(const PPoly& a, const PPoly& b) {
  const RingCtx& ctx = a.ctx();
  const int prec = poly_product_prec(a, b);

  const std::size_t slot = detail::kron_slot_bits(ctx, std::min(a.size(), b.size()));
  const std::size_t la = detail::kron_limbs(a.size(), slot);
  const std::size_t lb = detail::kron_limbs(b.size(), slot);
  std::vector<mp_limb_t> A(la), B(lb), C(la + lb);
  detail::kron_pack(a.coeffs().data(), a.size(), slot, A.data(), la);
  detail::kron_pack(b.coeffs().data(), b.size(), slot, B.data(), lb);
  if (la >= lb) mpn_mul(C.data(), A.data(), la, B.data(), lb);
  else mpn_mul(C.data(), B.data(), lb, A.data(), la);
  PPoly r(ctx, a.size() + b.size() - 1);
  detail::kron_unpack(ctx, C.data(), C.size(), slot, r.size(), r.coeffs().data(), prec);
  return r;
}

}  // namespace

PPoly operator*(const PPoly& a, const PPoly& b) {
  const RingCtx& ctx = a.ctx_ptr() ? a.ctx() : b.ctx();
  if (a.size() == 0 || b.size() == 0) return PPoly(ctx, 0);
  if (std::min(a.size(), b.size()) >= kKroneckerThreshold) return kron_mul(a, b);
  PPoly r(ctx, a.size() + b.size() - 1);
  const bool exact = a.min_prec() == ctx.W() && b.min_prec() == ctx.W();
  detail::MulAcc acc(ctx);
  for (std::size_t k = 0; k < r.size(); ++k) {
    acc.clear();
    int prec = ctx.W();
    const std::size_t lo = k + 1 > b.size() ? k + 1 - b.size() : 0, hi = std::min(k, a.size() - 1);
    for (std::size_t i = lo; i <= hi; ++i) {
      acc.add(a[i], b[k - i]);
      if (!exact) prec = std::min(prec, product_prec(a[i], b[k - i]));
    }
    acc.store(r[k], prec);
  }
  return r;
}

PPoly poly_scale(const PPoly& a, const PElt& c) {
  PPoly r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a[i] * c;
  return r;
}

PPoly poly_derivative(const PPoly& a) {
  if (a.size() <= 1) return PPoly(a.ctx(), 0);
  PPoly r(a.ctx(), a.size() - 1);
  for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = elt_mul_int(a[i], static_cast<std::int64_t>(i));
  return r;
}

PElt poly_eval(const PPoly& a, const PElt& x) {
  PElt acc = x.ctx().zero();
  for (std::size_t i = a.size(); i-- > 0;) acc = acc * x + a[i];
  return acc;
}

void poly_divmod(const PPoly& a, const PPoly& b, PPoly& q, PPoly& r) {
  const int db = b.degree();
  if (db < 0) fail(Errc::InvalidArgument, "polynomial division by zero");
  if (!b[db].is_unit()) fail(Errc::NonUnit, "divisor leading coefficient is not a unit");
  const PElt inv = elt_inv(b[db]);
  r = a;
  const int da = static_cast<int>(a.size()) - 1;
  if (da < db) {
    q = PPoly(a.ctx(), 0);
    return;
  }
  q = PPoly(a.ctx(), da - db + 1);
  for (int k = da; k >= db; --k) {
    PElt c = r[k] * inv;
    q[k - db] = c;
    for (int i = 0; i <= db; ++i) r[k - db + i] -= c * b[i];
  }
  r.resize(db);
}

bool poly_equal_mod(const PPoly& a, const PPoly& b, int k) {
  std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!a.coeff(i).equals_mod(b.coeff(i), k)) return false;
  }
  return true;
}

std::pair<PPoly, PPoly> poly_xgcd_lift(const RingCtx& ctx, const PPoly& F, const PPoly& G) {
  const std::uint64_t p = ctx.p();
  auto to_fp = [&](const PPoly& f) {
    fp::Poly g(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = mpz_fdiv_ui(f[i].residue().get_mpz_t(), p);
    fp::trim(g);
    return g;
  };
  auto from_fp = [&](const fp::Poly& f, std::size_t len) {
    PPoly g(ctx, std::max(len, f.size()));
    for (std::size_t i = 0; i < f.size(); ++i) g[i] = ctx.from_int(static_cast<std::int64_t>(f[i]));
    g.resize(len);
    return g;
  };
  const int dF = F.degree(), dG = G.degree();
  if (dF < 0 || dG < 0) fail(Errc::NotCoprime, "zero polynomial in Bezout lift");
  fp::Poly f = to_fp(F), g = to_fp(G), s, t;
  if (fp::degree(f) != dF || fp::degree(g) != dG) {
    fail(Errc::NonUnit, "leading coefficient vanishes mod p in Bezout lift");
  }
  fp::Poly h = fp::xgcd(f, g, p, s, t);
  if (fp::degree(h) != 0) fail(Errc::NotCoprime, "polynomials share a factor mod p");

  PPoly Fw = F.truncated(dF + 1), Gw = G.truncated(dG + 1);
  PPoly S = from_fp(t, std::max(dF, 1));
  const PPoly one = PPoly::from_ints(ctx, {1});
  PPoly R(ctx, 0), quot(ctx, 0), rem(ctx, 0);
  // S_{k+1} = S_k (1 + E) mod F doubles the number of correct digits.
  for (int digits = 1;; digits *= 2) {
    poly_divmod(one - S * Gw, Fw, R, rem);
    if (digits >= ctx.W()) break;
    PPoly E = one - R * Fw - S * Gw;
    poly_divmod(S * (one + E), Fw, quot, S);
  }
  R.resize(std::max(dG, 1));
  S.resize(std::max(dF, 1));
  PPoly check = one - R * Fw - S * Gw;
  for (std::size_t i = 0; i < check.size(); ++i) {
    if (check[i].valuation() < ctx.W()) fail(Errc::Internal, "Bezout lift failed to converge");
  }
  return {R, S};
}

// ---------------------------------------------------------------- PMat

PMat::PMat(const RingCtx& ctx, int rows, int cols)
    : ctx_(&ctx), rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols, ctx.zero()) {}

PMat PMat::identity(const RingCtx& ctx, int n) {
  PMat m(ctx, n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = ctx.one();
  return m;
}

int PMat::min_prec() const {
  int m = ctx_->W();
  for (const auto& e : e_) m = std::min(m, e.prec());
  return m;
}

PMat operator*(const PMat& a, const PMat& b) {
  if (a.cols() != b.rows()) fail(Errc::InvalidArgument, "matrix shape mismatch");
  const RingCtx& ctx = a.ctx();
  PMat c(ctx, a.rows(), b.cols());
  const bool exact = a.min_prec() == ctx.W() && b.min_prec() == ctx.W();
  detail::MulAcc acc(ctx);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) {
      acc.clear();
      int prec = ctx.W();
      for (int k = 0; k < a.cols(); ++k) {
        acc.add(a.at(i, k), b.at(k, j));
        if (!exact) prec = std::min(prec, product_prec(a.at(i, k), b.at(k, j)));
      }
      acc.store(c.at(i, j), prec);
    }
  }
  return c;
}

PMat operator+(const PMat& a, const PMat& b) {
  PMat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) += b.at(i, j);
  return c;
}

PMat operator-(const PMat& a, const PMat& b) {
  PMat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) -= b.at(i, j);
  return c;
}

PMat mat_scale(const PMat& a, const PElt& s) {
  PMat c = a;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c.at(i, j) = a.at(i, j) * s;
  return c;
}

std::vector<PElt> mat_vec(const PMat& a, const std::vector<PElt>& v) {
  std::vector<PElt> out(a.rows(), a.ctx().zero());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out[i] += a.at(i, j) * v[j];
  return out;
}

bool mat_equal_mod(const PMat& a, const PMat& b, int k) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (!a.at(i, j).equals_mod(b.at(i, j), k)) return false;
  return true;
}

PElt mat_trace(const PMat& a) {
  PElt t = a.ctx().zero();
  for (int i = 0; i < std::min(a.rows(), a.cols()); ++i) t += a.at(i, i);
  return t;
}

// Berkowitz: the characteristic polynomial of each leading principal
// submatrix is a Toeplitz transform of the previous one.
PPoly mat_charpoly(const PMat& m) {
  if (m.rows() != m.cols()) fail(Errc::InvalidArgument, "charpoly of a non-square matrix");
  const RingCtx& ctx = m.ctx();
  const int n = m.rows();
  std::vector<PElt> vect = {ctx.one()};  // descending coefficients
  for (int r = 0; r < n; ++r) {
    std::vector<PElt> q(r + 2, ctx.zero());
    q[0] = ctx.one();
    q[1] = -m.at(r, r);
    std::vector<PElt> col(r);
    for (int i = 0; i < r; ++i) col[i] = m.at(i, r);
    for (int k = 0; k < r; ++k) {
      PElt s = ctx.zero();
      for (int i = 0; i < r; ++i) s += m.at(r, i) * col[i];
      q[k + 2] = -s;
      if (k + 1 < r) {
        std::vector<PElt> next(r, ctx.zero());
        for (int i = 0; i < r; ++i)
          for (int l = 0; l < r; ++l) next[i] += m.at(i, l) * col[l];
        col = std::move(next);
      }
    }
    std::vector<PElt> out(r + 2, ctx.zero());
    for (int i = 0; i < r + 2; ++i)
      for (int j = 0; j <= std::min(i, r); ++j) out[i] += q[i - j] * vect[j];
    vect = std::move(out);
  }
  PPoly cp(ctx, n + 1);
  for (int k = 0; k <= n; ++k) cp[k] = vect[n - k];
  return cp;
}

std::vector<PMat> vandermonde_solve(const std::vector<PElt>& nodes, const std::vector<PMat>& values) {
  const std::size_t n = nodes.size();
  if (n == 0 || values.size() != n) fail(Errc::InvalidArgument, "vandermonde_solve: size mismatch");
  const RingCtx& ctx = nodes[0].ctx();
  std::vector<PMat> c = values;
  // divided differences
  for (std::size_t k = 1; k < n; ++k) {
    for (std::size_t i = n - 1; i >= k; --i) {
      PElt diff = nodes[i] - nodes[i - k];
      if (!diff.is_unit()) fail(Errc::SingularNodes, "interpolation nodes coincide mod p");
      c[i] = mat_scale(c[i] - c[i - 1], elt_inv(diff));
      if (i == k) break;
    }
  }
  // Newton form to monomial form
  const int rows = values[0].rows(), cols = values[0].cols();
  std::vector<PMat> q(n, PMat(ctx, rows, cols));
  q[0] = c[n - 1];
  std::size_t len = 1;
  for (std::size_t k = n - 1; k-- > 0;) {
    // q <- q*(X - x_k) + c_k
    std::vector<PMat> nq(len + 1, PMat(ctx, rows, cols));
    PElt neg = -nodes[k];
    for (std::size_t i = 0; i < len; ++i) {
      nq[i + 1] = nq[i + 1] + q[i];
      nq[i] = nq[i] + mat_scale(q[i], neg);
    }
    nq[0] = nq[0] + c[k];
    ++len;
    for (std::size_t i = 0; i < len; ++i) q[i] = nq[i];
  }
  return q;
}

PMat matpoly_eval(const std::vector<PMat>& q, const PElt& x) {
  PMat acc = q.back();
  for (std::size_t i = q.size() - 1; i-- > 0;) acc = mat_scale(acc, x) + q[i];
  return acc;
}

// ---------------------------------------------------------------- Kronecker

namespace detail {

void MulAcc::add(const PElt& a, const PElt& b) {
  if (n_ == 1) {
    // keep a running residue; one limb products reduce cheaply
    const mp_limb_t m = ctx_->modulus()[0];
    const u128 t = static_cast<u128>(a.limbs()[0]) * b.limbs()[0] % m + acc_[0];
    acc_[0] = static_cast<mp_limb_t>(t >= m ? t - m : t);
    return;
  }
  mp_limb_t prod[2 * kMaxLimbs];
  mpn_mul_n(prod, a.limbs(), b.limbs(), n_);
  acc_[2 * n_] += mpn_add_n(acc_, acc_, prod, 2 * n_);
}

void MulAcc::store(PElt& out, int prec) const {
  out = ctx_->zero();
  if (n_ == 1) {
    out.limbs()[0] = acc_[0];
  } else {
    mp_limb_t q[kMaxLimbs + 2];
    const int len = acc_[2 * n_] ? 2 * n_ + 1 : 2 * n_;
    mpn_tdiv_qr(q, out.limbs(), 0, acc_, len, ctx_->modulus(), n_);
  }
  out.assume_prec(prec);
}


std::size_t kron_slot_bits(const RingCtx& ctx, std::size_t terms) {
  return 2 * static_cast<std::size_t>(ctx.bits()) + bitlen(terms) + 1;
}

std::size_t kron_limbs(std::size_t len, std::size_t slot_bits) {
  return (len * slot_bits + 63) / 64 + kMaxLimbs + 1;
}

void kron_pack(const PElt* c, std::size_t len, std::size_t slot_bits, mp_limb_t* out, std::size_t out_limbs) {
  std::memset(out, 0, sizeof(mp_limb_t) * out_limbs);
  if (len == 0) return;
  const int n = c[0].ctx().limbs();
  for (std::size_t i = 0; i < len; ++i) {
    const std::size_t off = i * slot_bits;
    const std::size_t li = off / 64;
    const unsigned sh = off % 64;
    const mp_limb_t* src = c[i].limbs();
    for (int k = 0; k < n; ++k) {
      out[li + k] |= src[k] << sh;
      if (sh) out[li + k + 1] |= src[k] >> (64 - sh);
    }
  }
}

void kron_unpack(const RingCtx& ctx, const mp_limb_t* src, std::size_t src_limbs, std::size_t slot_bits,
                 std::size_t count, PElt* out, int prec) {
  const int n = ctx.limbs();
  const std::size_t nb = (slot_bits + 63) / 64;
  std::vector<mp_limb_t> tmp(nb + 1), q(nb + 2);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t off = i * slot_bits;
    const std::size_t li = off / 64;
    const unsigned sh = off % 64;
    for (std::size_t k = 0; k <= nb; ++k) {
      mp_limb_t lo = li + k < src_limbs ? src[li + k] : 0;
      mp_limb_t hi = li + k + 1 < src_limbs ? src[li + k + 1] : 0;
      tmp[k] = sh ? (lo >> sh) | (hi << (64 - sh)) : lo;
    }
    const std::size_t rem_bits = slot_bits - 64 * (nb - 1);
    if (rem_bits < 64) tmp[nb - 1] &= (mp_limb_t(1) << rem_bits) - 1;
    std::size_t used = nb;
    while (used > 0 && tmp[used - 1] == 0) --used;
    PElt e(ctx);
    if (used < static_cast<std::size_t>(n) ||
        (used == static_cast<std::size_t>(n) && mpn_cmp(tmp.data(), ctx.modulus(), n) < 0)) {
      for (std::size_t k = 0; k < used; ++k) e.limbs()[k] = tmp[k];
    } else {
      mpn_tdiv_qr(q.data(), e.limbs(), 0, tmp.data(), used, ctx.modulus(), n);
    }
    e.assume_prec(prec);
    out[i] = e;
  }
}

}  // namespace detail

}  // namespace cz
