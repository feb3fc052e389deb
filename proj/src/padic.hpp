#pragma once

// Z/p^W with per-element absolute precision, and dense polynomials and
// matrices over it.

#include <gmp.h>
#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "error.hpp"

namespace cz {

inline constexpr int kMaxLimbs = 8;

class PElt;

class RingCtx {
 public:
  RingCtx(std::uint64_t p, int W);

  std::uint64_t p() const noexcept { return p_; }
  int W() const noexcept { return W_; }
  int limbs() const noexcept { return n_; }
  // Bit length of p^W.
  int bits() const noexcept { return bits_; }
  const mp_limb_t* power(int k) const { return pow_[k].data(); }
  const mpz_class& power_z(int k) const { return powz_[k]; }
  const mp_limb_t* modulus() const { return pow_[W_].data(); }
  const mpz_class& modulus_z() const { return powz_[W_]; }

  PElt zero() const;
  PElt one() const;
  PElt from_int(std::int64_t v) const;
  PElt from_mpz(const mpz_class& v) const;

 private:
  std::uint64_t p_;
  int W_;
  int n_;
  int bits_;
  std::vector<std::array<mp_limb_t, kMaxLimbs>> pow_;
  std::vector<mpz_class> powz_;
};

using RingPtr = std::shared_ptr<const RingCtx>;
RingPtr make_ring(std::uint64_t p, int W);

// Residue modulo p^W plus the number of trusted low p-adic digits. The
// context is held by raw pointer and must outlive the element.
class PElt {
 public:
  PElt() = default;
  explicit PElt(const RingCtx& ctx) : ctx_(&ctx), prec_(ctx.W()) {}

  const RingCtx& ctx() const { return *ctx_; }
  const RingCtx* ctx_ptr() const { return ctx_; }
  bool valid() const { return ctx_ != nullptr; }
  int prec() const { return prec_; }
  const mp_limb_t* limbs() const { return r_.data(); }
  mp_limb_t* limbs() { return r_.data(); }

  mpz_class residue() const;
  // Representative of the class mod p^prec in [0, p^prec).
  mpz_class lift() const;
  // Representative mod p^prec in (-p^prec/2, p^prec/2].
  mpz_class lift_symmetric() const;

  bool is_zero() const { return val_upto(prec_) >= prec_; }
  bool is_unit() const { return prec_ >= 1 && val_upto(1) == 0; }
  int valuation() const { return val_upto(prec_); }
  // min(valuation, prec, cap)
  int val_upto(int cap) const;

  PElt with_prec(int k) const;
  // Overrides the precision counter. Only for places where a global
  // argument guarantees more digits than local tracking can see.
  void assume_prec(int k);

  // Residues agree modulo p^min(prec).
  bool equals(const PElt& o) const;
  // Residues agree modulo p^k, ignoring the precision counters.
  bool equals_mod(const PElt& o, int k) const;

  PElt operator-() const;
  PElt& operator+=(const PElt& o);
  PElt& operator-=(const PElt& o);
  PElt& operator*=(const PElt& o);
  friend PElt operator+(PElt a, const PElt& b) { return a += b; }
  friend PElt operator-(PElt a, const PElt& b) { return a -= b; }
  friend PElt operator*(const PElt& a, const PElt& b);

 private:
  friend class RingCtx;
  const RingCtx* ctx_ = nullptr;
  std::array<mp_limb_t, kMaxLimbs> r_{};
  int prec_ = 0;
};

// Precision of a*b: min(W, prec(a) + v(b), prec(b) + v(a)) with valuations
// capped by the operands' own precisions.
int product_prec(const PElt& a, const PElt& b);

PElt elt_inv(const PElt& a);
PElt elt_div_p(const PElt& a, int v);
PElt elt_mul_int(const PElt& a, std::int64_t k);

class PPoly {
 public:
  PPoly() = default;
  PPoly(const RingCtx& ctx, std::size_t len);
  static PPoly from_ints(const RingCtx& ctx, const std::vector<std::int64_t>& c);

  const RingCtx& ctx() const { return *ctx_; }
  const RingCtx* ctx_ptr() const { return ctx_; }
  std::size_t size() const { return c_.size(); }
  PElt& operator[](std::size_t i) { return c_[i]; }
  const PElt& operator[](std::size_t i) const { return c_[i]; }
  // Zero beyond the stored length.
  PElt coeff(std::size_t i) const;
  std::vector<PElt>& coeffs() { return c_; }
  const std::vector<PElt>& coeffs() const { return c_; }
  void resize(std::size_t len);
  // Index of the last coefficient that is nonzero mod p^prec, -1 if none.
  int degree() const;
  int min_prec() const;
  PPoly truncated(std::size_t len) const;

 private:
  const RingCtx* ctx_ = nullptr;
  std::vector<PElt> c_;
};

PPoly operator+(const PPoly& a, const PPoly& b);
PPoly operator-(const PPoly& a, const PPoly& b);
PPoly operator*(const PPoly& a, const PPoly& b);
// Precision guaranteed for every coefficient of a*b.
int poly_product_prec(const PPoly& a, const PPoly& b);
PPoly poly_scale(const PPoly& a, const PElt& c);
PPoly poly_derivative(const PPoly& a);
PElt poly_eval(const PPoly& a, const PElt& x);
// The leading coefficient of b (at b.degree()) must be a unit.
void poly_divmod(const PPoly& a, const PPoly& b, PPoly& q, PPoly& r);
bool poly_equal_mod(const PPoly& a, const PPoly& b, int k);

// (R0, S0) with R0*F + S0*G = 1 mod p^W, deg R0 < deg G, deg S0 < deg F.
std::pair<PPoly, PPoly> poly_xgcd_lift(const RingCtx& ctx, const PPoly& F, const PPoly& G);

class PMat {
 public:
  PMat() = default;
  PMat(const RingCtx& ctx, int rows, int cols);
  static PMat identity(const RingCtx& ctx, int n);

  const RingCtx& ctx() const { return *ctx_; }
  const RingCtx* ctx_ptr() const { return ctx_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  PElt& at(int i, int j) { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  const PElt& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * cols_ + j]; }
  int min_prec() const;

 private:
  const RingCtx* ctx_ = nullptr;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<PElt> e_;
};

PMat operator*(const PMat& a, const PMat& b);
PMat operator+(const PMat& a, const PMat& b);
PMat operator-(const PMat& a, const PMat& b);
PMat mat_scale(const PMat& a, const PElt& c);
std::vector<PElt> mat_vec(const PMat& a, const std::vector<PElt>& v);
bool mat_equal_mod(const PMat& a, const PMat& b, int k);
PElt mat_trace(const PMat& a);
PPoly mat_charpoly(const PMat& m);

// Matrix-coefficient polynomial Q, ascending, with Q(nodes[i]) = values[i].
std::vector<PMat> vandermonde_solve(const std::vector<PElt>& nodes, const std::vector<PMat>& values);
PMat matpoly_eval(const std::vector<PMat>& q, const PElt& x);

namespace detail {

// Sum of products with a single reduction mod p^W at the end.
class MulAcc {
 public:
  explicit MulAcc(const RingCtx& ctx) : ctx_(&ctx), n_(ctx.limbs()) {}
  void clear() {
    for (int i = 0; i <= 2 * n_; ++i) acc_[i] = 0;
  }
  void add(const PElt& a, const PElt& b);
  // Writes the reduced sum with precision prec.
  void store(PElt& out, int prec) const;

 private:
  const RingCtx* ctx_;
  int n_;
  mp_limb_t acc_[2 * kMaxLimbs + 1] = {};
};

// Kronecker substitution helpers: residues are laid out in fixed-width bit
// slots of one long integer so that a GMP product yields all coefficient
// sums at once.
std::size_t kron_slot_bits(const RingCtx& ctx, std::size_t terms);
std::size_t kron_limbs(std::size_t len, std::size_t slot_bits);
void kron_pack(const PElt* c, std::size_t len, std::size_t slot_bits, mp_limb_t* out, std::size_t out_limbs);
void kron_unpack(const RingCtx& ctx, const mp_limb_t* src, std::size_t src_limbs, std::size_t slot_bits,
                 std::size_t count, PElt* out, int prec);

}  // namespace detail

}  // namespace cz
