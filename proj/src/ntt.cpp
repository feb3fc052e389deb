#include "ntt.hpp"

#include <array>
#include <atomic>
#include <memory>
#include <mutex>

#include "fp.hpp"

namespace cz::ntt {

namespace {

using u128 = unsigned __int128;

constexpr int kTwoAdicity = 20;
constexpr int kPrimes = 24;

int bitlen(std::uint64_t v) { return v == 0 ? 0 : 64 - __builtin_clzll(v); }

u64 mulmod(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

u64 powmod(u64 a, u64 e, u64 q) {
  u64 r = 1;
  for (a %= q; e; e >>= 1, a = mulmod(a, a, q))
    if (e & 1) r = mulmod(r, a, q);
  return r;
}

u64 invmod(u64 a, u64 q) { return powmod(a, q - 2, q); }

// q in (2^61, 2^62). Values are kept lazily in [0, 2q) or [0, 4q).
struct Prime {
  u64 q = 0;
  u64 qinv = 0;  // -q^{-1} mod 2^64
  u64 root = 0;  // primitive 2^kTwoAdicity-th root of unity
  std::array<u64, kMaxLimbs> chunk{}, chunk_s{};  // 2^(64 j) mod q
  std::vector<u64> ginv, ginv_s;                   // q_j^{-1} mod q, j < own index

  std::atomic<int> levels{0};
  std::mutex grow;
  // twiddles of each level with their Shoup companions
  std::array<std::vector<u64>, kTwoAdicity> tw, tws, itw, itws;

  u64 shoup(u64 w) const { return static_cast<u64>((static_cast<u128>(w) << 64) / q); }
  // a * w mod q in [0, 2q) for any a < 2^64
  u64 mul_shoup(u64 a, u64 w, u64 ws) const {
    const u64 hi = static_cast<u64>((static_cast<u128>(a) * ws) >> 64);
    return a * w - hi * q;
  }
  // a * b / 2^64 mod q in [0, 2q) for a, b < 2q
  u64 redc(u64 a, u64 b) const {
    const u128 t = static_cast<u128>(a) * b;
    const u64 m = static_cast<u64>(t) * qinv;
    return static_cast<u64>((t + static_cast<u128>(m) * q) >> 64);
  }
  u64 fold2(u64 a) const { return a >= 2 * q ? a - 2 * q : a; }
  u64 fold1(u64 a) const { return a >= q ? a - q : a; }

  void ensure(int logT) {
    if (levels.load(std::memory_order_acquire) >= logT) return;
    std::lock_guard<std::mutex> lock(grow);
    for (int l = levels.load(std::memory_order_relaxed); l < logT; ++l) {
      // primitive 2^(l+1)-th roots of unity and their inverses
      const u64 w = powmod(root, u64{1} << (kTwoAdicity - l - 1), q);
      const u64 iw = invmod(w, q);
      const std::size_t len = std::size_t{1} << l;
      tw[l].resize(len);
      tws[l].resize(len);
      itw[l].resize(len);
      itws[l].resize(len);
      u64 a = 1, b = 1;
      for (std::size_t j = 0; j < len; ++j) {
        tw[l][j] = a;
        tws[l][j] = shoup(a);
        itw[l][j] = b;
        itws[l][j] = shoup(b);
        a = mulmod(a, w, q);
        b = mulmod(b, iw, q);
      }
    }
    levels.store(logT, std::memory_order_release);
  }
};

std::vector<std::unique_ptr<Prime>> make_primes() {
  std::vector<std::unique_ptr<Prime>> out;
  for (u64 c = (u64{1} << (62 - kTwoAdicity)) - 1; static_cast<int>(out.size()) < kPrimes; --c) {
    const u64 q = (c << kTwoAdicity) + 1;
    if (!fp::is_prime(q)) continue;
    auto P = std::make_unique<Prime>();
    P->q = q;
    u64 inv = q;
    for (int i = 0; i < 6; ++i) inv *= 2 - q * inv;
    P->qinv = u64{0} - inv;
    // x^((q-1)/2^k) has full order exactly when x is a non-residue
    for (u64 x = 2;; ++x) {
      if (powmod(x, (q - 1) / 2, q) == q - 1) {
        P->root = powmod(x, c, q);
        break;
      }
    }
    u64 x = 1;
    const u64 base = static_cast<u64>((static_cast<u128>(1) << 64) % q);
    for (std::size_t j = 0; j < P->chunk.size(); ++j) {
      P->chunk[j] = x;
      P->chunk_s[j] = P->shoup(x);
      x = mulmod(x, base, q);
    }
    for (const auto& prev : out) {
      const u64 g = invmod(prev->q % q, q);
      P->ginv.push_back(g);
      P->ginv_s.push_back(P->shoup(g));
    }
    out.push_back(std::move(P));
  }
  return out;
}

std::vector<std::unique_ptr<Prime>>& prime_table() {
  static std::vector<std::unique_ptr<Prime>> table = make_primes();
  return table;
}

// natural order in [0, 2q) to bit-reversed order in [0, 2q)
void dif(const Prime& P, u64* a, int logT) {
  const std::size_t T = std::size_t{1} << logT;
  const u64 q2 = 2 * P.q;
  for (int l = logT - 1; l >= 0; --l) {
    const std::size_t len = std::size_t{1} << l;
    const u64* w = P.tw[l].data();
    const u64* ws = P.tws[l].data();
    for (std::size_t i = 0; i < T; i += 2 * len) {
      u64* x = a + i;
      u64* y = a + i + len;
      for (std::size_t j = 0; j < len; ++j) {
        const u64 u = x[j], v = y[j];
        x[j] = P.fold2(u + v);
        y[j] = P.mul_shoup(u - v + q2, w[j], ws[j]);
      }
    }
  }
}

// bit-reversed order in [0, 4q) to natural order in [0, 4q)
void dit(const Prime& P, u64* a, int logT) {
  const std::size_t T = std::size_t{1} << logT;
  const u64 q2 = 2 * P.q;
  for (int l = 0; l < logT; ++l) {
    const std::size_t len = std::size_t{1} << l;
    const u64* w = P.itw[l].data();
    const u64* ws = P.itws[l].data();
    for (std::size_t i = 0; i < T; i += 2 * len) {
      u64* x = a + i;
      u64* y = a + i + len;
      for (std::size_t j = 0; j < len; ++j) {
        const u64 u = P.fold2(x[j]), t = P.mul_shoup(y[j], w[j], ws[j]);
        x[j] = u + t;
        y[j] = u - t + q2;
      }
    }
  }
}

}  // namespace

std::optional<Plan> Plan::make(const RingCtx& ctx, std::size_t len, std::size_t terms) {
  int logT = 0;
  while ((std::size_t{1} << logT) < len) ++logT;
  if (logT > kTwoAdicity) return std::nullopt;
  auto& table = prime_table();
  // each prime exceeds 2^61
  const int need = 2 * ctx.bits() + bitlen(terms) + 1;
  const int K = (need + 60) / 61;
  if (K > static_cast<int>(table.size())) return std::nullopt;

  Plan plan;
  plan.ctx_ = &ctx;
  plan.logT_ = logT;
  plan.T_ = std::size_t{1} << logT;
  const int n = ctx.limbs();
  mpz_class Q = 1, r;
  for (int k = 0; k < K; ++k) {
    Prime& P = *table[k];
    P.ensure(logT);
    plan.q_.push_back(k);
    // undoes 1/T from the inverse transform and 2^-64 from the pointwise products
    const u64 R = static_cast<u64>((static_cast<u128>(1) << 64) % P.q);
    const u64 sc = mulmod(R, invmod(plan.T_ % P.q, P.q), P.q);
    plan.scale_.push_back(sc);
    plan.scale_s_.push_back(P.shoup(sc));
    mpz_mod(r.get_mpz_t(), Q.get_mpz_t(), ctx.modulus_z().get_mpz_t());
    std::vector<mp_limb_t> limbs(n, 0);
    mpz_export(limbs.data(), nullptr, -1, sizeof(mp_limb_t), 0, 0, r.get_mpz_t());
    plan.radix_.insert(plan.radix_.end(), limbs.begin(), limbs.end());
    Q *= P.q;
  }
  return plan;
}

void Plan::forward(const PElt* c, std::size_t len, u64* out) const {
  auto& table = prime_table();
  const int n = ctx_->limbs();
  for (int k = 0; k < primes(); ++k) {
    const Prime& P = *table[q_[k]];
    u64* a = out + k * T_;
    for (std::size_t i = 0; i < len; ++i) {
      const mp_limb_t* x = c[i].limbs();
      u64 s = P.mul_shoup(x[0], 1, P.chunk_s[0]);
      for (int j = 1; j < n; ++j) s = P.fold2(s + P.mul_shoup(x[j], P.chunk[j], P.chunk_s[j]));
      a[i] = s;
    }
    for (std::size_t i = len; i < T_; ++i) a[i] = 0;
    dif(P, a, logT_);
  }
}

void Plan::mul_acc(const u64* a, const u64* b, u64* acc) const {
  auto& table = prime_table();
  for (int k = 0; k < primes(); ++k) {
    const Prime& P = *table[q_[k]];
    const std::size_t o = k * T_;
    for (std::size_t i = 0; i < T_; ++i) acc[o + i] = P.fold2(acc[o + i] + P.redc(a[o + i], b[o + i]));
  }
}

void Plan::inverse(u64* data, std::size_t count, PElt* out, int prec) const {
  auto& table = prime_table();
  const int K = primes();
  const int n = ctx_->limbs();
  for (int k = 0; k < K; ++k) {
    const Prime& P = *table[q_[k]];
    u64* a = data + k * T_;
    dit(P, a, logT_);
    for (std::size_t i = 0; i < count; ++i) a[i] = P.fold1(P.mul_shoup(a[i], scale_[k], scale_s_[k]));
  }
  std::vector<u64> v(K);
  mp_limb_t acc[kMaxLimbs + 1], quot[2];
  for (std::size_t i = 0; i < count; ++i) {
    // mixed radix digits of the exact sum
    for (int k = 0; k < K; ++k) {
      const Prime& P = *table[q_[k]];
      u64 t = data[k * T_ + i];
      for (int j = 0; j < k; ++j) {
        const u64 vj = P.fold1(v[j]);
        t = P.fold1(P.mul_shoup(t + P.q - vj, P.ginv[q_[j]], P.ginv_s[q_[j]]));
      }
      v[k] = t;
    }
    for (int j = 0; j <= n; ++j) acc[j] = 0;
    for (int k = 0; k < K; ++k) acc[n] += mpn_addmul_1(acc, radix_.data() + k * n, n, v[k]);
    PElt e(*ctx_);
    if (n == 1) {
      const u128 x = (static_cast<u128>(acc[1]) << 64) | acc[0];
      e.limbs()[0] = static_cast<mp_limb_t>(x % ctx_->modulus()[0]);
    } else {
      mpn_tdiv_qr(quot, e.limbs(), 0, acc, n + 1, ctx_->modulus(), n);
    }
    e.assume_prec(prec);
    out[i] = e;
  }
}

}  // namespace cz::ntt
