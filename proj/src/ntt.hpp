#pragma once

// Multi-modular number theoretic transforms for products in Z/p^W[X].
// Coefficient sums are recovered exactly by CRT over word-size primes and
// then reduced mod p^W, so one forward transform per operand can serve many
// products (matrix polynomials, shared divisors).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "padic.hpp"

namespace cz::ntt {

using u64 = std::uint64_t;

class Plan {
 public:
  // Products whose result has at most len coefficients, each a sum of at
  // most terms products of residues. Empty when out of range of the tables.
  static std::optional<Plan> make(const RingCtx& ctx, std::size_t len, std::size_t terms);

  std::size_t size() const { return T_; }
  int primes() const { return static_cast<int>(q_.size()); }
  // Words of one transformed operand.
  std::size_t words() const { return T_ * q_.size(); }

  void forward(const PElt* c, std::size_t len, u64* out) const;
  // acc += a * b pointwise.
  void mul_acc(const u64* a, const u64* b, u64* acc) const;
  // Destroys data. Writes coefficients [0, count) reduced mod p^W.
  void inverse(u64* data, std::size_t count, PElt* out, int prec) const;

 private:
  const RingCtx* ctx_ = nullptr;
  std::size_t T_ = 0;
  int logT_ = 0;
  std::vector<int> q_;                // indices into the prime table
  std::vector<u64> scale_, scale_s_;  // per prime, with Shoup companions
  std::vector<mp_limb_t> radix_;      // q_0 ... q_{i-1} mod p^W, n limbs each
};

}  // namespace cz::ntt
