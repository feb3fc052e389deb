#pragma once

// Word-size arithmetic over F_p and small dense polynomials over F_p.

#include <cstdint>
#include <vector>

namespace cz::fp {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) { u64 s = a + b; return (s >= p || s < a) ? s - p : s; }
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }
u64 powmod(u64 a, u64 e, u64 p);
u64 invmod(u64 a, u64 p);
u64 reduce(std::int64_t v, u64 p);

// Miller-Rabin with a base set that is exact for every 64-bit input.
bool is_prime(u64 n);

// Order of a in (Z/m)^*; requires gcd(a, m) = 1 and m >= 1.
u64 multiplicative_order(u64 a, u64 m);

// Ascending coefficients, no trailing zeros (the zero polynomial is empty).
using Poly = std::vector<u64>;

void trim(Poly& f);
int degree(const Poly& f);
Poly add(const Poly& a, const Poly& b, u64 p);
Poly sub(const Poly& a, const Poly& b, u64 p);
Poly mul(const Poly& a, const Poly& b, u64 p);
Poly scale(const Poly& a, u64 c, u64 p);
Poly derivative(const Poly& a, u64 p);
void divmod(const Poly& a, const Poly& b, u64 p, Poly& q, Poly& r);
Poly mod(const Poly& a, const Poly& b, u64 p);
Poly make_monic(const Poly& a, u64 p);
Poly gcd(Poly a, Poly b, u64 p);
// Returns monic g = s*a + t*b.
Poly xgcd(const Poly& a, const Poly& b, u64 p, Poly& s, Poly& t);
Poly powmod(const Poly& base, u64 e, const Poly& m, u64 p);
u64 eval(const Poly& f, u64 x, u64 p);

// Degrees of the irreducible factors of a squarefree f, ascending, with
// multiplicity (distinct-degree factorization).
std::vector<int> factor_degrees(const Poly& f, u64 p);
bool is_irreducible(const Poly& f, u64 p);

}  // namespace cz::fp
