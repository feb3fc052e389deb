#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace cz {

// Validated data of y^r = F(x) over F_p.
struct CurveSpec {
  std::uint64_t p = 0;
  int r = 0;
  std::vector<std::uint64_t> F;  // ascending, reduced mod p, size d+1
  int d = 0;
  int delta = 0;  // gcd(r, d)
  int eps = 0;    // 0 if delta == 1 else 1
  int g = 0;
  std::uint64_t fd = 0;
  int N = 0;
  bool N_overridden = false;

  int basis_size() const { return (d - 1) * (r - 1); }
  int jmin() const { return 1 + eps * r; }
  int jmax() const { return (1 + eps) * r - 1; }
  // Basis order: j outer, i inner.
  int basis_index(int i, int j) const { return (j - jmin()) * (d - 1) + i; }
};

CurveSpec curve_new(std::uint64_t p, int r, const std::vector<std::int64_t>& coeffs,
                    std::optional<int> N_override = std::nullopt);

int genus(int d, int r);
int choose_precision(int g, std::uint64_t p);
inline int choose_precision(const CurveSpec& c) { return choose_precision(c.g, c.p); }

// d(N + eps)r, the bound p must exceed.
std::uint64_t prime_bound(int d, int r, int eps, int N);

struct KerEta {
  std::vector<int> cycle_type;   // degrees of the irreducible factors of T^delta - f_d
  std::vector<std::int64_t> U;   // ascending, degree delta-1
  std::vector<std::int64_t> P;   // det(tI - P) = prod (t^e - 1), ascending
};

KerEta ker_eta_charpoly(const CurveSpec& c);
// U for f_d = 1 from multiplicative orders alone.
std::vector<std::int64_t> ker_eta_monic_closed_form(std::uint64_t p, int delta);

}  // namespace cz
