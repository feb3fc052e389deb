#pragma once

// Brute-force point counts of the smooth model of y^r = F(x) over F_{p^i}.

#include <array>
#include <cstdint>
#include <vector>

#include "curve.hpp"

namespace cz {

inline constexpr std::uint64_t kOracleMaxField = 100000000;

// F_{p^i}, i <= 3, as F_p[x]/(modulus).
class SmallField {
 public:
  using Elt = std::array<std::uint64_t, 3>;

  // Uses the monic irreducible of degree i with the smallest coefficient
  // vector, compared from x^(i-1) down to x^0.
  SmallField(std::uint64_t p, int i);
  // modulus: ascending, monic, irreducible, degree i.
  SmallField(std::uint64_t p, int i, const std::vector<std::uint64_t>& modulus);

  std::uint64_t p() const { return p_; }
  int degree() const { return i_; }
  std::uint64_t size() const { return q_; }
  const std::vector<std::uint64_t>& modulus() const { return mod_; }

  Elt from_index(std::uint64_t idx) const;
  std::uint64_t index(const Elt& a) const;
  Elt constant(std::uint64_t c) const { return Elt{c % p_, 0, 0}; }
  Elt add(const Elt& a, const Elt& b) const;
  Elt mul(const Elt& a, const Elt& b) const;
  Elt pow(Elt a, std::uint64_t e) const;

 private:
  void init(std::uint64_t p, int i);
  std::uint64_t p_ = 0;
  int i_ = 0;
  std::uint64_t q_ = 0;
  std::vector<std::uint64_t> mod_;
};

std::uint64_t count_points(const CurveSpec& c, int i);
std::uint64_t count_points(const CurveSpec& c, const SmallField& K);

}  // namespace cz
