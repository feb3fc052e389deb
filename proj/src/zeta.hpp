#pragma once

// Frobenius matrix on the basis x^i dx / y^j and the exact L-polynomial.

#include <gmpxx.h>

#include <string>
#include <vector>

#include "curve.hpp"
#include "padic.hpp"

namespace cz {

enum class Strategy { Auto, Bsgs, Naive };

const char* strategy_name(Strategy s);

struct PipelineOptions {
  Strategy strategy = Strategy::Auto;
  bool interpolation = true;
  int threads = 1;
};

struct PipelineTimings {
  double expansion_ms = 0;
  double horizontal_ms = 0;
  double vertical_ms = 0;
  double lift_ms = 0;
};

struct FrobMatrix {
  RingPtr ring;
  int N = 0;
  PMat m;
  Strategy strategy = Strategy::Auto;  // the one actually used
  std::vector<std::string> notes;
};

// Naive single-stepping when p < 4 (dN)^2, otherwise baby-step giant-step.
Strategy resolve_strategy(const CurveSpec& c, int N, Strategy requested);

FrobMatrix frobenius_matrix(const CurveSpec& c, int N, const PipelineOptions& opt, PipelineTimings* timings = nullptr);

// s_1..s_g of the reciprocal roots of L, exact.
std::vector<mpz_class> power_sums(const FrobMatrix& M, const CurveSpec& c, const KerEta& ker);

struct LPolynomial {
  int g = 0;
  mpz_class q;
  std::vector<mpz_class> a;  // a_0..a_2g, a_0 = 1
};

LPolynomial lpolynomial_from_power_sums(const std::vector<mpz_class>& s, int g, const mpz_class& q);

// Monic reciprocal t^2g L(1/t), ascending: [a_2g, ..., a_0].
std::vector<mpz_class> frobenius_polynomial(const LPolynomial& L);

// det(I - tM) == L(t) t^(delta-1) U(1/t) mod p^N.
bool zeta_check_charpoly(const FrobMatrix& M, const LPolynomial& L, const std::vector<std::int64_t>& U);

// #C(F_{q^i}) for i = 1..i_max.
std::vector<mpz_class> point_counts_from_L(const LPolynomial& L, int i_max);

// Exact checks of the functional equation and the Weil bounds.
void check_lpolynomial(const LPolynomial& L);

struct ZetaResult {
  CurveSpec curve;
  KerEta ker;
  FrobMatrix frob;
  LPolynomial L;
  PipelineTimings timings;
  bool charpoly_ok = false;
};

ZetaResult compute_zeta(const CurveSpec& c, const PipelineOptions& opt);

}  // namespace cz
