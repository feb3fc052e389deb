#pragma once

// Interval products M(a+1) M(a+2) ... M(b) of a matrix M(x) = M0 + x M1.

#include <cstdint>
#include <utility>
#include <vector>

#include "padic.hpp"

namespace cz {

struct LinMat {
  PMat M0, M1;
  int size() const { return M0.rows(); }
  PMat at(const PElt& x) const;
  PMat at(std::int64_t x) const;
};

using IntervalSet = std::vector<std::pair<std::int64_t, std::int64_t>>;

enum class LinStrategy { Bsgs, Naive };

// h < sqrt(K) < p - 1
bool bsgs_applicable(const IntervalSet& I, std::int64_t K, std::uint64_t p);

std::vector<PMat> eval_intervals(const LinMat& L, const IntervalSet& I, std::int64_t K, LinStrategy strategy);

// Matrices whose entries are polynomials in X.
struct MatPoly {
  int m = 0;
  std::vector<PPoly> e;  // row-major
  PPoly& at(int i, int j) { return e[static_cast<std::size_t>(i) * m + j]; }
  const PPoly& at(int i, int j) const { return e[static_cast<std::size_t>(i) * m + j]; }
};

MatPoly matpoly_mul(const MatPoly& a, const MatPoly& b);

// Values of each polynomial at each point, result[k][i] = polys[k](points[i]).
std::vector<std::vector<PElt>> multipoint_eval(const std::vector<const PPoly*>& polys, const std::vector<PElt>& points);

}  // namespace cz
