#include <cyclic_zeta/cyclic_zeta.h>

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "curve.hpp"
#include "oracle.hpp"
#include "zeta.hpp"

struct cz_curve {
  cz::CurveSpec spec;
};

struct cz_result {
  cz::ZetaResult z;
  std::vector<std::string> lpoly, frobpoly, matrix, notes;
};

namespace {

thread_local std::string g_last_error;

cz_status to_status(cz::Errc e) {
  using cz::Errc;
  switch (e) {
    case Errc::NonUnit: return CZ_ERR_NON_UNIT;
    case Errc::InexactDivision: return CZ_ERR_INEXACT_DIVISION;
    case Errc::PrecisionExhausted: return CZ_ERR_PRECISION_EXHAUSTED;
    case Errc::NotCoprime: return CZ_ERR_NOT_COPRIME;
    case Errc::SingularNodes: return CZ_ERR_SINGULAR_NODES;
    case Errc::NotSquarefree: return CZ_ERR_NOT_SQUAREFREE;
    case Errc::LeadingCoeffVanishes: return CZ_ERR_LEADING_COEFF_VANISHES;
    case Errc::PTooSmall: return CZ_ERR_P_TOO_SMALL;
    case Errc::DegenerateCover: return CZ_ERR_DEGENERATE_COVER;
    case Errc::NotPrime: return CZ_ERR_NOT_PRIME;
    case Errc::InvalidArgument: return CZ_ERR_INVALID_ARGUMENT;
    case Errc::UnexpectedZeroDenominator: return CZ_ERR_UNEXPECTED_ZERO_DENOMINATOR;
    case Errc::IntegralityViolation: return CZ_ERR_INTEGRALITY_VIOLATION;
    case Errc::PreconditionFailed: return CZ_ERR_PRECONDITION_FAILED;
    case Errc::LiftAmbiguous: return CZ_ERR_LIFT_AMBIGUOUS;
    case Errc::BoundViolated: return CZ_ERR_BOUND_VIOLATED;
    case Errc::NonIntegralCoefficient: return CZ_ERR_NON_INTEGRAL_COEFFICIENT;
    case Errc::TooLarge: return CZ_ERR_TOO_LARGE;
    case Errc::Unsupported: return CZ_ERR_UNSUPPORTED;
    case Errc::Internal: return CZ_ERR_INTERNAL;
  }
  return CZ_ERR_INTERNAL;
}

cz_status set_error(cz_status s, const std::string& msg) {
  g_last_error = msg;
  return s;
}

template <class F>
cz_status guarded(F&& fn) {
  try {
    g_last_error.clear();
    fn();
    return CZ_OK;
  } catch (const cz::Error& e) {
    return set_error(to_status(e.code()), std::string(cz::errc_name(e.code())) + ": " + e.what());
  } catch (const std::bad_alloc&) {
    return set_error(CZ_ERR_OUT_OF_MEMORY, "OutOfMemory: allocation failed");
  } catch (const std::exception& e) {
    return set_error(CZ_ERR_INTERNAL, std::string("Internal: ") + e.what());
  }
}

}  // namespace

extern "C" {

void cz_options_init(cz_options* opts) {
  if (!opts) return;
  opts->strategy = CZ_STRATEGY_AUTO;
  opts->interpolation = 1;
  opts->threads = 1;
}

const char* cz_status_name(cz_status s) {
  switch (s) {
    case CZ_OK: return "Ok";
    case CZ_ERR_NOT_PRIME: return "NotPrime";
    case CZ_ERR_NOT_SQUAREFREE: return "NotSquarefree";
    case CZ_ERR_LEADING_COEFF_VANISHES: return "LeadingCoeffVanishes";
    case CZ_ERR_P_TOO_SMALL: return "PTooSmall";
    case CZ_ERR_DEGENERATE_COVER: return "DegenerateCover";
    case CZ_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case CZ_ERR_TOO_LARGE: return "TooLarge";
    case CZ_ERR_UNSUPPORTED: return "Unsupported";
    case CZ_ERR_NON_UNIT: return "NonUnit";
    case CZ_ERR_INEXACT_DIVISION: return "InexactDivision";
    case CZ_ERR_PRECISION_EXHAUSTED: return "PrecisionExhausted";
    case CZ_ERR_NOT_COPRIME: return "NotCoprime";
    case CZ_ERR_SINGULAR_NODES: return "SingularNodes";
    case CZ_ERR_UNEXPECTED_ZERO_DENOMINATOR: return "UnexpectedZeroDenominator";
    case CZ_ERR_INTEGRALITY_VIOLATION: return "IntegralityViolation";
    case CZ_ERR_PRECONDITION_FAILED: return "PreconditionFailed";
    case CZ_ERR_LIFT_AMBIGUOUS: return "LiftAmbiguous";
    case CZ_ERR_BOUND_VIOLATED: return "BoundViolated";
    case CZ_ERR_NON_INTEGRAL_COEFFICIENT: return "NonIntegralCoefficient";
    case CZ_ERR_INTERNAL: return "Internal";
    case CZ_ERR_OUT_OF_MEMORY: return "OutOfMemory";
  }
  return "Unknown";
}

int cz_status_is_validation(cz_status s) { return s >= CZ_ERR_NOT_PRIME && s <= CZ_ERR_UNSUPPORTED; }

const char* cz_last_error(void) { return g_last_error.c_str(); }

cz_status cz_curve_new(uint64_t p, int r, const int64_t* coeffs, size_t ncoeffs, int n_override, cz_curve** out) {
  if (!out || (!coeffs && ncoeffs)) return set_error(CZ_ERR_INVALID_ARGUMENT, "InvalidArgument: null pointer");
  *out = nullptr;
  return guarded([&] {
    std::vector<std::int64_t> c(coeffs, coeffs + ncoeffs);
    std::optional<int> N;
    if (n_override > 0) N = n_override;
    auto* h = new cz_curve{cz::curve_new(p, r, c, N)};
    *out = h;
  });
}

void cz_curve_free(cz_curve* c) { delete c; }

int cz_curve_degree(const cz_curve* c) { return c ? c->spec.d : -1; }
int cz_curve_genus(const cz_curve* c) { return c ? c->spec.g : -1; }
int cz_curve_delta(const cz_curve* c) { return c ? c->spec.delta : -1; }
int cz_curve_precision(const cz_curve* c) { return c ? c->spec.N : -1; }

cz_status cz_curve_oracle_count(const cz_curve* c, int i, uint64_t* out) {
  if (!c || !out) return set_error(CZ_ERR_INVALID_ARGUMENT, "InvalidArgument: null pointer");
  return guarded([&] { *out = cz::count_points(c->spec, i); });
}

cz_status cz_compute(const cz_curve* c, const cz_options* opts, cz_result** out) {
  if (!c || !out) return set_error(CZ_ERR_INVALID_ARGUMENT, "InvalidArgument: null pointer");
  *out = nullptr;
  cz_options o;
  cz_options_init(&o);
  if (opts) o = *opts;
  return guarded([&] {
    cz::PipelineOptions po;
    switch (o.strategy) {
      case CZ_STRATEGY_AUTO: po.strategy = cz::Strategy::Auto; break;
      case CZ_STRATEGY_BSGS: po.strategy = cz::Strategy::Bsgs; break;
      case CZ_STRATEGY_NAIVE: po.strategy = cz::Strategy::Naive; break;
      default: cz::fail(cz::Errc::InvalidArgument, "unknown strategy");
    }
    if (o.threads < 1) cz::fail(cz::Errc::InvalidArgument, "threads must be at least 1");
    po.interpolation = o.interpolation != 0;
    po.threads = o.threads;
    auto res = std::make_unique<cz_result>();
    res->z = cz::compute_zeta(c->spec, po);
    for (const auto& a : res->z.L.a) res->lpoly.push_back(a.get_str());
    for (const auto& a : cz::frobenius_polynomial(res->z.L)) res->frobpoly.push_back(a.get_str());
    const cz::PMat& m = res->z.frob.m;
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j) res->matrix.push_back(m.at(i, j).with_prec(res->z.frob.N).lift().get_str());
    res->notes = res->z.frob.notes;
    *out = res.release();
  });
}

void cz_result_free(cz_result* res) { delete res; }

int cz_result_genus(const cz_result* res) { return res ? res->z.curve.g : -1; }
int cz_result_precision(const cz_result* res) { return res ? res->z.frob.N : -1; }

cz_strategy cz_result_strategy(const cz_result* res) {
  if (!res) return CZ_STRATEGY_AUTO;
  return res->z.frob.strategy == cz::Strategy::Naive ? CZ_STRATEGY_NAIVE : CZ_STRATEGY_BSGS;
}

int cz_result_charpoly_ok(const cz_result* res) { return res && res->z.charpoly_ok ? 1 : 0; }

size_t cz_result_lpoly_len(const cz_result* res) { return res ? res->lpoly.size() : 0; }

const char* cz_result_lpoly_coeff(const cz_result* res, size_t i) {
  return res && i < res->lpoly.size() ? res->lpoly[i].c_str() : nullptr;
}

size_t cz_result_frobpoly_len(const cz_result* res) { return res ? res->frobpoly.size() : 0; }

const char* cz_result_frobpoly_coeff(const cz_result* res, size_t i) {
  return res && i < res->frobpoly.size() ? res->frobpoly[i].c_str() : nullptr;
}

size_t cz_result_u_len(const cz_result* res) { return res ? res->z.ker.U.size() : 0; }

int64_t cz_result_u_coeff(const cz_result* res, size_t i) {
  return res && i < res->z.ker.U.size() ? res->z.ker.U[i] : 0;
}

size_t cz_result_matrix_size(const cz_result* res) { return res ? static_cast<size_t>(res->z.frob.m.rows()) : 0; }

const char* cz_result_matrix_entry(const cz_result* res, size_t row, size_t col) {
  if (!res) return nullptr;
  const size_t n = static_cast<size_t>(res->z.frob.m.rows());
  if (row >= n || col >= n) return nullptr;
  return res->matrix[row * n + col].c_str();
}

double cz_result_timing_ms(const cz_result* res, cz_phase phase) {
  if (!res) return 0;
  switch (phase) {
    case CZ_PHASE_EXPANSION: return res->z.timings.expansion_ms;
    case CZ_PHASE_HORIZONTAL: return res->z.timings.horizontal_ms;
    case CZ_PHASE_VERTICAL: return res->z.timings.vertical_ms;
    case CZ_PHASE_LIFT: return res->z.timings.lift_ms;
  }
  return 0;
}

size_t cz_result_note_count(const cz_result* res) { return res ? res->notes.size() : 0; }

const char* cz_result_note(const cz_result* res, size_t i) {
  return res && i < res->notes.size() ? res->notes[i].c_str() : nullptr;
}

cz_status cz_result_point_count(const cz_result* res, int i, char* buf, size_t buflen) {
  if (!res || !buf) return set_error(CZ_ERR_INVALID_ARGUMENT, "InvalidArgument: null pointer");
  if (i < 1) return set_error(CZ_ERR_INVALID_ARGUMENT, "InvalidArgument: extension degree must be positive");
  return guarded([&] {
    const std::string s = cz::point_counts_from_L(res->z.L, i).back().get_str();
    if (s.size() + 1 > buflen) cz::fail(cz::Errc::InvalidArgument, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

}  // extern "C"
