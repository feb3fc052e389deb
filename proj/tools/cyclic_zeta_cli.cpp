#include <cyclic_zeta/cyclic_zeta.h>

#include <CLI11.hpp>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

struct CurveDel {
  void operator()(cz_curve* c) const { cz_curve_free(c); }
};
struct ResultDel {
  void operator()(cz_result* r) const { cz_result_free(r); }
};

bool parse_poly(const std::string& s, std::vector<int64_t>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t end = s.find(',', pos);
    if (end == std::string::npos) end = s.size();
    std::string tok = s.substr(pos, end - pos);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    if (!tok.empty() && tok.front() == '+') tok.erase(tok.begin());
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return !out.empty();
}

int report_failure(cz_status st) {
  std::cerr << "error: " << cz_last_error() << "\n";
  return cz_status_is_validation(st) ? kExitValidation : kExitInternal;
}

std::string join(const std::vector<std::string>& v, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += sep;
    out += v[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact L-polynomial of the cyclic cover y^r = F(x) over F_p"};
  std::uint64_t p = 0;
  int r = 0;
  std::string poly;
  int n_override = 0;
  std::string strategy = "auto";
  std::string interpolation = "on";
  std::string output = "plain";
  int verify = 0;
  bool timing = false;
  int threads = 1;

  app.add_option("--p", p, "prime p")->required();
  app.add_option("--r", r, "cover degree r")->required();
  app.add_option("--poly", poly, "ascending comma-separated coefficients of F")->required();
  app.add_option("--N", n_override, "override the p-adic precision N");
  app.add_option("--strategy", strategy, "auto, bsgs or naive")
      ->check(CLI::IsMember({"auto", "bsgs", "naive"}));
  app.add_option("--interpolation", interpolation, "on or off")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--output", output, "plain or json")->check(CLI::IsMember({"plain", "json"}));
  app.add_option("--verify", verify, "compare counts over F_{p^i}, i <= this, with brute force")
      ->check(CLI::Range(0, 3));
  app.add_flag("--timing", timing, "print per-phase wall-clock times");
  app.add_option("--threads", threads, "worker threads")->envname("ZETA_THREADS")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  std::vector<int64_t> coeffs;
  if (!parse_poly(poly, coeffs)) {
    std::cerr << "error: InvalidArgument: --poly expects comma-separated integers\n";
    return kExitValidation;
  }
  if (app.count("--N") && n_override < 1) {
    std::cerr << "error: InvalidArgument: --N must be at least 1\n";
    return kExitValidation;
  }

  cz_curve* raw_curve = nullptr;
  cz_status st = cz_curve_new(p, r, coeffs.data(), coeffs.size(), n_override, &raw_curve);
  if (st != CZ_OK) return report_failure(st);
  std::unique_ptr<cz_curve, CurveDel> curve(raw_curve);

  cz_options opts;
  cz_options_init(&opts);
  opts.strategy = strategy == "bsgs" ? CZ_STRATEGY_BSGS : strategy == "naive" ? CZ_STRATEGY_NAIVE : CZ_STRATEGY_AUTO;
  opts.interpolation = interpolation == "on";
  opts.threads = threads;

  cz_result* raw_res = nullptr;
  st = cz_compute(curve.get(), &opts, &raw_res);
  if (st != CZ_OK) return report_failure(st);
  std::unique_ptr<cz_result, ResultDel> res(raw_res);

  std::vector<std::string> L, frob, U, Fs;
  for (std::size_t i = 0; i < cz_result_lpoly_len(res.get()); ++i) L.emplace_back(cz_result_lpoly_coeff(res.get(), i));
  for (std::size_t i = 0; i < cz_result_frobpoly_len(res.get()); ++i)
    frob.emplace_back(cz_result_frobpoly_coeff(res.get(), i));
  for (std::size_t i = 0; i < cz_result_u_len(res.get()); ++i)
    U.push_back(std::to_string(cz_result_u_coeff(res.get(), i)));
  for (int64_t c : coeffs) Fs.push_back(std::to_string(c));

  const int i_max = std::max(1, verify);
  std::map<int, std::string> counts, oracle;
  for (int i = 1; i <= i_max; ++i) {
    char buf[256];
    st = cz_result_point_count(res.get(), i, buf, sizeof buf);
    if (st != CZ_OK) return report_failure(st);
    counts[i] = buf;
  }
  bool mismatch = false;
  for (int i = 1; i <= verify; ++i) {
    uint64_t n = 0;
    st = cz_curve_oracle_count(curve.get(), i, &n);
    if (st != CZ_OK) return report_failure(st);
    oracle[i] = std::to_string(n);
    if (oracle[i] != counts[i]) mismatch = true;
  }

  const char* strat = cz_result_strategy(res.get()) == CZ_STRATEGY_NAIVE ? "naive" : "bsgs";
  const double t[4] = {cz_result_timing_ms(res.get(), CZ_PHASE_EXPANSION),
                       cz_result_timing_ms(res.get(), CZ_PHASE_HORIZONTAL),
                       cz_result_timing_ms(res.get(), CZ_PHASE_VERTICAL),
                       cz_result_timing_ms(res.get(), CZ_PHASE_LIFT)};
  const char* phase[4] = {"expansion", "horizontal", "vertical", "lift"};
  const int N = cz_result_precision(res.get());

  std::ostringstream os;
  if (output == "json") {
    // Coefficients can exceed 64 bits, so the document is written by hand.
    os << "{\"p\":" << p << ",\"r\":" << r << ",\"F\":[" << join(Fs, ",") << "],\"N\":" << N << ",\"L\":["
       << join(L, ",") << "],\"frobenius_polynomial\":[" << join(frob, ",") << "],\"U\":[" << join(U, ",")
       << "],\"counts\":{";
    bool first = true;
    for (const auto& [i, n] : counts) {
      os << (first ? "" : ",") << "\"" << i << "\":" << n;
      first = false;
    }
    os << "},\"timings_ms\":{";
    for (int k = 0; k < 4; ++k) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.3f", t[k]);
      os << (k ? "," : "") << "\"" << phase[k] << "\":" << buf;
    }
    os << "},\"strategy\":\"" << strat << "\"";
    if (verify > 0) {
      os << ",\"oracle_counts\":{";
      first = true;
      for (const auto& [i, n] : oracle) {
        os << (first ? "" : ",") << "\"" << i << "\":" << n;
        first = false;
      }
      os << "}";
    }
    os << "}\n";
  } else {
    os << "p " << p << "\nr " << r << "\nF " << join(Fs, " ") << "\nN " << N << "\ngenus "
       << cz_result_genus(res.get()) << "\nstrategy " << strat << "\nL " << join(L, " ")
       << "\nfrobenius_polynomial " << join(frob, " ") << "\nU " << join(U, " ") << "\n";
    for (const auto& [i, n] : counts) os << "count " << i << " " << n << "\n";
    for (const auto& [i, n] : oracle) os << "oracle " << i << " " << n << "\n";
    if (timing)
      for (int k = 0; k < 4; ++k) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3f", t[k]);
        os << "time_ms " << phase[k] << " " << buf << "\n";
      }
  }
  std::cout << os.str();

  for (std::size_t i = 0; i < cz_result_note_count(res.get()); ++i)
    std::cerr << "note: " << cz_result_note(res.get(), i) << "\n";
  if (mismatch) {
    std::cerr << "error: point counts disagree with brute force\n";
    return kExitInternal;
  }
  return 0;
}
