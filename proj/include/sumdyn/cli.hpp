#ifndef SUMDYN_CLI_HPP
#define SUMDYN_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <iomanip>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "appendix_a2.hpp"
#include "checks.hpp"
#include "ergodic.hpp"
#include "errors.hpp"
#include "json_io.hpp"
#include "nilsystem.hpp"
#include "omega.hpp"
#include "parallel.hpp"
#include "progressive.hpp"
#include "searcher.hpp"
#include "setspec.hpp"
#include "straus.hpp"

namespace sumdyn {

inline constexpr int kReportVersion = 1;

enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitVerification = 2 };

// Default window: SUMDYN_WINDOW when set, else `fallback`.
inline std::uint64_t default_window(std::uint64_t fallback = 1'000'000) {
  if (const char* env = std::getenv("SUMDYN_WINDOW")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return v;
  }
  return fallback;
}

struct RunConfig {
  std::string command;      // straus, search, verify, nil, repro, density
  std::string sub;          // thma/thmb/mixed, orbit/omega/seminorm/progressive, appendix-a2

  std::string set_path, cert_path, f_path, boxes_path, out_path;

  std::uint64_t N = 100000, M = 500, H = 64;
  std::uint64_t window = 0;  // 0: default_window()
  std::uint64_t seed = 0;
  unsigned threads = 0;      // 0: default_threads()
  std::string mode = "floating";  // exact | floating

  // straus
  std::vector<std::uint64_t> primes;
  bool density = false;
  bool refute = false;
  std::vector<std::uint64_t> B;
  std::uint64_t random_B_size = 0, random_B_max = 10000, random_B_count = 1;
  std::uint64_t t_bound = 0;

  // search and refutation
  std::size_t ell = 0, K = 3;
  SearchBudget budget;

  // nil
  std::size_t s = 1, k = 2;
  std::string alpha = "195025/470832";
  std::vector<std::string> base;
  std::uint64_t n = 10, samples = 1000;
  bool strictness = false;
  std::string progressive_mode = "left";
  std::string side = "2/5";
  std::uint64_t n_max = 10000, m_max = 1000;
  std::size_t max_hits = 0;
  std::optional<double> threshold;
  double tolerance = 0.02;

  // density
  std::uint64_t banach_length = 0, banach_windows = 100, banach_stride = 0;

  std::uint64_t effective_window() const { return window ? window : default_window(); }
  unsigned effective_threads() const { return threads ? threads : default_threads(); }

  void validate() const {
    if (N == 0 || M == 0 || H == 0) throw InvalidInput("N, M and H must be positive");
    if (mode != "exact" && mode != "floating") throw InvalidInput("mode must be exact or floating");
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j{{"command", c.command}, {"sub", c.sub},         {"N", c.N},
                   {"M", c.M},             {"H", c.H},             {"window", c.effective_window()},
                   {"seed", c.seed},       {"threads", c.effective_threads()},
                   {"mode", c.mode}};
  auto opt_path = [&](const char* key, const std::string& v) {
    if (!v.empty()) j[key] = v;
  };
  opt_path("set", c.set_path);
  opt_path("cert", c.cert_path);
  opt_path("f", c.f_path);
  opt_path("boxes", c.boxes_path);
  if (c.command == "straus") {
    j["primes"] = c.primes;
    j["density"] = c.density;
    j["refute"] = c.refute;
    j["B"] = c.B;
    j["random_B"] = {{"size", c.random_B_size}, {"max", c.random_B_max}, {"count", c.random_B_count}};
    j["K"] = c.K;
    j["t_bound"] = c.t_bound;
  }
  if (c.command == "search") {
    j["ell"] = c.ell;
    SearchBudget b = c.budget;
    b.window = c.effective_window();
    b.K = c.K;
    j["budget"] = to_json(b);
  }
  if (c.command == "nil") {
    j["s"] = c.s;
    j["k"] = c.k;
    j["alpha"] = c.alpha;
    j["base"] = c.base;
    j["n"] = c.n;
    j["samples"] = c.samples;
    j["progressive"] = {{"mode", c.progressive_mode}, {"ell", c.ell},       {"side", c.side},
                        {"n_max", c.n_max},            {"m_max", c.m_max},   {"max_hits", c.max_hits}};
    j["threshold"] = c.threshold ? nlohmann::json(*c.threshold) : nlohmann::json(nullptr);
  }
  if (c.command == "repro") j["tolerance"] = c.tolerance;
  if (c.command == "density")
    j["banach"] = {{"length", c.banach_length}, {"windows", c.banach_windows}, {"stride", c.banach_stride}};
  return j;
}

struct DispatchResult {
  int exit_code = kExitOk;
  std::string output;  // JSON report, or CSV for nil orbit
};

namespace detail {

inline nlohmann::json envelope(const RunConfig& c, const std::string& status) {
  return {{"version", kReportVersion}, {"command", c.command + (c.sub.empty() ? "" : " " + c.sub)},
          {"config", to_json(c)},     {"status", status}};
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline std::vector<Rational> base_point(const RunConfig& c) {
  if (c.base.empty()) return std::vector<Rational>(c.s, Rational(0));
  if (c.base.size() != c.s) throw InvalidInput("base point needs s coordinates");
  std::vector<Rational> out;
  for (const auto& x : c.base) out.push_back(parse_rational(x));
  return out;
}

inline nlohmann::json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"value", to_double(r)}}; }

inline nlohmann::json estimate_json(const AverageEstimate& e) {
  nlohmann::json j{{"value", e.value},   {"imag", e.imag}, {"value_at_half_N", e.half_value}, {"drift", e.drift()},
                   {"N", e.N},           {"M", e.M},       {"window", e.window},              {"mode", e.mode}};
  j["exact"] = e.exact ? nlohmann::json(to_string(*e.exact)) : nlohmann::json(nullptr);
  return j;
}

inline DispatchResult run_straus(const RunConfig& c) {
  if (c.primes.empty()) throw InvalidInput("straus needs --primes");
  StrausSpec spec(c.primes);
  SetSpec A = make_straus(spec);
  std::uint64_t W = c.effective_window();
  auto rep = envelope(c, "ok");
  rep["set"] = setspec_to_json(A);
  if (c.density || !c.refute) {
    Rational bound = spec.density_bound();
    Rational measured = window_density(A, W);
    rep["density"] = {{"bound", rational_json(bound)},
                      {"measured", rational_json(measured)},
                      {"window", W},
                      {"measured_minus_bound", to_double(measured - bound)}};
  }
  if (c.refute) {
    std::vector<FiniteNatSet> Bs;
    if (!c.B.empty()) Bs.emplace_back(c.B);
    if (c.random_B_size) {
      std::mt19937_64 rng(c.seed);
      if (c.random_B_size > c.random_B_max) throw InvalidInput("random B larger than its value range");
      for (std::uint64_t i = 0; i < c.random_B_count; ++i) {
        std::set<std::uint64_t> pick;
        std::uniform_int_distribution<std::uint64_t> U(1, c.random_B_max);
        while (pick.size() < c.random_B_size) pick.insert(U(rng));
        Bs.emplace_back(std::vector<std::uint64_t>(pick.begin(), pick.end()));
      }
    }
    if (Bs.empty()) throw InvalidInput("refutation needs --B or --random-B");
    nlohmann::json all = nlohmann::json::array();
    std::uint64_t unresolved = 0;
    for (const auto& B : Bs) {
      nlohmann::json per_t = nlohmann::json::object();
      for (const auto& r : refute_fixed_B(A, spec, B, c.K, c.t_bound, W)) {
        if (!r.witness) {
          per_t[std::to_string(r.t)] = "unresolved";
          ++unresolved;
          continue;
        }
        const auto& w = *r.witness;
        per_t[std::to_string(r.t)] = {{"k", w.k},         {"F", w.F},         {"sum", w.sum},
                                      {"method", r.method}, {"prime", w.prime}, {"member", A.member(w.sum)}};
      }
      all.push_back({{"B", B.elements()}, {"t", per_t}});
    }
    rep["refutations"] = all;
    rep["unresolved"] = unresolved;
  }
  return {kExitOk, dump(rep)};
}

inline SetSpec load_set(const RunConfig& c) {
  if (c.set_path.empty()) throw InvalidInput("--set is required");
  return setspec_from_json(read_json_file(c.set_path));
}

inline DispatchResult run_search(const RunConfig& c) {
  SetSpec A = load_set(c);
  SearchBudget b = c.budget;
  b.window = c.effective_window();
  b.K = c.K;
  SearchResult r;
  if (c.sub == "thma")
    r = search_thmA(A, c.ell, b);
  else if (c.sub == "thmb")
    r = search_thmB(A, b);
  else if (c.sub == "mixed")
    r = search_mixed(A, c.ell, b);
  else
    throw InvalidInput("search needs thma, thmb or mixed");
  auto rep = envelope(c, r.success ? "found" : "not_found");
  rep["note"] = "bounded heuristic search; a failure does not show that no certificate exists";
  rep["certificate"] = r.success ? to_json(r.cert) : nlohmann::json(nullptr);
  rep["check"] = r.check ? to_json(*r.check) : nlohmann::json(nullptr);
  rep["trace"] = r.trace ? to_json(*r.trace) : nlohmann::json(nullptr);
  return {r.success ? kExitOk : kExitVerification, dump(rep)};
}

inline DispatchResult run_verify(const RunConfig& c) {
  if (c.cert_path.empty()) throw InvalidInput("--cert is required");
  SumsetCertificate cert = certificate_from_json(read_json_file(c.cert_path));
  SetSpec A = load_set(c);
  std::uint64_t W = c.window ? c.window : cert.window ? cert.window : default_window();
  auto v = verify(cert, A, W);
  auto rep = envelope(c, status_name(v.status));
  rep["window"] = W;
  rep["result"] = to_json(v);
  return {v.status == CheckStatus::Violation ? kExitVerification : kExitOk, dump(rep)};
}

inline std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

template <class Arith>
std::string orbit_csv(const AffineTorusSystem<Arith>& sys, const TorusPoint<Arith>& a, std::uint64_t n, bool exact) {
  std::ostringstream os;
  os << "n";
  for (std::size_t j = 1; j <= sys.dim(); ++j) os << ",x" << j;
  os << "\n";
  OrbitCursor<Arith> cur(sys, a, 0, 1);
  for (std::uint64_t i = 0; i <= n; ++i, cur.advance()) {
    os << i;
    for (std::size_t j = 0; j < sys.dim(); ++j) {
      os << ",";
      if (exact)
        os << to_string(sys.arith().to_rational(cur.point()[j]));
      else
        os << format_double(sys.arith().to_double(cur.point()[j]));
    }
    os << "\n";
  }
  return os.str();
}

inline std::vector<TorusBox> progressive_boxes(const RunConfig& c, std::size_t count) {
  std::vector<TorusBox> boxes;
  if (!c.boxes_path.empty()) {
    for (const auto& b : read_json_file(c.boxes_path)) boxes.push_back(box_from_json(b));
    if (boxes.size() != count) throw InvalidInput("expected " + std::to_string(count) + " boxes");
    return boxes;
  }
  return std::vector<TorusBox>(count, TorusBox::cube(c.s, 0, parse_rational(c.side)));
}

inline nlohmann::json scan_json(const ScanResult& r) {
  nlohmann::json hits = nlohmann::json::array();
  for (const auto& h : r.hits)
    hits.push_back({{"n", h.n}, {"m", h.m}, {"estimate", h.estimate}, {"recount", h.recount}, {"confirmed", h.confirmed}});
  return {{"kind", r.kind}, {"seed_mass", r.seed_mass}, {"threshold", r.threshold}, {"scanned", r.scanned},
          {"hits", hits}};
}

inline DispatchResult run_nil(const RunConfig& c) {
  Rational alpha = parse_rational(c.alpha);
  if (c.sub == "orbit") {
    auto base = base_point(c);
    if (c.mode == "exact") {
      auto sys = make_rational_system(c.s, alpha, base);
      return {kExitOk, orbit_csv(sys, sys.from_rationals(base), c.n, true)};
    }
    auto sys = make_fixed_system(c.s, alpha);
    return {kExitOk, orbit_csv(sys, sys.from_rationals(base), c.n, false)};
  }
  if (c.sub == "omega") {
    if (c.strictness) {
      auto r = projection_strictness(c.s, c.k, c.samples, c.seed);
      auto rep = envelope(c, r.strict() ? "strict" : "not_strict");
      rep["projected_pass"] = r.projected_pass;
      rep["samples"] = r.samples;
      rep["witness"] = r.witness;
      rep["witness_in_lower"] = r.witness_in_lower;
      rep["witness_in_projection"] = r.witness_in_projection;
      return {r.strict() ? kExitOk : kExitVerification, dump(rep)};
    }
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : omega_sample(c.s, c.k, c.samples, c.seed)) arr.push_back(p);
    return {kExitOk, arr.dump() + "\n"};
  }
  if (c.sub == "seminorm") {
    if (c.f_path.empty()) throw InvalidInput("--f is required");
    FunctionSpec f = functionspec_from_json(read_json_file(c.f_path));
    auto base = base_point(c);
    AverageEstimate e;
    if (c.mode == "exact") {
      auto sys = make_rational_system(c.s, alpha, base);
      e = ghk_seminorm(sys, f, c.k, c.H, c.N, sys.from_rationals(base));
    } else {
      auto sys = make_fixed_system(c.s, alpha);
      e = ghk_seminorm(sys, f, c.k, c.H, c.N, sys.from_rationals(base));
    }
    auto rep = envelope(c, "ok");
    rep["seminorm"] = estimate_json(e);
    return {kExitOk, dump(rep)};
  }
  if (c.sub == "progressive") {
    ScanSystem ss{c.s, alpha, base_point(c)};
    ScanOptions o;
    o.N = c.N;
    o.threshold = c.threshold;
    o.max_hits = c.max_hits;
    ScanResult r;
    if (c.progressive_mode == "left")
      r = left_progressive_scan(ss, c.k, progressive_boxes(c, c.k), c.n_max, o);
    else if (c.progressive_mode == "right")
      r = right_progressive_scan(ss, c.k, progressive_boxes(c, c.k - 1), c.n_max, o);
    else if (c.progressive_mode == "multi")
      r = multiple_right_scan(ss, c.k, c.ell, progressive_boxes(c, c.k), c.n_max, c.m_max, o);
    else
      throw InvalidInput("progressive mode must be left, right or multi");
    auto rep = envelope(c, "ok");
    rep["scan"] = scan_json(r);
    return {kExitOk, dump(rep)};
  }
  throw InvalidInput("nil needs orbit, omega, seminorm or progressive");
}

inline DispatchResult run_repro(const RunConfig& c) {
  if (c.sub != "appendix-a2") throw InvalidInput("repro supports appendix-a2");
  A2Options o;
  o.N = c.N;
  o.M = c.M;
  o.seed = c.seed;
  o.tolerance = c.tolerance;
  o.threads = c.effective_threads();
  if (c.alpha != RunConfig{}.alpha) o.alpha = parse_rational(c.alpha);
  auto r = appendix_a2_repro(o);
  auto rep = envelope(c, r.exact_matches_displayed() ? "ok" : "exact_mismatch");
  rep["result"] = to_json(r);
  return {r.exact_matches_displayed() ? kExitOk : kExitVerification, dump(rep)};
}

inline DispatchResult run_density(const RunConfig& c) {
  SetSpec A = load_set(c);
  std::uint64_t W = c.effective_window();
  auto rep = envelope(c, "ok");
  rep["window_density"] = rational_json(window_density(A, W));
  if (c.banach_length) {
    auto b = banach_density_estimate(A, c.banach_length, c.banach_windows,
                                     c.banach_stride ? c.banach_stride : c.banach_length);
    rep["banach"] = {{"value", b.value}, {"best_start", b.best_start}, {"length", b.length}};
  }
  return {kExitOk, dump(rep)};
}

}  // namespace detail

// Runs one subcommand. Library errors propagate as exceptions; the tool maps them to exit 1.
inline DispatchResult dispatch(const RunConfig& c) {
  c.validate();
  if (c.command == "straus") return detail::run_straus(c);
  if (c.command == "search") return detail::run_search(c);
  if (c.command == "verify") return detail::run_verify(c);
  if (c.command == "nil") return detail::run_nil(c);
  if (c.command == "repro") return detail::run_repro(c);
  if (c.command == "density") return detail::run_density(c);
  throw InvalidInput("unknown command '" + c.command + "'");
}

}  // namespace sumdyn

#endif
