#ifndef SUMDYN_SEARCHER_HPP
#define SUMDYN_SEARCHER_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bitvec.hpp"
#include "certificate.hpp"
#include "checks.hpp"
#include "errors.hpp"
#include "finite_set.hpp"
#include "setspec.hpp"

namespace sumdyn {

// Bounded heuristic search; no completeness claim.
struct SearchBudget {
  std::uint64_t window = 1'000'000;
  std::uint64_t max_scan = 2000;      // element candidates per decision
  std::size_t backtrack_depth = 8;    // total element removals allowed
  std::size_t target_B_size = 0;      // 0: K + ell for ThmA/Mixed, K for ThmB
  std::size_t K = 3;
  std::uint64_t max_t = 4096;         // shifts t scanned in [0, max_t)
  std::uint64_t max_s = 64;           // shifts s scanned in [0, max_s)
  double accept_factor = 0.5;         // keep >= accept_factor * density of each level's shifts
  bool force_zero_shifts = false;

  void validate() const {
    if (window == 0 || max_scan == 0 || K == 0 || max_t == 0 || max_s == 0)
      throw InvalidInput("search budget fields must be positive");
    if (!(accept_factor >= 0)) throw InvalidInput("accept_factor must be >= 0");
  }
};

// A lies in a proper set of residues mod m and no residue assignment of B and the shifts
// satisfies levels 1..level.
struct ModularObstruction {
  std::uint64_t modulus = 0;
  std::vector<std::uint64_t> residues;
  std::size_t level = 0;
  std::string message;
};

struct SearchTrace {
  std::vector<std::uint64_t> deepest_B;
  std::string stage;              // "element", "shifts" or "check"
  std::size_t level = 0;          // deepest level that blocked a candidate at the failing decision
  std::string family;             // "A" or "B" for that level
  std::string reason;
  std::uint64_t candidates_scanned = 0;
  std::size_t backtracks = 0;
  std::optional<ModularObstruction> obstruction;
  struct Blocked {
    std::string family;
    std::size_t level;
    std::uint64_t candidates;
  };
  std::vector<Blocked> blocked;  // candidates rejected per level; level 0 = shift chain
};

struct SearchResult {
  bool success = false;
  SumsetCertificate cert;         // set on success
  std::optional<SearchTrace> trace;
  std::optional<VerifyReport> check;
};

namespace detail {

// Candidate shift sets per level. Family A: one bitset over t. Family B: one bitset over t per s.
struct SearchState {
  std::vector<std::uint64_t> B;
  std::vector<std::vector<std::uint64_t>> sums;  // sums[i]: distinct i-element sums
  std::vector<BitVec> CA;
  std::vector<std::vector<BitVec>> DB;
};

struct SearchProblem {
  bool famA = false, famB = false;
  std::size_t ell = 0, K = 0, target = 0;
  std::uint64_t window = 0, St = 1, Ss = 1;
  BitVec Abits;
  double density = 0;
  double accept = 0;
};

inline void add_sums(std::vector<std::vector<std::uint64_t>>& sums, std::uint64_t b) {
  sums.push_back({});
  for (std::size_t i = sums.size() - 1; i >= 1; --i) {
    auto& dst = sums[i];
    for (auto x : sums[i - 1]) dst.push_back(x + b);
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end()), dst.end());
  }
}

inline std::size_t count_levelB(const std::vector<BitVec>& v) {
  std::size_t c = 0;
  for (const auto& x : v) c += x.count();
  return c;
}

// Smallest nondecreasing choice t_k in CA[k].
inline std::optional<std::vector<std::int64_t>> chain_A(const std::vector<BitVec>& CA) {
  std::vector<std::int64_t> t;
  std::size_t lo = 0;
  for (const auto& c : CA) {
    std::size_t x = c.next(lo);
    if (x >= c.size()) return std::nullopt;
    t.push_back(static_cast<std::int64_t>(x));
    lo = x;
  }
  return t;
}

// Depth-first search for nondecreasing (s_k), (t_k); candidates in increasing s, then t.
inline bool chain_B_rec(const std::vector<std::vector<BitVec>>& DB, std::size_t k, std::size_t s0, std::size_t t0,
                        std::vector<std::int64_t>& s, std::vector<std::int64_t>& t, std::uint64_t& nodes) {
  if (k == DB.size()) return true;
  for (std::size_t sv = s0; sv < DB[k].size(); ++sv) {
    const auto& row = DB[k][sv];
    for (std::size_t tv = row.next(t0); tv < row.size(); tv = row.next(tv + 1)) {
      if (++nodes > 200000) return false;
      s[k] = static_cast<std::int64_t>(sv);
      t[k] = static_cast<std::int64_t>(tv);
      if (chain_B_rec(DB, k + 1, sv, tv, s, t, nodes)) return true;
    }
  }
  return false;
}

inline std::optional<std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> chain_B(
    const std::vector<std::vector<BitVec>>& DB) {
  std::vector<std::int64_t> s(DB.size()), t(DB.size());
  std::uint64_t nodes = 0;
  if (!chain_B_rec(DB, 0, 0, 0, s, t, nodes)) return std::nullopt;
  return std::make_pair(t, s);
}

struct Evaluation {
  bool feasible = false;
  double score = 0;            // minimum surviving fraction over affected levels
  std::size_t empty_level = 0; // first level emptied (1-based), 0 if none
  std::string empty_family;
  SearchState next;
};

inline Evaluation evaluate(const SearchProblem& P, const SearchState& S, std::uint64_t b) {
  Evaluation ev;
  ev.next = S;
  ev.score = 1.0;
  auto& N = ev.next;
  const auto& old = S.sums;  // old[i]: i-sums before adding b
  if (P.famA) {
    for (std::size_t k = 1; k <= P.K; ++k) {
      std::size_t before = N.CA[k - 1].count();
      bool touched = false;
      for (std::size_t i = k; i <= k + P.ell; ++i) {
        if (i - 1 >= old.size()) break;
        for (auto x : old[i - 1]) {
          N.CA[k - 1].and_shifted(P.Abits, static_cast<std::size_t>(x + b - 1));
          touched = true;
        }
      }
      if (!touched) continue;
      std::size_t after = N.CA[k - 1].count();
      if (after == 0) {
        ev.empty_level = k;
        ev.empty_family = "A";
        return ev;
      }
      ev.score = std::min(ev.score, double(after) / double(before));
    }
  }
  if (P.famB) {
    for (std::size_t k = 1; k <= P.K; ++k) {
      std::size_t before = count_levelB(N.DB[k - 1]);
      bool touched = false;
      for (std::size_t i = 1; i <= k; ++i) {
        if (i - 1 >= old.size()) break;
        for (auto x : old[i - 1])
          for (std::size_t sv = 0; sv < P.Ss; ++sv) {
            N.DB[k - 1][sv].and_shifted(P.Abits, static_cast<std::size_t>(x + b + i * sv - 1));
            touched = true;
          }
      }
      if (!touched) continue;
      std::size_t after = count_levelB(N.DB[k - 1]);
      if (after == 0) {
        ev.empty_level = k;
        ev.empty_family = "B";
        return ev;
      }
      ev.score = std::min(ev.score, double(after) / double(before));
    }
  }
  if (P.famA && !chain_A(N.CA)) {
    ev.empty_family = "A";
    return ev;
  }
  if (P.famB && !chain_B(N.DB)) {
    ev.empty_family = "B";
    return ev;
  }
  N.B.push_back(b);
  add_sums(N.sums, b);
  ev.feasible = true;
  return ev;
}

// Levels 1..k of the pattern reduced mod m, with B's residues and the shifts free (or zero).
inline ModularObstruction modular_obstruction_at(const SearchProblem& P, std::uint64_t m, std::uint64_t R, bool zero) {
  ModularObstruction ob;
  ob.modulus = m;
  for (std::uint64_t r = 0; r < m; ++r)
    if (R >> r & 1) ob.residues.push_back(r);
  const std::size_t n = P.target;
  std::vector<std::uint64_t> res(n, 0);
  auto rot = [m](std::uint64_t mask, std::uint64_t by) {
    by %= m;
    std::uint64_t full = (std::uint64_t{1} << m) - 1;
    return ((mask << by) | (mask >> (m - by))) & full;
  };
  // best[k]: some assignment satisfies levels 1..k.
  std::size_t best = 0;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= m;
  for (std::uint64_t code = 0; code < total && best < P.K; ++code) {
    std::uint64_t c = code;
    for (std::size_t i = 0; i < n; ++i) {
      res[i] = c % m;
      c /= m;
    }
    // reach[i]: bitmask of i-sums mod m
    std::vector<std::uint64_t> reach(n + 1, 0);
    reach[0] = 1;
    for (std::size_t e = 0; e < n; ++e)
      for (std::size_t i = e + 1; i >= 1; --i) reach[i] |= rot(reach[i - 1], res[e]);
    std::size_t ok = 0;
    for (std::size_t k = 1; k <= P.K; ++k) {
      bool level_ok = true;
      if (P.famA) {
        bool any = false;
        for (std::uint64_t t = 0; t < (zero ? 1 : m) && !any; ++t) {
          bool good = true;
          for (std::size_t i = k; i <= std::min(k + P.ell, n) && good; ++i) good = (rot(reach[i], t) & ~R) == 0;
          any = good;
        }
        level_ok = any;
      }
      if (level_ok && P.famB) {
        bool any = false;
        for (std::uint64_t t = 0; t < (zero ? 1 : m) && !any; ++t)
          for (std::uint64_t s = 0; s < (zero ? 1 : m) && !any; ++s) {
            bool good = true;
            for (std::size_t i = 1; i <= std::min(k, n) && good; ++i) good = (rot(reach[i], t + i * s) & ~R) == 0;
            any = good;
          }
        level_ok = any;
      }
      if (!level_ok) break;
      ok = k;
    }
    best = std::max(best, ok);
  }
  ob.level = best < P.K ? best + 1 : 0;
  return ob;
}

inline std::optional<ModularObstruction> find_modular_obstruction(const SearchProblem& P, bool zero) {
  if (P.window < 2) return std::nullopt;
  std::uint64_t from = std::min<std::uint64_t>(64, P.window / 2);
  for (std::uint64_t m = 2; m <= 16; ++m) {
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < P.target && total <= (1u << 16); ++i) total *= m;
    if (total > (1u << 16)) break;
    std::uint64_t R = 0;
    for (std::size_t x = P.Abits.next(from - 1); x < P.Abits.size(); x = P.Abits.next(x + 1)) R |= std::uint64_t{1} << ((x + 1) % m);
    if (R == (std::uint64_t{1} << m) - 1) continue;
    auto ob = modular_obstruction_at(P, m, R, zero);
    if (ob.level == 0) continue;
    std::string res;
    for (auto r : ob.residues) res += (res.empty() ? "" : ",") + std::to_string(r);
    ob.message = std::string(m == 2 ? "parity obstruction: " : "modular obstruction: ") + "A lies in {" + res +
                 "} mod " + std::to_string(m) + " and no residues of B" + (zero ? "" : " and the shifts") +
                 " satisfy levels 1.." + std::to_string(ob.level);
    return ob;
  }
  return std::nullopt;
}

inline SearchResult run_search(CertKind kind, const SetSpec& A, std::size_t ell, const SearchBudget& budget) {
  budget.validate();
  SearchProblem P;
  P.famA = kind != CertKind::ThmB;
  P.famB = kind != CertKind::ThmA;
  P.ell = P.famA ? ell : 0;
  P.K = budget.K;
  P.target = budget.target_B_size ? budget.target_B_size : P.K + P.ell;
  P.window = budget.window;
  P.St = budget.force_zero_shifts ? 1 : std::min(budget.max_t, budget.window);
  P.Ss = budget.force_zero_shifts ? 1 : std::min(budget.max_s, budget.window);
  P.Abits = window_bits(A, budget.window);
  P.density = double(P.Abits.count()) / double(budget.window);
  P.accept = budget.accept_factor * P.density;

  SearchState root;
  root.sums = {{0}};
  if (P.famA) root.CA.assign(P.K, BitVec(P.St));
  if (P.famB) root.DB.assign(P.K, std::vector<BitVec>(P.Ss, BitVec(P.St)));
  for (auto& c : root.CA) c.fill(true);
  for (auto& row : root.DB)
    for (auto& c : row) c.fill(true);

  SearchTrace trace;
  std::vector<SearchState> stack{root};
  std::vector<std::uint64_t> resume{0};  // next candidate lower bound per depth
  std::size_t backtracks = 0;

  while (stack.back().B.size() < P.target) {
    const SearchState& S = stack.back();
    std::uint64_t lo = std::max<std::uint64_t>(S.B.empty() ? 1 : S.B.back() + 1, resume.back());
    std::optional<Evaluation> best;
    std::map<std::pair<std::string, std::size_t>, std::uint64_t> blocked;
    std::uint64_t scanned = 0;
    for (std::uint64_t b = lo; b < lo + budget.max_scan && b <= P.window; ++b) {
      ++scanned;
      auto ev = evaluate(P, S, b);
      if (!ev.feasible) {
        ++blocked[{ev.empty_family, ev.empty_level}];
        continue;
      }
      if (ev.score >= P.accept) {
        best = std::move(ev);
        break;
      }
      if (!best || ev.score > best->score) best = std::move(ev);
    }
    if (!best && (trace.stage.empty() || S.B.size() > trace.deepest_B.size())) {
      trace.deepest_B = S.B;
      trace.stage = "element";
      trace.candidates_scanned = scanned;
      // Report the deepest level any candidate reached; shallower blocks are ordinary misses.
      std::pair<std::string, std::size_t> worst{"", 0};
      std::uint64_t most = 0;
      trace.blocked.clear();
      for (const auto& [key, cnt] : blocked) {
        trace.blocked.push_back({key.first, key.second, cnt});
        if (key.second > worst.second || (key.second == worst.second && cnt > most)) {
          most = cnt;
          worst = key;
        }
      }
      trace.family = worst.first;
      trace.level = worst.second;
      trace.reason = "no element in (" + std::to_string(lo - 1) + ", " + std::to_string(lo - 1 + scanned) +
                     "] keeps every level satisfiable with nondecreasing shifts";
      if (worst.second)
        trace.reason += "; level " + std::to_string(worst.second) + " of family " + worst.first + " emptied for " +
                        std::to_string(most) + " candidates, the deepest level reached";
    }
    if (best) {
      std::uint64_t b = best->next.B.back();
      resume.back() = b + 1;
      stack.push_back(std::move(best->next));
      resume.push_back(0);
      continue;
    }
    if (stack.size() == 1 || backtracks >= budget.backtrack_depth) {
      trace.backtracks = backtracks;
      trace.obstruction = find_modular_obstruction(P, budget.force_zero_shifts);
      SearchResult r;
      r.trace = trace;
      return r;
    }
    ++backtracks;
    stack.pop_back();
    resume.pop_back();
  }

  const SearchState& S = stack.back();
  SumsetCertificate cert;
  cert.kind = kind;
  cert.ell = P.famA ? ell : 0;
  cert.K = P.K;
  cert.window = budget.window;
  cert.B = FiniteNatSet(S.B);
  if (P.famA) {
    auto t = chain_A(S.CA);
    if (kind == CertKind::Mixed)
      cert.t_tilde = *t;
    else
      cert.t = *t;
  }
  if (P.famB) {
    auto ts = chain_B(S.DB);
    cert.t = ts->first;
    cert.s = ts->second;
  }
  SearchResult r;
  r.check = verify(cert, A, budget.window);
  if (r.check->status == CheckStatus::Pass) {
    cert.verified = true;
    r.success = true;
  } else {
    SearchTrace t;
    t.deepest_B = S.B;
    t.stage = "check";
    t.reason = "independent check returned " + status_name(r.check->status);
    t.backtracks = backtracks;
    r.trace = t;
  }
  r.cert = cert;
  return r;
}

}  // namespace detail

// B of size K + ell with shifts t_k such that sums of i elements of B plus t_k lie in A, k <= i <= k + ell.
inline SearchResult search_thmA(const SetSpec& A, std::size_t ell, const SearchBudget& budget) {
  return detail::run_search(CertKind::ThmA, A, ell, budget);
}

// B of size K with shifts (t_k, s_k) such that sums of i elements plus i s_k + t_k lie in A, i <= k.
inline SearchResult search_thmB(const SetSpec& A, const SearchBudget& budget) {
  return detail::run_search(CertKind::ThmB, A, 0, budget);
}

// One B carrying both families.
inline SearchResult search_mixed(const SetSpec& A, std::size_t ell, const SearchBudget& budget) {
  return detail::run_search(CertKind::Mixed, A, ell, budget);
}

inline nlohmann::json to_json(const SearchTrace& t) {
  nlohmann::json j{{"deepest_B", t.deepest_B},   {"stage", t.stage},
                   {"level", t.level},           {"family", t.family},
                   {"reason", t.reason},         {"candidates_scanned", t.candidates_scanned},
                   {"backtracks", t.backtracks}};
  nlohmann::json blocked = nlohmann::json::array();
  for (const auto& b : t.blocked) blocked.push_back({{"family", b.family}, {"level", b.level}, {"candidates", b.candidates}});
  j["blocked"] = blocked;
  if (t.obstruction)
    j["obstruction"] = {{"modulus", t.obstruction->modulus},
                        {"residues", t.obstruction->residues},
                        {"level", t.obstruction->level},
                        {"message", t.obstruction->message}};
  else
    j["obstruction"] = nullptr;
  return j;
}

inline nlohmann::json to_json(const SearchBudget& b) {
  return {{"window", b.window},
          {"max_scan", b.max_scan},
          {"backtrack_depth", b.backtrack_depth},
          {"target_B_size", b.target_B_size},
          {"K", b.K},
          {"max_t", b.max_t},
          {"max_s", b.max_s},
          {"accept_factor", b.accept_factor},
          {"force_zero_shifts", b.force_zero_shifts}};
}

}  // namespace sumdyn

#endif
