#ifndef SUMDYN_CHECKS_HPP
#define SUMDYN_CHECKS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bitvec.hpp"
#include "certificate.hpp"
#include "errors.hpp"
#include "setspec.hpp"
#include "sumsets.hpp"

namespace sumdyn {

enum class CheckStatus { Pass, Vacuous, Violation };

inline std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Vacuous: return "vacuous";
    case CheckStatus::Violation: return "violation";
  }
  return "?";
}

struct CheckReport {
  std::string family;
  CheckStatus status = CheckStatus::Vacuous;
  std::uint64_t tested = 0;  // distinct (k, i, sum) values inside the window
  std::uint64_t total = 0;   // distinct (k, i, sum) values overall
  std::optional<Violation> violation;

  double fraction_tested() const { return total ? double(tested) / double(total) : 0.0; }
};

namespace detail {

inline constexpr std::uint64_t kFullDpLimit = std::uint64_t{1} << 27;

// Count-indexed sums of B up to `hi` summands; full range when affordable, else truncated at `cap`.
inline std::vector<BitVec> sums_for_check(const FiniteNatSet& B, std::size_t hi, std::uint64_t cap, bool& exact) {
  hi = std::min(hi, B.size());
  std::uint64_t range = top_sum(B, hi);
  exact = range <= std::max(cap, kFullDpLimit);
  std::uint64_t len = exact ? range : cap;
  std::vector<BitVec> reach(hi + 1, BitVec(len + 1));
  reach[0].set(0);
  std::size_t seen = 0;
  for (auto f : B) {
    ++seen;
    if (f > len) continue;
    for (std::size_t c = std::min(hi, seen); c >= 1; --c) reach[c].or_shifted_up(reach[c - 1], f);
  }
  return reach;
}

// Tests sums + offset in A for all sums in `sums`; records the first failure.
inline void test_level(const BitVec& sums, std::int64_t offset, const BitVec& Abits, std::uint64_t window,
                       CheckReport& rep, std::optional<std::uint64_t>& bad) {
  for (std::size_t x = sums.next(0); x < sums.size(); x = sums.next(x + 1)) {
    ++rep.total;
    std::int64_t v = static_cast<std::int64_t>(x) + offset;
    if (v > static_cast<std::int64_t>(window)) continue;
    ++rep.tested;
    if (!bad && (v < 1 || !Abits.test(static_cast<std::size_t>(v - 1)))) bad = x;
  }
}

inline void finish(CheckReport& rep) {
  if (rep.violation)
    rep.status = CheckStatus::Violation;
  else
    rep.status = rep.tested == 0 ? CheckStatus::Vacuous : CheckStatus::Pass;
}

inline BitVec window_bits(const SetSpec& A, std::uint64_t window) {
  if (window == 0) return BitVec(0);
  if (window > A.horizon())
    throw HorizonError("window " + std::to_string(window) + " exceeds the set's horizon " + std::to_string(A.horizon()));
  return A.member_range(1, window);
}

inline CheckReport check_family_A(const BitVec& Abits, const FiniteNatSet& B, std::size_t ell,
                                  const std::vector<std::int64_t>& t, std::size_t K, std::uint64_t window) {
  CheckReport rep;
  rep.family = "A";
  bool exact = true;
  auto reach = sums_for_check(B, K + ell, window, exact);
  for (std::size_t k = 1; k <= K && !rep.violation; ++k) {
    for (std::size_t i = k; i <= k + ell && i < reach.size() && !rep.violation; ++i) {
      std::optional<std::uint64_t> bad;
      test_level(reach[i], t[k - 1], Abits, window, rep, bad);
      if (bad) {
        auto F = find_subset(B, i, *bad);
        rep.violation = Violation{"A", k, i, F ? *F : std::vector<std::uint64_t>{},
                                  static_cast<std::uint64_t>(static_cast<std::int64_t>(*bad) + t[k - 1])};
      }
    }
  }
  finish(rep);
  return rep;
}

inline CheckReport check_family_B(const BitVec& Abits, const FiniteNatSet& B, const std::vector<std::int64_t>& t,
                                  const std::vector<std::int64_t>& s, std::size_t K, std::uint64_t window) {
  CheckReport rep;
  rep.family = "B";
  bool exact = true;
  auto reach = sums_for_check(B, K, window, exact);
  for (std::size_t k = 1; k <= K && !rep.violation; ++k) {
    for (std::size_t i = 1; i <= k && i < reach.size() && !rep.violation; ++i) {
      std::optional<std::uint64_t> bad;
      std::int64_t off = static_cast<std::int64_t>(i) * s[k - 1] + t[k - 1];
      test_level(reach[i], off, Abits, window, rep, bad);
      if (bad) {
        auto F = find_subset(B, i, *bad);
        rep.violation = Violation{"B", k, i, F ? *F : std::vector<std::uint64_t>{},
                                  static_cast<std::uint64_t>(static_cast<std::int64_t>(*bad) + off)};
      }
    }
  }
  finish(rep);
  return rep;
}

}  // namespace detail

inline CheckReport check_thmA(const SetSpec& A, const SumsetCertificate& cert, std::uint64_t window) {
  if (cert.kind == CertKind::ThmB) throw InvalidInput("check_thmA needs a ThmA or Mixed certificate");
  const auto& t = cert.kind == CertKind::Mixed ? cert.t_tilde : cert.t;
  if (t.size() < cert.K) throw InvalidInput("shift list shorter than K");
  BitVec Abits = detail::window_bits(A, window);
  return detail::check_family_A(Abits, cert.B, cert.ell, t, cert.K, window);
}

inline CheckReport check_thmB(const SetSpec& A, const SumsetCertificate& cert, std::uint64_t window) {
  if (cert.kind == CertKind::ThmA) throw InvalidInput("check_thmB needs a ThmB or Mixed certificate");
  if (cert.t.size() < cert.K || cert.s.size() < cert.K) throw InvalidInput("shift lists shorter than K");
  BitVec Abits = detail::window_bits(A, window);
  return detail::check_family_B(Abits, cert.B, cert.t, cert.s, cert.K, window);
}

struct VerifyReport {
  CheckStatus status = CheckStatus::Vacuous;
  std::vector<CheckReport> parts;
};

// Re-derives everything from (A, B, shifts); ignores the certificate's own verified flag.
inline VerifyReport verify(const SumsetCertificate& cert, const SetSpec& A, std::uint64_t window) {
  VerifyReport out;
  if (cert.kind != CertKind::ThmB) out.parts.push_back(check_thmA(A, cert, window));
  if (cert.kind != CertKind::ThmA) out.parts.push_back(check_thmB(A, cert, window));
  bool any_violation = false, all_vacuous = true;
  for (const auto& p : out.parts) {
    any_violation = any_violation || p.status == CheckStatus::Violation;
    all_vacuous = all_vacuous && p.status == CheckStatus::Vacuous;
  }
  out.status = any_violation ? CheckStatus::Violation : all_vacuous ? CheckStatus::Vacuous : CheckStatus::Pass;
  return out;
}

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j{{"family", r.family},
                   {"status", status_name(r.status)},
                   {"tested", r.tested},
                   {"total", r.total},
                   {"fraction_tested", r.fraction_tested()}};
  j["violation"] = r.violation ? violation_to_json(*r.violation) : nlohmann::json(nullptr);
  return j;
}

inline nlohmann::json to_json(const VerifyReport& r) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : r.parts) parts.push_back(to_json(p));
  return {{"status", status_name(r.status)}, {"checks", parts}};
}

}  // namespace sumdyn

#endif
