#ifndef SUMDYN_CERTIFICATE_HPP
#define SUMDYN_CERTIFICATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "finite_set.hpp"

namespace sumdyn {

inline constexpr int kCertificateVersion = 1;

enum class CertKind { ThmA, ThmB, Mixed };

inline std::string kind_name(CertKind k) {
  switch (k) {
    case CertKind::ThmA: return "ThmA";
    case CertKind::ThmB: return "ThmB";
    case CertKind::Mixed: return "Mixed";
  }
  return "?";
}

inline CertKind parse_kind(const std::string& s) {
  if (s == "ThmA") return CertKind::ThmA;
  if (s == "ThmB") return CertKind::ThmB;
  if (s == "Mixed") return CertKind::Mixed;
  throw ParseError("unknown certificate kind '" + s + "'");
}

struct Violation {
  std::string family;              // "A" or "B"
  std::size_t k = 0;
  std::size_t i = 0;               // |F|
  std::vector<std::uint64_t> F;    // empty if reconstruction ran out of budget
  std::uint64_t sum = 0;           // the tested value sum(F) + shifts
};

// ThmA(ell): range_sums(B, k, k+ell) + t_k in A.  ThmB: oplus(B, i) + i s_k + t_k in A, 1 <= i <= k.
// Mixed(ell): both on one B, with t_tilde the ThmA family and (t, s) the ThmB family.
struct SumsetCertificate {
  CertKind kind = CertKind::ThmA;
  std::size_t ell = 0;
  FiniteNatSet B;
  std::vector<std::int64_t> t;
  std::vector<std::int64_t> s;
  std::vector<std::int64_t> t_tilde;
  std::size_t K = 0;
  std::uint64_t window = 0;
  bool verified = false;
  std::optional<Violation> violation;

  void validate() const {
    auto nondecreasing_nonneg = [](const std::vector<std::int64_t>& v, const char* name) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] < 0) throw InvalidInput(std::string(name) + " entries must be >= 0");
        if (i > 0 && v[i] < v[i - 1]) throw InvalidInput(std::string(name) + " must be nondecreasing");
      }
    };
    if (t.size() != K) throw InvalidInput("length of t must equal K");
    nondecreasing_nonneg(t, "t");
    if (kind == CertKind::ThmA && !s.empty()) throw InvalidInput("ThmA certificates carry no s");
    if (kind != CertKind::ThmA) {
      if (s.size() != K) throw InvalidInput("length of s must equal K");
      nondecreasing_nonneg(s, "s");
    }
    if (kind == CertKind::Mixed) {
      if (t_tilde.size() != K) throw InvalidInput("length of t_tilde must equal K");
      nondecreasing_nonneg(t_tilde, "t_tilde");
    }
  }
};

inline nlohmann::json violation_to_json(const Violation& v) {
  return {{"family", v.family}, {"k", v.k}, {"i", v.i}, {"F", v.F}, {"sum", v.sum}};
}

inline Violation violation_from_json(const nlohmann::json& j) {
  Violation v;
  v.family = j.value("family", std::string("A"));
  v.k = j.at("k").get<std::size_t>();
  v.i = j.value("i", std::size_t{0});
  v.F = j.value("F", std::vector<std::uint64_t>{});
  v.sum = j.at("sum").get<std::uint64_t>();
  return v;
}

inline nlohmann::json to_json(const SumsetCertificate& c) {
  nlohmann::json j;
  j["version"] = kCertificateVersion;
  j["kind"] = kind_name(c.kind);
  j["ell"] = c.ell;
  j["B"] = c.B.elements();
  j["t"] = c.t;
  j["s"] = c.s;
  if (c.kind == CertKind::Mixed) j["t_tilde"] = c.t_tilde;
  j["K"] = c.K;
  j["window"] = c.window;
  j["verified"] = c.verified;
  j["violation"] = c.violation ? violation_to_json(*c.violation) : nlohmann::json(nullptr);
  return j;
}

inline SumsetCertificate certificate_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("version") && j["version"].get<int>() != kCertificateVersion)
      throw ParseError("unsupported certificate version");
    SumsetCertificate c;
    c.kind = parse_kind(j.at("kind").get<std::string>());
    c.ell = j.value("ell", std::size_t{0});
    c.B = FiniteNatSet(j.at("B").get<std::vector<std::uint64_t>>(), {std::size_t(-1), std::uint64_t(-1)});
    c.t = j.at("t").get<std::vector<std::int64_t>>();
    c.s = j.value("s", std::vector<std::int64_t>{});
    c.t_tilde = j.value("t_tilde", std::vector<std::int64_t>{});
    c.K = j.at("K").get<std::size_t>();
    c.window = j.at("window").get<std::uint64_t>();
    c.verified = j.value("verified", false);
    if (j.contains("violation") && !j["violation"].is_null()) c.violation = violation_from_json(j["violation"]);
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("certificate JSON: ") + e.what());
  }
}

}  // namespace sumdyn

#endif
