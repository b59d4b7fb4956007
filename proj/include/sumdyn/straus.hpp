#ifndef SUMDYN_STRAUS_HPP
#define SUMDYN_STRAUS_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "finite_set.hpp"
#include "rational.hpp"
#include "setspec.hpp"
#include "sumsets.hpp"

namespace sumdyn {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// A = N \ U_n U_{j<n} (p_n N + j), with N = {1, 2, ...} and n counted from 1.
struct StrausSpec {
  std::vector<std::uint64_t> primes;

  explicit StrausSpec(std::vector<std::uint64_t> p) : primes(std::move(p)) {
    if (primes.empty()) throw InvalidInput("need at least one prime");
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (!is_prime(primes[i])) throw InvalidInput(std::to_string(primes[i]) + " is not prime");
      if (i > 0 && primes[i] <= primes[i - 1]) throw InvalidInput("primes must be strictly increasing");
      if (primes[i] <= i) throw InvalidInput("p_n must exceed n");
    }
  }

  // Direct modular test, independent of the expression tree.
  bool member(std::uint64_t m) const {
    if (m == 0) return false;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      std::uint64_t p = primes[i], n = i + 1;
      if (m >= p && m % p < n) return false;
    }
    return true;
  }

  Rational density_bound() const {
    Rational d = 1;
    for (std::size_t i = 0; i < primes.size(); ++i) d -= Rational(BigInt(i + 1), BigInt(primes[i]));
    return d;
  }
};

inline SetSpec make_straus(const StrausSpec& spec) {
  std::vector<SetSpec> excluded;
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    std::uint64_t p = spec.primes[i];
    for (std::uint64_t j = 0; j <= i; ++j) {
      if (j == 0)
        excluded.push_back(SetSpec::residue(p, 0));
      else
        excluded.push_back(
            SetSpec::intersect({SetSpec::residue(p, j), SetSpec::complement(SetSpec::finite_set({j}))}));
    }
  }
  return SetSpec::complement(SetSpec::unite(std::move(excluded)));
}

struct ObstructionWitness {
  std::size_t k = 0;                // |F|
  std::vector<std::uint64_t> F;     // subset of B
  std::uint64_t sum = 0;            // sum(F) + t, outside A
  std::uint64_t prime = 0;          // 0 when found by direct search
  std::uint64_t residue = 0;        // class of F's elements mod prime
};

// Residue construction: d elements of one class mod p_n (p_n > t) whose sum plus t lands in p_n N + j, j < n.
inline std::optional<ObstructionWitness> obstruct_residue(const StrausSpec& spec, const SetSpec& A,
                                                          const FiniteNatSet& B, std::uint64_t t,
                                                          std::size_t k_lo, std::size_t k_hi) {
  if (k_lo < 1 || k_lo > k_hi) throw InvalidInput("need 1 <= k_lo <= k_hi");
  for (std::size_t idx = 0; idx < spec.primes.size(); ++idx) {
    const std::uint64_t p = spec.primes[idx], n = idx + 1;
    if (p <= t) continue;
    std::vector<std::vector<std::uint64_t>> cls(p);
    for (auto b : B)
      if (b > 0) cls[b % p].push_back(b);
    for (std::uint64_t c = 0; c < p; ++c) {
      const auto& members = cls[c];
      std::size_t top = std::min(k_hi, members.size());
      for (std::size_t d = k_lo; d <= top; ++d) {
        bool hits = c == 0 ? t < n : (d % p * c + t) % p == 0;
        if (!hits) continue;
        ObstructionWitness w;
        w.k = d;
        w.F.assign(members.begin(), members.begin() + static_cast<std::ptrdiff_t>(d));
        w.sum = t;
        for (auto x : w.F) w.sum += x;
        w.prime = p;
        w.residue = c;
        if (!A.member(w.sum)) return w;
        break;
      }
    }
  }
  return std::nullopt;
}

struct Refutation {
  std::uint64_t t = 0;
  std::string method;  // "residue", "direct" or "none"
  std::optional<ObstructionWitness> witness;
};

// For each t <= t_bound, a subset F of B with |F| <= K and sum(F) + t outside A.
inline std::vector<Refutation> refute_fixed_B(const SetSpec& A, const std::optional<StrausSpec>& straus,
                                              const FiniteNatSet& B, std::size_t K, std::uint64_t t_bound,
                                              std::uint64_t window, std::size_t direct_max_size = 4) {
  std::vector<Refutation> out;
  std::size_t cap = std::min({K, direct_max_size, B.size()});
  std::vector<BitVec> reach;
  if (cap > 0) reach = detail::count_dp(B, cap, {std::size_t(-1), std::uint64_t(-1)});
  for (std::uint64_t t = 0; t <= t_bound; ++t) {
    Refutation r{t, "none", std::nullopt};
    if (straus) {
      if (auto w = obstruct_residue(*straus, A, B, t, 1, K); w && w->sum <= window) {
        r.method = "residue";
        r.witness = w;
      }
    }
    for (std::size_t i = 1; !r.witness && i <= cap; ++i) {
      const BitVec& sums = reach[i];
      for (std::size_t s = sums.next(0); s < sums.size(); s = sums.next(s + 1)) {
        std::uint64_t v = s + t;
        if (v > window) break;
        if (v == 0 || A.member(v)) continue;
        auto F = find_subset(B, i, s);
        if (!F) continue;
        r.method = "direct";
        r.witness = ObstructionWitness{i, *F, v, 0, 0};
        break;
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace sumdyn

#endif
