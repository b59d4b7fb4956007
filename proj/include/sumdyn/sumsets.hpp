#ifndef SUMDYN_SUMSETS_HPP
#define SUMDYN_SUMSETS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>
#include <string>
#include <unordered_set>
#include <vector>

#include "bitvec.hpp"
#include "errors.hpp"
#include "finite_set.hpp"

namespace sumdyn {

namespace detail {

inline FiniteNatSet bits_to_set(const BitVec& bits, const Limits& lim) {
  std::vector<std::uint64_t> out;
  for (std::size_t x = bits.next(0); x < bits.size(); x = bits.next(x + 1)) out.push_back(x);
  return FiniteNatSet(std::move(out), lim);
}

inline std::uint64_t top_sum(const FiniteNatSet& F, std::size_t i) {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < i; ++j) s += F[F.size() - 1 - j];
  return s;
}

// reach[c] = sums of c distinct elements of F, for c in [0, hi].
inline std::vector<BitVec> count_dp(const FiniteNatSet& F, std::size_t hi, const Limits& lim) {
  hi = std::min(hi, F.size());
  std::uint64_t range = top_sum(F, hi);
  if (range > lim.max_value)
    throw CapacityError("sumset range " + std::to_string(range) + " exceeds limit " + std::to_string(lim.max_value));
  std::vector<BitVec> reach(hi + 1, BitVec(range + 1));
  reach[0].set(0);
  std::size_t seen = 0;
  for (auto f : F) {
    ++seen;
    for (std::size_t c = std::min(hi, seen); c >= 1; --c) reach[c].or_shifted_up(reach[c - 1], f);
  }
  return reach;
}

}  // namespace detail

// F^{(+)i}: sums of i distinct elements.
inline FiniteNatSet oplus(const FiniteNatSet& F, std::size_t i, const Limits& lim = {}) {
  if (i > F.size()) return {};
  if (i == 0) return FiniteNatSet({0});
  auto reach = detail::count_dp(F, i, lim);
  return detail::bits_to_set(reach[i], lim);
}

inline FiniteNatSet oplus_brute(const FiniteNatSet& F, std::size_t i) {
  if (F.size() > 20) throw InvalidInput("oplus_brute needs |F| <= 20");
  std::vector<std::uint64_t> out;
  const std::uint32_t n = static_cast<std::uint32_t>(F.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != i) continue;
    std::uint64_t s = 0;
    for (std::uint32_t j = 0; j < n; ++j)
      if (mask >> j & 1u) s += F[j];
    out.push_back(s);
  }
  return FiniteNatSet::from_unsorted(std::move(out), {std::size_t(-1), std::uint64_t(-1)});
}

// Union of F^{(+)i} for k <= i <= l.
inline FiniteNatSet range_sums(const FiniteNatSet& F, std::size_t k, std::size_t l, const Limits& lim = {}) {
  if (k > l) throw InvalidInput("range_sums needs k <= l");
  if (k > F.size()) return {};
  auto reach = detail::count_dp(F, l, lim);
  BitVec acc(reach[0].size());
  for (std::size_t i = k; i < reach.size(); ++i) acc |= reach[i];
  return detail::bits_to_set(acc, lim);
}

// F + ... + F (k copies, repetition allowed), truncated to [0, window].
inline FiniteNatSet kfold_sum(const FiniteNatSet& F, std::size_t k, std::uint64_t window, const Limits& lim = {}) {
  if (window > lim.max_value) throw CapacityError("window exceeds value limit");
  BitVec cur(window + 1);
  cur.set(0);
  for (std::size_t step = 0; step < k; ++step) {
    BitVec nxt(window + 1);
    for (auto f : F) {
      if (f > window) break;
      nxt.or_shifted_up(cur, f);
    }
    cur = std::move(nxt);
  }
  return detail::bits_to_set(cur, lim);
}

// B_1 + B_2 + ... + B_k (one summand from each set), truncated to [0, window].
inline FiniteNatSet kfold_sum(const std::vector<FiniteNatSet>& family, std::uint64_t window,
                              const Limits& lim = {}) {
  if (family.empty()) throw InvalidInput("kfold_sum needs a nonempty family");
  if (window > lim.max_value) throw CapacityError("window exceeds value limit");
  BitVec cur(window + 1);
  cur.set(0);
  for (const auto& Bj : family) {
    BitVec nxt(window + 1);
    for (auto f : Bj) {
      if (f > window) break;
      nxt.or_shifted_up(cur, f);
    }
    cur = std::move(nxt);
  }
  return detail::bits_to_set(cur, lim);
}

// A subset of F of the given size with the given sum, smallest elements preferred.
inline std::optional<std::vector<std::uint64_t>> find_subset(const FiniteNatSet& F, std::size_t size,
                                                             std::uint64_t target,
                                                             std::size_t node_budget = 5'000'000) {
  const auto& v = F.elements();
  const std::size_t n = v.size();
  if (size > n) return std::nullopt;
  std::vector<std::uint64_t> pick;
  std::set<std::tuple<std::size_t, std::size_t, std::uint64_t>> dead;
  std::size_t nodes = 0;
  auto rec = [&](auto&& self, std::size_t j, std::size_t c, std::uint64_t t) -> bool {
    if (c == 0) return t == 0;
    if (n - j < c || ++nodes > node_budget) return false;
    std::uint64_t lo = 0, hi = 0;
    for (std::size_t q = 0; q < c; ++q) lo += v[j + q], hi += v[n - 1 - q];
    if (t < lo || t > hi) return false;
    auto kk = std::make_tuple(j, c, t);
    if (dead.count(kk)) return false;
    if (v[j] <= t) {
      pick.push_back(v[j]);
      if (self(self, j + 1, c - 1, t - v[j])) return true;
      pick.pop_back();
    }
    if (self(self, j + 1, c, t)) return true;
    dead.insert(kk);
    return false;
  };
  if (rec(rec, 0, size, target)) return pick;
  return std::nullopt;
}

struct CofiniteChain {
  std::vector<std::uint64_t> b;        // b_1, b_2, ...
  std::vector<FiniteNatSet> C;         // C_i = {b_j : j >= i}
};

// Greedy diagonal choice b_i = min(B_i \ {b_1..b_{i-1}}) through a nested chain of prefixes.
inline CofiniteChain nested_to_cofinite(const std::vector<FiniteNatSet>& chain, std::size_t depth) {
  if (depth > chain.size()) throw InvalidInput("depth exceeds chain length");
  for (std::size_t i = 1; i < depth; ++i) {
    std::uint64_t reach = std::min(chain[i - 1].max(), chain[i].max());
    for (auto x : chain[i]) {
      if (x > reach) break;
      if (!chain[i - 1].contains(x))
        throw InvalidInput("chain not nested at index " + std::to_string(i + 1) + ": element " +
                           std::to_string(x) + " missing from B_" + std::to_string(i));
    }
  }
  CofiniteChain out;
  std::unordered_set<std::uint64_t> used;
  for (std::size_t i = 0; i < depth; ++i) {
    bool found = false;
    for (auto x : chain[i]) {
      if (!used.count(x)) {
        out.b.push_back(x);
        used.insert(x);
        found = true;
        break;
      }
    }
    if (!found) throw InvalidInput("prefix B_" + std::to_string(i + 1) + " exhausted by earlier choices");
  }
  for (std::size_t i = 0; i < depth; ++i)
    out.C.push_back(FiniteNatSet::from_unsorted({out.b.begin() + static_cast<std::ptrdiff_t>(i), out.b.end()},
                                                {std::size_t(-1), std::uint64_t(-1)}));
  return out;
}

inline std::vector<std::uint64_t> first_primes(std::size_t k) {
  std::vector<std::uint64_t> p;
  for (std::uint64_t n = 2; p.size() < k; ++n) {
    bool prime = true;
    for (auto q : p) {
      if (q * q > n) break;
      if (n % q == 0) {
        prime = false;
        break;
      }
    }
    if (prime) p.push_back(n);
  }
  return p;
}

// B_j = { b_{p_j^n} + t_j - t_{j-1} : 1 <= n <= cap, p_j^n <= |B| }, t_0 = 0, 1-based indices into B.
inline std::vector<FiniteNatSet> prime_power_family(const FiniteNatSet& B, const std::vector<std::int64_t>& t,
                                                    std::size_t k, std::size_t cap = 64,
                                                    std::vector<std::uint64_t> primes = {}) {
  if (primes.empty()) primes = first_primes(k);
  if (primes.size() < k) throw InvalidInput("need k primes");
  if (t.size() < k) throw InvalidInput("need shifts t_1..t_k");
  std::vector<FiniteNatSet> out;
  for (std::size_t j = 0; j < k; ++j) {
    std::int64_t delta = t[j] - (j == 0 ? 0 : t[j - 1]);
    std::vector<std::uint64_t> elems;
    std::size_t n = 1;
    for (std::uint64_t idx = primes[j]; idx <= B.size() && n <= cap; idx *= primes[j], ++n) {
      std::int64_t v = static_cast<std::int64_t>(B[idx - 1]) + delta;
      if (v < 0) throw InvalidInput("shift difference makes an element negative");
      elems.push_back(static_cast<std::uint64_t>(v));
    }
    if (elems.empty())
      throw InvalidInput("insufficient B length: |B| = " + std::to_string(B.size()) + " < p_" +
                         std::to_string(j + 1) + " = " + std::to_string(primes[j]));
    out.push_back(FiniteNatSet(std::move(elems), {std::size_t(-1), std::uint64_t(-1)}));
  }
  return out;
}

}  // namespace sumdyn

#endif
