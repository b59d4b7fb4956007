#ifndef SUMDYN_PROGRESSIVE_HPP
#define SUMDYN_PROGRESSIVE_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bitvec.hpp"
#include "ergodic.hpp"
#include "errors.hpp"
#include "nilsystem.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "torus.hpp"

namespace sumdyn {

// One factor of a sigma-integral of box indicators: 1_{U_box}(T^{coord * p + shift} a).
// coord 0 is the delta_a marginal and does not depend on p.
struct PatternTerm {
  std::size_t coord;
  std::uint64_t shift;
  std::size_t box;
};

// Left pattern for U_1..U_k at lag n.
inline std::vector<PatternTerm> left_pattern(std::size_t k, std::uint64_t n) {
  std::vector<PatternTerm> p{{0, n, 0}};
  for (std::size_t j = 1; j <= k; ++j) p.push_back({j, 0, j - 1});
  for (std::size_t j = 1; j < k; ++j) p.push_back({j, n, j});
  return p;
}

// Right pattern for U_1..U_{k-1} at lag n.
inline std::vector<PatternTerm> right_pattern(std::size_t k, std::uint64_t n) {
  std::vector<PatternTerm> p;
  for (std::size_t j = 1; j < k; ++j) p.push_back({j, 0, j - 1});
  for (std::size_t j = 2; j <= k; ++j) p.push_back({j, n, j - 2});
  return p;
}

// Multiple right pattern on sigma_{k+ell} for U = U_1 x ... x U_k at lags n + i m.
inline std::vector<PatternTerm> multi_right_pattern(std::size_t k, std::size_t ell, std::uint64_t n, std::uint64_t m) {
  std::vector<PatternTerm> p;
  for (std::size_t c = 1; c <= k; ++c) p.push_back({c, 0, c - 1});
  for (std::size_t i = 1; i <= ell; ++i)
    for (std::size_t c = i + 1; c <= i + k; ++c) p.push_back({c, n + i * m, c - i - 1});
  return p;
}

// F * prod_i T_Delta^{n + i m} F on sigma_k with F = 1 (x) 1_{A_1} (x) ... (x) 1_{A_k}.
inline std::vector<PatternTerm> recurrence_pattern(std::size_t k, std::size_t ell, std::uint64_t n, std::uint64_t m) {
  std::vector<PatternTerm> p;
  for (std::size_t i = 0; i <= ell; ++i)
    for (std::size_t c = 1; c <= k; ++c) p.push_back({c, i == 0 ? 0 : n + i * m, c - 1});
  return p;
}

// Membership of T^x a in each box for x in [0, span), regrouped by stride so that
// 1_U(T^{c p + h} a), p = 1..N, is a contiguous bit range.
class OrbitBits {
 public:
  OrbitBits(const FixedSystem& sys, const TorusPoint<FixedArith>& a, const std::vector<TorusBox>& boxes,
            std::size_t max_coord, std::uint64_t span)
      : max_coord_(max_coord), span_(span) {
    std::vector<CompiledBox<FixedArith>> cb;
    for (const auto& b : boxes) {
      if (b.dim() != sys.dim()) throw InvalidInput("box dimension does not match the system");
      cb.emplace_back(b, sys.arith());
    }
    std::vector<BitVec> flat(boxes.size(), BitVec(span));
    OrbitCursor<FixedArith> cur(sys, a, 0, 1);
    for (std::uint64_t x = 0; x < span; ++x, cur.advance())
      for (std::size_t b = 0; b < cb.size(); ++b)
        if (cb[b].contains(cur.point())) flat[b].set(x);
    flat_ = flat;
    strided_.resize(boxes.size());
    for (std::size_t b = 0; b < boxes.size(); ++b) {
      strided_[b].resize(max_coord + 1);
      for (std::size_t c = 1; c <= max_coord; ++c)
        for (std::size_t r = 0; r < c; ++r) {
          BitVec v((span - r + c - 1) / c);
          for (std::uint64_t q = 0; q < v.size(); ++q)
            if (flat[b].test(q * c + r)) v.set(q);
          strided_[b][c].push_back(std::move(v));
        }
    }
  }

  std::uint64_t span() const { return span_; }
  bool member(std::size_t box, std::uint64_t x) const { return flat_[box].test(x); }

  // sum_{p = 1..N} prod_terms; terms with coord 0 are constant factors.
  std::uint64_t count(const std::vector<PatternTerm>& terms, std::uint64_t N) const {
    struct Src {
      const BitVec* bits;
      std::uint64_t off;
    };
    std::vector<Src> src;
    for (const auto& t : terms) {
      if (t.coord == 0) {
        if (t.shift >= span_) throw InvalidInput("pattern reaches past the orbit table");
        if (!flat_[t.box].test(t.shift)) return 0;
        continue;
      }
      if (t.coord > max_coord_) throw InvalidInput("pattern coordinate exceeds the orbit table");
      const BitVec& v = strided_[t.box][t.coord][t.shift % t.coord];
      std::uint64_t off = 1 + t.shift / t.coord;
      if (off + N > v.size()) throw InvalidInput("pattern reaches past the orbit table");
      src.push_back({&v, off});
    }
    if (src.empty()) return N;
    std::uint64_t total = 0;
    for (std::uint64_t w = 0; w < N; w += 64) {
      std::uint64_t acc = ~std::uint64_t{0};
      for (const auto& s : src) {
        acc &= s.bits->word_at(s.off + w);
        if (!acc) break;
      }
      if (N - w < 64) acc &= (std::uint64_t{1} << (N - w)) - 1;
      total += static_cast<std::uint64_t>(__builtin_popcountll(acc));
    }
    return total;
  }

 private:
  std::size_t max_coord_;
  std::uint64_t span_;
  std::vector<BitVec> flat_;
  std::vector<std::vector<std::vector<BitVec>>> strided_;
};

// Direct recount through the exact rational orbit, one point at a time; shares nothing with OrbitBits.
class DirectCounter {
 public:
  DirectCounter(std::size_t s, const Rational& alpha, const std::vector<Rational>& base, const std::vector<TorusBox>& boxes)
      : sys_(make_rational_system(s, alpha, base)), a_(sys_.from_rationals(base)) {
    for (std::size_t j = 0; j < s; ++j) zero_base_ = zero_base_ && base[j] == 0;
    for (const auto& b : boxes) boxes_.emplace_back(b, sys_.arith());
  }

  std::uint64_t count(const std::vector<PatternTerm>& terms, std::uint64_t N) const {
    std::uint64_t total = 0;
    for (std::uint64_t p = 1; p <= N; ++p) {
      bool in = true;
      for (const auto& t : terms) {
        std::uint64_t x = t.coord * p + t.shift;
        if (t.coord == 0) x = t.shift;
        if (!boxes_[t.box].contains(point(x))) {
          in = false;
          break;
        }
      }
      total += in ? 1 : 0;
    }
    return total;
  }

 private:
  TorusPoint<ResidueArith> point(std::uint64_t x) const {
    if (zero_base_) return sys_.orbit_point(sys_.zero(), x);
    return sys_.apply(sys_.power(x), a_);
  }

  RationalSystem sys_;
  TorusPoint<ResidueArith> a_;
  bool zero_base_ = true;
  std::vector<CompiledBox<ResidueArith>> boxes_;
};

struct ScanOptions {
  std::uint64_t N = 100000;           // sigma quadrature length
  std::optional<double> threshold;    // default: see scan_threshold
  std::uint64_t min_count = 5;
  std::size_t max_hits = 0;           // 0 = no limit
  bool recount = true;
};

struct ScanHit {
  std::uint64_t n = 0;
  std::uint64_t m = 0;
  double estimate = 0;
  double recount = -1;  // -1 when not recounted
  bool confirmed = false;
};

struct ScanResult {
  std::string kind;
  double seed_mass = 0;
  double threshold = 0;
  std::uint64_t scanned = 0;
  std::vector<ScanHit> hits;
};

// max(min_count / N, 0.1 * product of the volumes of every box factor in the pattern).
inline double scan_threshold(const std::vector<PatternTerm>& terms, const std::vector<TorusBox>& boxes,
                             const ScanOptions& opt) {
  if (opt.threshold) return *opt.threshold;
  double vol = 0.1;
  for (const auto& t : terms) vol *= to_double(boxes[t.box].volume());
  return std::max(double(opt.min_count) / double(opt.N), vol);
}

struct ScanSystem {
  std::size_t s = 1;
  Rational alpha;
  std::vector<Rational> base;  // empty = origin
};

namespace detail {

inline std::vector<Rational> base_of(const ScanSystem& sys) {
  return sys.base.empty() ? std::vector<Rational>(sys.s, Rational(0)) : sys.base;
}

template <class PatternFn>
ScanResult run_scan(const ScanSystem& ss, const std::vector<TorusBox>& boxes, std::size_t max_coord,
                    std::uint64_t max_shift, const std::vector<PatternTerm>& seed,
                    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& lags, PatternFn pattern,
                    const ScanOptions& opt, const char* kind) {
  if (opt.N == 0) throw InvalidInput("N must be >= 1");
  FixedSystem sys = make_fixed_system(ss.s, ss.alpha);
  auto base = base_of(ss);
  OrbitBits bits(sys, sys.from_rationals(base), boxes, max_coord, max_coord * (opt.N + 2) + max_shift + 64);
  std::optional<DirectCounter> direct;
  if (opt.recount) direct.emplace(ss.s, ss.alpha, base, boxes);
  ScanResult res;
  res.kind = kind;
  res.seed_mass = double(bits.count(seed, opt.N)) / double(opt.N);
  if (lags.empty()) return res;
  res.threshold = scan_threshold(pattern(lags.front().first, lags.front().second), boxes, opt);
  for (const auto& [n, m] : lags) {
    ++res.scanned;
    auto terms = pattern(n, m);
    double est = double(bits.count(terms, opt.N)) / double(opt.N);
    if (!(est > res.threshold)) continue;
    ScanHit h{n, m, est};
    if (direct) {
      h.recount = double(direct->count(terms, opt.N)) / double(opt.N);
      h.confirmed = h.recount >= est / 2 && h.recount <= est * 2;
    }
    res.hits.push_back(h);
    if (opt.max_hits && res.hits.size() >= opt.max_hits) break;
  }
  return res;
}

}  // namespace detail

// n <= n_max with sigma_k((X x U) n T_Delta^{-n}(U x X)) above threshold.
inline ScanResult left_progressive_scan(const ScanSystem& sys, std::size_t k, const std::vector<TorusBox>& U,
                                        std::uint64_t n_max, const ScanOptions& opt = {}) {
  if (k < 1 || U.size() != k) throw InvalidInput("left scan needs k boxes");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> lags;
  for (std::uint64_t n = 1; n <= n_max; ++n) lags.push_back({n, 0});
  std::vector<PatternTerm> seed;
  for (std::size_t j = 1; j <= k; ++j) seed.push_back({j, 0, j - 1});
  return detail::run_scan(sys, U, k, n_max, seed, lags,
                          [k](std::uint64_t n, std::uint64_t) { return left_pattern(k, n); }, opt, "left");
}

// n <= n_max with sigma_k((X x U x X) n T_Delta^{-n}(X x X x U)) above threshold; U has k-1 boxes.
inline ScanResult right_progressive_scan(const ScanSystem& sys, std::size_t k, const std::vector<TorusBox>& U,
                                         std::uint64_t n_max, const ScanOptions& opt = {}) {
  if (k < 2 || U.size() != k - 1) throw InvalidInput("right scan needs k >= 2 and k-1 boxes");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> lags;
  for (std::uint64_t n = 1; n <= n_max; ++n) lags.push_back({n, 0});
  std::vector<PatternTerm> seed;
  for (std::size_t j = 1; j < k; ++j) seed.push_back({j, 0, j - 1});
  return detail::run_scan(sys, U, k, n_max, seed, lags,
                          [k](std::uint64_t n, std::uint64_t) { return right_pattern(k, n); }, opt, "right");
}

// Pairs (n, m), n <= n_max, m <= m_max, scanned by increasing n + m, then n.
inline ScanResult multiple_right_scan(const ScanSystem& sys, std::size_t k, std::size_t ell,
                                      const std::vector<TorusBox>& U, std::uint64_t n_max, std::uint64_t m_max,
                                      const ScanOptions& opt = {}) {
  if (k < 1 || ell < 1 || U.size() != k) throw InvalidInput("multiple right scan needs k boxes and ell >= 1");
  std::vector<std::pair<std::uint64_t, std::uint64_t>> lags;
  for (std::uint64_t d = 2; d <= n_max + m_max; ++d)
    for (std::uint64_t n = std::max<std::uint64_t>(1, d > m_max ? d - m_max : 1); n <= std::min(n_max, d - 1); ++n)
      lags.push_back({n, d - n});
  std::vector<PatternTerm> seed;
  for (std::size_t j = 1; j <= k; ++j) seed.push_back({j, 0, j - 1});
  return detail::run_scan(sys, U, k + ell, n_max + ell * m_max, seed, lags,
                          [k, ell](std::uint64_t n, std::uint64_t m) { return multi_right_pattern(k, ell, n, m); },
                          opt, "multi");
}

// (1/M) sum_m (1/N) sum_n integral of F prod_{i<=ell} T_Delta^{n+im} F d sigma_k, sigma_k by a Q-point quadrature.
inline AverageEstimate multiple_recurrence_average(const ScanSystem& ss, std::size_t k, std::size_t ell,
                                                   const std::vector<TorusBox>& A, std::uint64_t M, std::uint64_t N,
                                                   std::uint64_t Q = 4096, unsigned threads = 1) {
  if (k < 1 || A.size() != k) throw InvalidInput("need k boxes");
  if (M == 0 || N == 0 || Q == 0) throw InvalidInput("M, N, Q must be >= 1");
  AverageEstimate e;
  e.N = N;
  e.M = M;
  e.mode = FixedArith::name();
  bool all_full = true;
  for (const auto& b : A) all_full = all_full && b.volume() == 1;
  if (all_full) {
    e.value = e.half_value = 1;
    e.exact = Rational(1);
    return e;
  }
  FixedSystem sys = make_fixed_system(ss.s, ss.alpha);
  auto base = detail::base_of(ss);
  OrbitBits bits(sys, sys.from_rationals(base), A, k, k * (Q + 2) + N + ell * M + 64);
  const std::uint64_t chunk = 8;
  std::vector<double> partial(chunk_count(M, chunk), 0.0), partial_half(partial.size(), 0.0);
  std::uint64_t Mh = std::max<std::uint64_t>(M / 2, 1);
  for_chunks(M, chunk, threads, [&](std::uint64_t c, std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t mi = lo; mi < hi; ++mi) {
      std::uint64_t m = mi + 1, total = 0;
      for (std::uint64_t n = 1; n <= N; ++n) total += bits.count(recurrence_pattern(k, ell, n, m), Q);
      double v = double(total) / (double(N) * double(Q));
      partial[c] += v;
      if (m <= Mh) partial_half[c] += v;
    }
  });
  double sum = 0, sum_half = 0;
  for (std::size_t c = 0; c < partial.size(); ++c) {
    sum += partial[c];
    sum_half += partial_half[c];
  }
  e.value = sum / double(M);
  e.half_value = sum_half / double(Mh);
  return e;
}

}  // namespace sumdyn

#endif
