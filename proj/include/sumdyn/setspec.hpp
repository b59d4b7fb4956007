#ifndef SUMDYN_SETSPEC_HPP
#define SUMDYN_SETSPEC_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bitvec.hpp"
#include "errors.hpp"
#include "nilsystem.hpp"
#include "rational.hpp"
#include "torus.hpp"

namespace sumdyn {

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

struct HorizonError : Error {
  using Error::Error;
};

class SetSpec;

namespace node {

struct Residue {
  std::uint64_t m, r;
};
struct Union {
  std::vector<SetSpec> of;
};
struct Intersection {
  std::vector<SetSpec> of;
};
struct Complement {
  std::vector<SetSpec> of;  // exactly one
};
struct Shift {
  std::vector<SetSpec> of;  // exactly one
  std::int64_t t;
};
// Bits for n in [offset, offset + bits.size()). Outside: empty if finite, else undefined past the end.
struct Window {
  std::uint64_t offset;
  BitVec bits;
  bool finite;
};
// {n in [1, horizon] : T^n a in E} for an affine torus system in fixed-point mode.
struct ReturnTimes {
  std::size_t s;
  Rational alpha;
  std::vector<Rational> base;
  TorusBox box;
  std::uint64_t horizon;
  BitVec bits;  // bit i <-> n = i + 1
};

}  // namespace node

// Immutable set-of-naturals expression tree; all sets live in {1, 2, 3, ...}.
class SetSpec {
 public:
  using Node = std::variant<node::Residue, node::Union, node::Intersection, node::Complement, node::Shift,
                            node::Window, node::ReturnTimes>;

  SetSpec() : SetSpec(node::Union{}) {}
  explicit SetSpec(Node n) : n_(std::make_shared<const Node>(std::move(n))) {}

  const Node& node() const { return *n_; }

  static SetSpec residue(std::uint64_t m, std::uint64_t r) {
    if (m == 0) throw InvalidInput("residue modulus must be positive");
    return SetSpec(node::Residue{m, r % m});
  }
  static SetSpec everything() { return residue(1, 0); }
  static SetSpec empty() { return SetSpec(node::Union{}); }
  static SetSpec unite(std::vector<SetSpec> of) { return SetSpec(node::Union{std::move(of)}); }
  static SetSpec intersect(std::vector<SetSpec> of) { return SetSpec(node::Intersection{std::move(of)}); }
  static SetSpec complement(SetSpec s) { return SetSpec(node::Complement{{std::move(s)}}); }
  static SetSpec shift(SetSpec s, std::int64_t t) { return SetSpec(node::Shift{{std::move(s)}, t}); }
  static SetSpec window(std::uint64_t offset, BitVec bits, bool finite) {
    if (offset == 0) throw InvalidInput("window offset must be >= 1");
    return SetSpec(node::Window{offset, std::move(bits), finite});
  }
  static SetSpec finite_set(const std::vector<std::uint64_t>& elems) {
    if (elems.empty()) return empty();
    auto [lo, hi] = std::minmax_element(elems.begin(), elems.end());
    if (*lo == 0) throw InvalidInput("sets live in n >= 1");
    BitVec b(*hi - *lo + 1);
    for (auto e : elems) b.set(e - *lo);
    return window(*lo, std::move(b), true);
  }

  // Largest n for which membership is defined.
  std::uint64_t horizon() const {
    return std::visit(
        [](const auto& x) -> std::uint64_t {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Residue>) {
            return kUnbounded;
          } else if constexpr (std::is_same_v<T, node::Window>) {
            return x.finite ? kUnbounded : x.offset + x.bits.size() - 1;
          } else if constexpr (std::is_same_v<T, node::ReturnTimes>) {
            return x.horizon;
          } else if constexpr (std::is_same_v<T, node::Shift>) {
            std::uint64_t h = x.of[0].horizon();
            if (h == kUnbounded) return h;
            std::int64_t v = static_cast<std::int64_t>(h) - x.t;
            return v < 0 ? 0 : static_cast<std::uint64_t>(v);
          } else {
            std::uint64_t h = kUnbounded;
            for (const auto& c : x.of) h = std::min(h, c.horizon());
            return h;
          }
        },
        *n_);
  }

  bool member(std::uint64_t n) const {
    if (n == 0) return false;
    if (n > horizon()) throw HorizonError("membership of " + std::to_string(n) + " beyond horizon " + std::to_string(horizon()));
    return member_unchecked(n);
  }

  // Membership bits for n in [lo, lo + len).
  BitVec member_range(std::uint64_t lo, std::size_t len) const {
    if (len == 0) return BitVec(0);
    if (lo == 0) {
      BitVec tail = member_range(1, len - 1);
      BitVec out(len);
      out.or_shifted_up(tail, 1);
      return out;
    }
    if (lo + len - 1 > horizon())
      throw HorizonError("range up to " + std::to_string(lo + len - 1) + " beyond horizon " + std::to_string(horizon()));
    return range_unchecked(lo, len);
  }

  // Period P with membership of n and n + P equal for all n >= start, if the set is eventually periodic.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> eventual_period() const {
    return std::visit(
        [](const auto& x) -> std::optional<std::pair<std::uint64_t, std::uint64_t>> {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Residue>) {
            return std::make_pair(x.m, std::uint64_t{1});
          } else if constexpr (std::is_same_v<T, node::Window>) {
            if (!x.finite) return std::nullopt;
            return std::make_pair(std::uint64_t{1}, x.offset + x.bits.size());
          } else if constexpr (std::is_same_v<T, node::ReturnTimes>) {
            return std::nullopt;
          } else if constexpr (std::is_same_v<T, node::Shift>) {
            auto p = x.of[0].eventual_period();
            if (!p) return p;
            std::int64_t st = static_cast<std::int64_t>(p->second) - x.t;
            return std::make_pair(p->first, static_cast<std::uint64_t>(std::max<std::int64_t>(1, st)));
          } else {
            std::uint64_t P = 1, start = 1;
            for (const auto& c : x.of) {
              auto p = c.eventual_period();
              if (!p) return std::nullopt;
              P = std::lcm(P, p->first);
              start = std::max(start, p->second);
              if (P > (std::uint64_t{1} << 40)) return std::nullopt;
            }
            return std::make_pair(P, start);
          }
        },
        *n_);
  }

  // Exact natural density when the set is eventually periodic.
  std::optional<Rational> exact_density() const {
    auto p = eventual_period();
    if (!p || p->first > (std::uint64_t{1} << 28)) return std::nullopt;
    BitVec bits = member_range(p->second, p->first);
    return Rational(BigInt(bits.count()), BigInt(p->first));
  }

 private:
  bool member_unchecked(std::uint64_t n) const {
    return std::visit(
        [n](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, node::Residue>) {
            return n % x.m == x.r;
          } else if constexpr (std::is_same_v<T, node::Union>) {
            for (const auto& c : x.of)
              if (c.member_unchecked(n)) return true;
            return false;
          } else if constexpr (std::is_same_v<T, node::Intersection>) {
            for (const auto& c : x.of)
              if (!c.member_unchecked(n)) return false;
            return true;
          } else if constexpr (std::is_same_v<T, node::Complement>) {
            return !x.of[0].member_unchecked(n);
          } else if constexpr (std::is_same_v<T, node::Shift>) {
            std::int64_t v = static_cast<std::int64_t>(n) + x.t;
            return v >= 1 && x.of[0].member_unchecked(static_cast<std::uint64_t>(v));
          } else if constexpr (std::is_same_v<T, node::Window>) {
            return n >= x.offset && n - x.offset < x.bits.size() && x.bits.test(n - x.offset);
          } else {
            return n >= 1 && n <= x.horizon && x.bits.test(n - 1);
          }
        },
        *n_);
  }

  BitVec range_unchecked(std::uint64_t lo, std::size_t len) const {
    return std::visit(
        [lo, len](const auto& x) -> BitVec {
          using T = std::decay_t<decltype(x)>;
          BitVec out(len);
          if constexpr (std::is_same_v<T, node::Residue>) {
            std::uint64_t first = (x.r + x.m - lo % x.m) % x.m;
            for (std::uint64_t i = first; i < len; i += x.m) out.set(i);
          } else if constexpr (std::is_same_v<T, node::Union>) {
            for (const auto& c : x.of) out |= c.range_unchecked(lo, len);
          } else if constexpr (std::is_same_v<T, node::Intersection>) {
            out.fill(true);
            for (const auto& c : x.of) out &= c.range_unchecked(lo, len);
          } else if constexpr (std::is_same_v<T, node::Complement>) {
            out = x.of[0].range_unchecked(lo, len);
            out.flip();
          } else if constexpr (std::is_same_v<T, node::Shift>) {
            std::int64_t start = static_cast<std::int64_t>(lo) + x.t;
            if (start >= 1) return x.of[0].range_unchecked(static_cast<std::uint64_t>(start), len);
            std::uint64_t skip = static_cast<std::uint64_t>(1 - start);
            if (skip >= len) return out;
            out.or_shifted_up(x.of[0].range_unchecked(1, len - skip), skip);
          } else if constexpr (std::is_same_v<T, node::Window>) {
            for (std::size_t i = 0; i < len; ++i) {
              std::uint64_t n = lo + i;
              if (n >= x.offset && n - x.offset < x.bits.size() && x.bits.test(n - x.offset)) out.set(i);
            }
          } else {
            for (std::size_t i = 0; i < len; ++i)
              if (x.bits.test(lo + i - 1)) out.set(i);
          }
          return out;
        },
        *n_);
  }

  std::shared_ptr<const Node> n_;
};

struct FolnerWindow {
  std::uint64_t start = 1;
  std::uint64_t length = 1;
};

// [1, N] for N = 1..N_max, or the single shifted window [M, M + N_max).
inline std::vector<FolnerWindow> folner_intervals(std::uint64_t N_max, std::optional<std::uint64_t> shifted = {}) {
  if (N_max == 0) throw InvalidInput("N_max must be >= 1");
  if (shifted) return {FolnerWindow{*shifted, N_max}};
  std::vector<FolnerWindow> out;
  for (std::uint64_t N = 1; N <= N_max; ++N) out.push_back({1, N});
  return out;
}

inline Rational window_density(const SetSpec& A, const FolnerWindow& w) {
  if (w.length == 0 || w.start == 0) throw InvalidInput("window needs start >= 1 and length >= 1");
  return Rational(BigInt(A.member_range(w.start, w.length).count()), BigInt(w.length));
}

inline Rational window_density(const SetSpec& A, std::uint64_t N) { return window_density(A, FolnerWindow{1, N}); }

struct BanachEstimate {
  double value = 0;
  std::uint64_t best_start = 1;
  std::uint64_t length = 0;
};

// max over windows [1 + j*stride, 1 + j*stride + length) of the density of A.
inline BanachEstimate banach_density_estimate(const SetSpec& A, std::uint64_t length, std::uint64_t num_windows,
                                              std::uint64_t stride) {
  if (length == 0 || num_windows == 0) throw InvalidInput("need positive window length and count");
  std::uint64_t span = (num_windows - 1) * stride + length;
  BitVec bits = A.member_range(1, span);
  std::vector<std::uint64_t> prefix(span + 1, 0);
  for (std::uint64_t i = 0; i < span; ++i) prefix[i + 1] = prefix[i] + (bits.test(i) ? 1 : 0);
  BanachEstimate best{-1.0, 1, length};
  for (std::uint64_t j = 0; j < num_windows; ++j) {
    std::uint64_t s = j * stride;
    double d = double(prefix[s + length] - prefix[s]) / double(length);
    if (d > best.value) best = {d, s + 1, length};
  }
  return best;
}

// {n in [1, N] : T^n a in E}.
inline SetSpec return_time_set(std::size_t s, const Rational& alpha, const std::vector<Rational>& base,
                               const TorusBox& E, std::uint64_t N) {
  if (E.dim() != s) throw InvalidInput("box dimension does not match system dimension");
  FixedSystem sys = make_fixed_system(s, alpha);
  CompiledBox<FixedArith> box(E, sys.arith());
  OrbitCursor<FixedArith> cur(sys, sys.from_rationals(base), 1, 1);
  BitVec bits(N);
  for (std::uint64_t n = 1; n <= N; ++n, cur.advance())
    if (box.contains(cur.point())) bits.set(n - 1);
  return SetSpec(node::ReturnTimes{s, alpha, base, E, N, std::move(bits)});
}

}  // namespace sumdyn

#endif
