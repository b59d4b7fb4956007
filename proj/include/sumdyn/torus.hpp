#ifndef SUMDYN_TORUS_HPP
#define SUMDYN_TORUS_HPP

#include <array>
#include <cmath>
#include <type_traits>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace sumdyn {

using u128 = unsigned __int128;

inline constexpr std::size_t kMaxDim = 8;

// Torus coordinates are integers modulo M standing for x = X / M.
// FixedArith: M = 2^128, so mod-1 reduction is machine wrap-around.
struct FixedArith {
  using word = u128;

  word add(word a, word b) const { return a + b; }
  word sub(word a, word b) const { return a - b; }
  word mul(word a, word b) const { return a * b; }
  word from_int(std::uint64_t n) const { return n; }

  // ceil(r * 2^128) mod 2^128, for r taken mod 1.
  word ceil_scaled(const Rational& r) const {
    Rational f = frac(r);
    BigInt scaled = numerator(f) << 128;
    BigInt q = scaled / denominator(f);
    if (q * denominator(f) != scaled) q += 1;
    return static_cast<word>(q & ((BigInt(1) << 128) - 1));
  }
  word floor_scaled(const Rational& r) const {
    Rational f = frac(r);
    BigInt q = (numerator(f) << 128) / denominator(f);
    return static_cast<word>(q);
  }
  word from_point_coord(const Rational& r) const { return floor_scaled(r); }

  double to_double(word x) const {
    return static_cast<double>(static_cast<std::uint64_t>(x >> 64)) * 0x1p-64 +
           static_cast<double>(static_cast<std::uint64_t>(x)) * 0x1p-128;
  }
  Rational to_rational(word x) const {
    BigInt n = static_cast<BigInt>(static_cast<std::uint64_t>(x >> 64)) << 64;
    n += static_cast<std::uint64_t>(x);
    return Rational(n, BigInt(1) << 128);
  }
  static constexpr const char* name() { return "fixed128"; }
};

// ResidueArith: M = q, exact for rotations alpha = p/q and points on the 1/q grid.
struct ResidueArith {
  using word = u128;
  std::uint64_t q = 1;

  word add(word a, word b) const {
    word s = a + b;
    return s >= q ? s - q : s;
  }
  word sub(word a, word b) const { return a >= b ? a - b : a + q - b; }
  word mul(word a, word b) const { return (a * b) % q; }
  word from_int(std::uint64_t n) const { return n % q; }

  word ceil_scaled(const Rational& r) const {
    Rational f = frac(r) * q;
    BigInt c = numerator(f) / denominator(f);
    if (c * denominator(f) != numerator(f)) c += 1;
    return static_cast<word>(static_cast<std::uint64_t>(c));  // may equal q, handled by callers
  }
  word from_point_coord(const Rational& r) const {
    Rational f = frac(r) * q;
    if (denominator(f) != 1) throw InvalidInput("point coordinate " + to_string(r) + " is not on the 1/q grid");
    return static_cast<word>(static_cast<std::uint64_t>(numerator(f)));
  }
  double to_double(word x) const { return static_cast<double>(static_cast<std::uint64_t>(x)) / static_cast<double>(q); }
  Rational to_rational(word x) const { return Rational(BigInt(static_cast<std::uint64_t>(x)), BigInt(q)); }
  static constexpr const char* name() { return "rational"; }
};

// Half-open arc [lo, lo + len) mod 1 with len in (0, 1].
struct Arc {
  Rational lo{0};
  Rational len{1};
};

inline Arc make_arc(const Rational& l, const Rational& r) {
  Rational lo = frac(l), hi = frac(r);
  Rational len = hi - lo;
  if (len <= 0) len += 1;
  if (r - l == 1 || (l == 0 && r == 1)) len = 1;
  return {lo, len};
}

struct TorusBox {
  std::vector<Arc> arcs;

  std::size_t dim() const { return arcs.size(); }
  Rational volume() const {
    Rational v = 1;
    for (const auto& a : arcs) v *= a.len;
    return v;
  }

  static TorusBox cube(std::size_t s, const Rational& lo, const Rational& side) {
    TorusBox b;
    for (std::size_t j = 0; j < s; ++j) b.arcs.push_back(make_arc(lo, lo + side));
    return b;
  }

  bool contains(const std::vector<double>& x) const {
    for (std::size_t j = 0; j < arcs.size(); ++j) {
      double d = x[j] - to_double(arcs[j].lo);
      d -= std::floor(d);
      if (arcs[j].len != 1 && !(d < to_double(arcs[j].len))) return false;
    }
    return true;
  }
};

// Box compiled to integer comparisons for a given arithmetic.
template <class Arith>
struct CompiledBox {
  using word = typename Arith::word;
  std::size_t s = 0;
  std::array<word, kMaxDim> lo{};
  std::array<word, kMaxDim> width{};
  std::array<bool, kMaxDim> full{};
  Arith ar;

  CompiledBox() = default;
  CompiledBox(const TorusBox& b, const Arith& a) : s(b.dim()), ar(a) {
    if (s > kMaxDim) throw InvalidInput("box dimension too large");
    for (std::size_t j = 0; j < s; ++j) {
      const Arc& arc = b.arcs[j];
      full[j] = arc.len == 1;
      word L = reduce(a.ceil_scaled(arc.lo), arc.lo);
      word R = reduce(a.ceil_scaled(arc.lo + arc.len), arc.lo + arc.len);
      lo[j] = L;
      width[j] = a.sub(R, L);
    }
  }

  template <class Pt>
  bool contains(const Pt& x) const {
    for (std::size_t j = 0; j < s; ++j)
      if (!full[j] && !(ar.sub(x[j], lo[j]) < width[j])) return false;
    return true;
  }

 private:
  word reduce(word w, const Rational&) const {
    if constexpr (std::is_same_v<Arith, ResidueArith>)
      return w >= ar.q ? w - ar.q : w;
    else
      return w;
  }
};

}  // namespace sumdyn

#endif
