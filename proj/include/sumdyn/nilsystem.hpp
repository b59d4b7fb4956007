#ifndef SUMDYN_NILSYSTEM_HPP
#define SUMDYN_NILSYSTEM_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"
#include "torus.hpp"

namespace sumdyn {

template <class Arith>
using TorusPoint = std::array<typename Arith::word, kMaxDim>;

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// x -> M x + c with M unipotent lower-triangular, all entries in the coordinate ring.
template <class Arith>
struct AffineMap {
  using word = typename Arith::word;
  std::size_t s = 0;
  std::array<std::array<word, kMaxDim>, kMaxDim> M{};
  std::array<word, kMaxDim> c{};
};

// T(x)_j = x_j + sum_{i<j} C(j, j-i) x_i + alpha on the s-torus (rows 1-based).
template <class Arith>
class AffineTorusSystem {
 public:
  using word = typename Arith::word;
  using Point = TorusPoint<Arith>;
  using Map = AffineMap<Arith>;

  AffineTorusSystem(std::size_t s, word alpha, Arith ar = {}) : s_(s), alpha_(alpha), ar_(ar) {
    if (s < 1 || s > kMaxDim) throw InvalidInput("dimension s must be in [1, " + std::to_string(kMaxDim) + "]");
    T_.s = s;
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t i = 0; i < j; ++i) T_.M[j][i] = ar_.from_int(binomial(j + 1, i + 1));
      T_.M[j][j] = ar_.from_int(1);
      T_.c[j] = alpha_;
    }
  }

  std::size_t dim() const { return s_; }
  word alpha() const { return alpha_; }
  const Arith& arith() const { return ar_; }
  const Map& generator() const { return T_; }

  Point zero() const { return Point{}; }

  Point step(const Point& x) const { return apply(T_, x); }

  Point apply(const Map& f, const Point& x) const {
    Point y{};
    for (std::size_t j = 0; j < s_; ++j) {
      word acc = f.c[j];
      for (std::size_t i = 0; i <= j; ++i) acc = ar_.add(acc, ar_.mul(f.M[j][i], x[i]));
      y[j] = acc;
    }
    return y;
  }

  // (f o g)(x) = f(g(x))
  Map compose(const Map& f, const Map& g) const {
    Map h;
    h.s = s_;
    for (std::size_t j = 0; j < s_; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        word acc = 0;
        for (std::size_t m = i; m <= j; ++m) acc = ar_.add(acc, ar_.mul(f.M[j][m], g.M[m][i]));
        h.M[j][i] = acc;
      }
      word acc = f.c[j];
      for (std::size_t m = 0; m <= j; ++m) acc = ar_.add(acc, ar_.mul(f.M[j][m], g.c[m]));
      h.c[j] = acc;
    }
    return h;
  }

  Map identity() const {
    Map id;
    id.s = s_;
    for (std::size_t j = 0; j < s_; ++j) id.M[j][j] = ar_.from_int(1);
    return id;
  }

  // T^n by binary exponentiation.
  Map power(std::uint64_t n) const {
    Map result = identity(), base = T_;
    while (n) {
      if (n & 1) result = compose(base, result);
      base = compose(base, base);
      n >>= 1;
    }
    return result;
  }

  // Closed form (n alpha, n^2 alpha, ..., n^s alpha) for a = 0, power map otherwise.
  Point orbit_point(const Point& a, std::uint64_t n) const {
    bool is_zero = true;
    for (std::size_t j = 0; j < s_; ++j) is_zero = is_zero && a[j] == 0;
    if (!is_zero) return apply(power(n), a);
    Point y{};
    word nn = ar_.from_int(n), pw = ar_.from_int(1);
    for (std::size_t j = 0; j < s_; ++j) {
      pw = ar_.mul(pw, nn);
      y[j] = ar_.mul(pw, alpha_);
    }
    return y;
  }

  std::vector<Point> diagonal_eval(std::size_t k, std::uint64_t n, const Point& a) const {
    if (k < 1) throw InvalidInput("diagonal_eval needs k >= 1");
    std::vector<Point> out;
    for (std::size_t i = 1; i <= k; ++i) out.push_back(orbit_point(a, i * n));
    return out;
  }

  Point from_rationals(const std::vector<Rational>& x) const {
    if (x.size() != s_) throw InvalidInput("point has " + std::to_string(x.size()) + " coordinates, expected " + std::to_string(s_));
    Point p{};
    for (std::size_t j = 0; j < s_; ++j) p[j] = ar_.from_point_coord(x[j]);
    return p;
  }
  std::vector<double> to_doubles(const Point& p) const {
    std::vector<double> out(s_);
    for (std::size_t j = 0; j < s_; ++j) out[j] = ar_.to_double(p[j]);
    return out;
  }

 private:
  std::size_t s_;
  word alpha_;
  Arith ar_;
  Map T_;
};

using FixedSystem = AffineTorusSystem<FixedArith>;
using RationalSystem = AffineTorusSystem<ResidueArith>;

inline FixedSystem make_fixed_system(std::size_t s, const Rational& alpha) {
  FixedArith ar;
  return FixedSystem(s, ar.floor_scaled(alpha), ar);
}

// Grid 1/q with q the lcm of the denominators of alpha and of every coordinate in `points`.
inline RationalSystem make_rational_system(std::size_t s, const Rational& alpha,
                                           const std::vector<Rational>& points = {}) {
  Rational a = frac(alpha);
  BigInt q = denominator(a);
  for (const auto& x : points) {
    BigInt d = denominator(frac(x));
    q = q / boost::multiprecision::gcd(q, d) * d;
  }
  if (q > BigInt(std::uint64_t{1} << 62)) throw InvalidInput("common denominator too large for rational mode");
  ResidueArith ar{static_cast<std::uint64_t>(q)};
  Rational scaled = a * Rational(q);
  return RationalSystem(s, static_cast<u128>(static_cast<std::uint64_t>(numerator(scaled))), ar);
}

// Same rotation on the 2^-128 grid; used to compare the two modes.
inline FixedSystem to_fixed(const RationalSystem& sys) {
  FixedArith ar;
  Rational alpha(BigInt(static_cast<std::uint64_t>(sys.alpha())), BigInt(sys.arith().q));
  return FixedSystem(sys.dim(), ar.floor_scaled(alpha), ar);
}

// Sequential orbit T^{start}x, T^{start+stride}x, ... by repeated application of T^{stride}.
template <class Arith>
class OrbitCursor {
 public:
  using Point = TorusPoint<Arith>;

  OrbitCursor(const AffineTorusSystem<Arith>& sys, const Point& x, std::uint64_t start, std::uint64_t stride)
      : sys_(&sys), jump_(sys.power(stride)), cur_(sys.apply(sys.power(start), x)) {}

  const Point& point() const { return cur_; }
  void advance() { cur_ = sys_->apply(jump_, cur_); }

 private:
  const AffineTorusSystem<Arith>* sys_;
  AffineMap<Arith> jump_;
  Point cur_;
};

// Difference-table generator of n^j alpha, n = 0, 1, 2, ...: s additions per step.
template <class Arith>
class PolynomialOrbit {
 public:
  using Point = TorusPoint<Arith>;

  explicit PolynomialOrbit(const AffineTorusSystem<Arith>& sys) : ar_(sys.arith()), s_(sys.dim()) {
    // Column j holds the forward differences of n^{j+1} alpha at n = 0.
    for (std::size_t j = 0; j < s_; ++j) {
      std::size_t deg = j + 1;
      std::vector<typename Arith::word> vals(deg + 1);
      for (std::size_t n = 0; n <= deg; ++n) {
        typename Arith::word pw = ar_.from_int(1);
        for (std::size_t e = 0; e < deg; ++e) pw = ar_.mul(pw, ar_.from_int(n));
        vals[n] = ar_.mul(pw, sys.alpha());
      }
      for (std::size_t d = 0; d <= deg; ++d) {
        diff_[j][d] = vals[0];
        for (std::size_t n = 0; n + 1 < vals.size(); ++n) vals[n] = ar_.sub(vals[n + 1], vals[n]);
        vals.pop_back();
      }
    }
  }

  Point point() const {
    Point p{};
    for (std::size_t j = 0; j < s_; ++j) p[j] = diff_[j][0];
    return p;
  }
  void advance() {
    for (std::size_t j = 0; j < s_; ++j)
      for (std::size_t d = 0; d < j + 1; ++d) diff_[j][d] = ar_.add(diff_[j][d], diff_[j][d + 1]);
  }

 private:
  Arith ar_;
  std::size_t s_;
  std::array<std::array<typename Arith::word, kMaxDim + 1>, kMaxDim> diff_{};
};

}  // namespace sumdyn

#endif
