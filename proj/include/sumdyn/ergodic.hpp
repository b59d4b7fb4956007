#ifndef SUMDYN_ERGODIC_HPP
#define SUMDYN_ERGODIC_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "function_spec.hpp"
#include "nilsystem.hpp"
#include "rational.hpp"

namespace sumdyn {

struct AverageEstimate {
  double value = 0;
  double imag = 0;
  double half_value = 0;  // same estimator at N/2, a convergence diagnostic
  std::uint64_t N = 0;
  std::uint64_t M = 0;
  std::string window = "[1,N]";
  std::string mode = "fixed128";
  std::optional<Rational> exact;

  double drift() const { return std::abs(value - half_value); }
};

namespace detail {

inline std::string window_name(std::uint64_t start, std::uint64_t N) {
  if (start == 1) return "[1,N]";
  return "[" + std::to_string(start) + "," + std::to_string(start + N) + ")";
}

template <class Arith>
AverageEstimate finish_average(std::complex<double> sum, std::complex<double> half_sum, std::uint64_t N,
                               std::uint64_t start) {
  AverageEstimate e;
  e.value = sum.real() / double(N);
  e.imag = sum.imag() / double(N);
  std::uint64_t h = std::max<std::uint64_t>(N / 2, 1);
  e.half_value = half_sum.real() / double(h);
  e.N = N;
  e.window = window_name(start, N);
  e.mode = Arith::name();
  return e;
}

}  // namespace detail

// (1/N) sum_{n in [start, start+N)} F(T^n a).
template <class Arith>
AverageEstimate birkhoff_average(const AffineTorusSystem<Arith>& sys, const FunctionSpec& F, const TorusPoint<Arith>& a,
                                 std::uint64_t N, std::uint64_t start = 1) {
  if (N == 0) throw InvalidInput("N must be >= 1");
  if (F.arity() != 1) throw InvalidInput("birkhoff_average needs a function on X");
  if (auto c = std::get_if<fnode::Const>(&F.node())) {
    AverageEstimate e = detail::finish_average<Arith>(to_double(c->value) * double(N),
                                                      to_double(c->value) * double(std::max<std::uint64_t>(N / 2, 1)), N, start);
    e.exact = c->value;
    return e;
  }
  CompiledFunction<Arith> f(F, sys);
  OrbitCursor<Arith> cur(sys, a, start, 1);
  std::complex<double> sum = 0, half = 0;
  std::uint64_t h = std::max<std::uint64_t>(N / 2, 1);
  for (std::uint64_t i = 0; i < N; ++i, cur.advance()) {
    sum += f(cur.point());
    if (i + 1 == h) half = sum;
  }
  return detail::finish_average<Arith>(sum, half, N, start);
}

// (1/N) sum_n F(T^n a, T^{2n} a, ..., T^{kn} a): the finite-N stand-in for the integral against xi_k.
template <class Arith>
AverageEstimate xi_k_integral(const AffineTorusSystem<Arith>& sys, const TorusPoint<Arith>& a, std::size_t k,
                              const FunctionSpec& F, std::uint64_t N, std::uint64_t start = 1) {
  if (k < 1) throw InvalidInput("k must be >= 1");
  if (N == 0) throw InvalidInput("N must be >= 1");
  if (F.arity() > k) throw InvalidInput("function uses more factors than k");
  if (auto c = std::get_if<fnode::Const>(&F.node())) {
    AverageEstimate e = detail::finish_average<Arith>(to_double(c->value) * double(N),
                                                      to_double(c->value) * double(std::max<std::uint64_t>(N / 2, 1)), N, start);
    e.exact = c->value;
    return e;
  }
  CompiledFunction<Arith> f(F, sys);
  std::vector<OrbitCursor<Arith>> cursors;
  for (std::size_t i = 1; i <= k; ++i) cursors.emplace_back(sys, a, i * start, i);
  std::vector<TorusPoint<Arith>> pts(k);
  std::complex<double> sum = 0, half = 0;
  std::uint64_t h = std::max<std::uint64_t>(N / 2, 1);
  for (std::uint64_t n = 0; n < N; ++n) {
    for (std::size_t i = 0; i < k; ++i) {
      pts[i] = cursors[i].point();
      cursors[i].advance();
    }
    sum += f(pts.data());
    if (n + 1 == h) half = sum;
  }
  return detail::finish_average<Arith>(sum, half, N, start);
}

// E(F | Z_j) for F on X = T^s: coordinates j+1..s integrated out exactly.
struct Projection {
  std::size_t s = 0;
  std::size_t j = 0;
  BoxExpansion expansion;  // terms only mention coordinates < j
  std::optional<Rational> constant;

  FunctionSpec on_X() const { return expansion.to_spec(s); }
};

inline Projection cond_expect_Zj(const FunctionSpec& F, std::size_t s, std::size_t j) {
  if (j > s) throw InvalidInput("j exceeds the dimension");
  if (F.arity() != 1) throw InvalidInput("cond_expect_Zj needs a function on X");
  if (!F.exactly_integrable()) throw InvalidInput("function is not exactly integrable");
  Projection p;
  p.s = s;
  p.j = j;
  for (const auto& t : BoxExpansion::of(F).terms) {
    BoxTerm out{t.coeff, {}};
    for (const auto& [key, set] : t.sets) {
      if (key.second >= s) throw InvalidInput("box dimension exceeds s");
      if (key.second >= j)
        out.coeff *= set.measure();
      else
        out.sets[key] = set;
    }
    if (out.coeff != 0) p.expansion.terms.push_back(std::move(out));
  }
  p.constant = p.expansion.constant_value();
  return p;
}

// A line r -> (base + coeff * r) in X^factors; coeff 0 means the coordinate is fixed.
struct DiagonalLine {
  std::vector<std::vector<Rational>> base;
  std::vector<std::vector<std::int64_t>> coeff;
};

// integral over r in T of F(line(r)), exactly.
inline Rational cond_expect_W_diag(const FunctionSpec& F, const DiagonalLine& line) {
  if (!F.exactly_integrable()) throw InvalidInput("function is not a combination of boxes and constants");
  if (line.base.size() != line.coeff.size()) throw InvalidInput("line base and coefficients differ in shape");
  Rational total = 0;
  for (const auto& t : BoxExpansion::of(F).terms) {
    ArcSet free = ArcSet::full();
    bool zero = false;
    for (const auto& [key, set] : t.sets) {
      auto [f, j] = key;
      if (f >= line.base.size() || j >= line.base[f].size() || j >= line.coeff[f].size())
        throw InvalidInput("function refers to a coordinate the line does not define");
      std::int64_t c = line.coeff[f][j];
      if (c == 0) {
        if (!set.contains(line.base[f][j])) zero = true;
      } else {
        free = free.intersect(set.preimage(line.base[f][j], c));
      }
      if (zero || free.empty()) break;
    }
    if (!zero) total += t.coeff * free.measure();
  }
  return total;
}

// f_0(a) * (average of prod_i g_i(T^{in} a)) with g_i = f_i, or E(f_i | Z_j) when project_to = j.
template <class Arith>
AverageEstimate sigma_k_integral(const AffineTorusSystem<Arith>& sys, const TorusPoint<Arith>& a, std::size_t k,
                                 const std::vector<FunctionSpec>& f, std::uint64_t N,
                                 std::optional<std::size_t> project_to = {}) {
  if (f.size() != k + 1) throw InvalidInput("sigma_k needs f_0, ..., f_k");
  CompiledFunction<Arith> f0(f[0], sys);
  auto w0 = f0(a);
  std::vector<FunctionSpec> rest;
  for (std::size_t i = 1; i <= k; ++i)
    rest.push_back(project_to ? cond_expect_Zj(f[i], sys.dim(), *project_to).on_X() : f[i]);
  if (w0 == std::complex<double>(0)) {
    AverageEstimate e;
    e.N = N;
    e.mode = Arith::name();
    e.exact = Rational(0);
    return e;
  }
  AverageEstimate e = xi_k_integral(sys, a, k, FunctionSpec::tensor(rest), N);
  std::complex<double> v(e.value, e.imag);
  v *= w0;
  e.value = v.real();
  e.imag = v.imag();
  e.half_value *= w0.real();
  if (w0 != std::complex<double>(1)) e.exact.reset();
  return e;
}

namespace detail {

// ||g||^{2^k} for the sequence g (length N + (k-1) H), k >= 1, with U^1 = |mean|.
inline double seminorm_power(const std::vector<std::complex<double>>& g, std::size_t k, std::uint64_t H,
                             std::uint64_t N, std::uint64_t Nmean, double* half) {
  if (k == 1) {
    std::complex<double> s = 0, sh = 0;
    for (std::uint64_t n = 0; n < Nmean; ++n) {
      s += g[n];
      if (n + 1 == Nmean / 2) sh = s;
    }
    if (half) {
      auto mh = sh / double(std::max<std::uint64_t>(Nmean / 2, 1));
      *half = std::norm(mh);
    }
    return std::norm(s / double(Nmean));
  }
  std::vector<std::complex<double>> next(g.size() - H);
  double acc = 0, acc_half = 0;
  for (std::uint64_t h = 1; h <= H; ++h) {
    for (std::size_t n = 0; n < next.size(); ++n) next[n] = g[n] * std::conj(g[n + h]);
    double hv = 0;
    acc += seminorm_power(next, k - 1, H, N, Nmean, half ? &hv : nullptr);
    acc_half += hv;
  }
  if (half) *half = acc_half / double(H);
  return acc / double(H);
}

}  // namespace detail

// Inductive U^k estimate along the orbit of a. U^0 is the (real part of the) mean; U^1 = |mean|;
// higher levels average ||f conj(T^h f)||_{U^{k-1}}^{2^{k-1}} over h <= H.
template <class Arith>
AverageEstimate ghk_seminorm(const AffineTorusSystem<Arith>& sys, const FunctionSpec& f, std::size_t k, std::uint64_t H,
                             std::uint64_t N, const TorusPoint<Arith>& a = {}) {
  if (H == 0 || N == 0) throw InvalidInput("H and N must be >= 1");
  if (f.arity() != 1) throw InvalidInput("seminorm needs a function on X");
  AverageEstimate e;
  e.N = N;
  e.M = k >= 2 ? H : 0;
  e.mode = Arith::name();
  if (auto c = std::get_if<fnode::Const>(&f.node())) {
    // Every level of a constant c equals |c|.
    Rational v = k == 0 ? c->value : abs(c->value);
    e.exact = v;
    e.value = e.half_value = to_double(v);
    return e;
  }
  std::uint64_t len = N + (k >= 1 ? (k - 1) * H : 0);
  CompiledFunction<Arith> F(f, sys);
  std::vector<std::complex<double>> g(len);
  OrbitCursor<Arith> cur(sys, a, 1, 1);
  for (std::uint64_t n = 0; n < len; ++n, cur.advance()) g[n] = F(cur.point());
  if (k == 0) {
    std::complex<double> s = 0, sh = 0;
    for (std::uint64_t n = 0; n < N; ++n) {
      s += g[n];
      if (n + 1 == N / 2) sh = s;
    }
    e.value = (s / double(N)).real();
    e.imag = (s / double(N)).imag();
    e.half_value = (sh / double(std::max<std::uint64_t>(N / 2, 1))).real();
    return e;
  }
  double half = 0;
  double p = detail::seminorm_power(g, k, H, N, N, &half);
  double root = 1.0 / double(std::uint64_t{1} << k);
  e.value = std::pow(std::max(p, 0.0), root);
  e.half_value = std::pow(std::max(half, 0.0), root);
  return e;
}

}  // namespace sumdyn

#endif
