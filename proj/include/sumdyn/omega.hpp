#ifndef SUMDYN_OMEGA_HPP
#define SUMDYN_OMEGA_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "errors.hpp"

namespace sumdyn {

// A point of X^{k+2} stored block after block, s coordinates per block.
using BlockPoint = std::vector<double>;

inline double wrap01(double x) { return x - std::floor(x); }

inline double circle_dist(double a, double b) {
  double d = wrap01(a - b);
  return std::min(d, 1.0 - d);
}

inline double ipow(double base, std::size_t e) {
  double r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

// v_0 = 0, v_r = (r t_1, r^2 t_2, ..., r^k t_k, u_{r,1}, ..., u_{r,s-k}) mod 1, r = 1..k+1.
inline BlockPoint omega_point(std::size_t s, std::size_t k, const std::vector<double>& t,
                              const std::vector<std::vector<double>>& u) {
  BlockPoint p((k + 2) * s, 0.0);
  for (std::size_t r = 1; r <= k + 1; ++r) {
    for (std::size_t j = 1; j <= k; ++j) p[r * s + j - 1] = wrap01(ipow(double(r), j) * t[j - 1]);
    for (std::size_t j = k + 1; j <= s; ++j) p[r * s + j - 1] = wrap01(u[r - 1][j - k - 1]);
  }
  return p;
}

inline std::vector<BlockPoint> omega_sample(std::size_t s, std::size_t k, std::size_t count, std::uint64_t seed) {
  if (k < 1 || k > s) throw InvalidInput("omega_sample needs 1 <= k <= s");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<BlockPoint> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    std::vector<double> t(k);
    for (auto& x : t) x = U(rng);
    std::vector<std::vector<double>> u(k + 1, std::vector<double>(s - k));
    for (auto& row : u)
      for (auto& x : row) x = U(rng);
    out.push_back(omega_point(s, k, t, u));
  }
  return out;
}

// Constraints v_0 = 0 and v_r[j] = r^j v_1[j] mod 1 for j <= k, r <= blocks - 1.
inline bool omega_constraints_hold(std::size_t s, std::size_t k, std::size_t blocks, const BlockPoint& p,
                                   double tol) {
  for (std::size_t j = 0; j < s; ++j)
    if (circle_dist(p[j], 0.0) > tol) return false;
  for (std::size_t r = 2; r < blocks; ++r)
    for (std::size_t j = 1; j <= k; ++j) {
      double target = wrap01(ipow(double(r), j) * p[s + j - 1]);
      if (circle_dist(p[r * s + j - 1], target) > tol) return false;
    }
  return true;
}

inline bool omega_member(std::size_t s, std::size_t k, const BlockPoint& p, double tol) {
  if (k < 1 || k > s) throw InvalidInput("omega_member needs 1 <= k <= s");
  if (p.size() != (k + 2) * s)
    throw InvalidInput("shape mismatch: expected " + std::to_string((k + 2) * s) + " coordinates, got " +
                       std::to_string(p.size()));
  return omega_constraints_hold(s, k, k + 2, p, tol);
}

// Membership in the image of Omega_k under dropping the last block (k+1 blocks remain).
inline bool in_omega_projection(std::size_t s, std::size_t k, const BlockPoint& p, double tol) {
  if (p.size() != (k + 1) * s) throw InvalidInput("shape mismatch for projection test");
  return omega_constraints_hold(s, k, k + 1, p, tol);
}

struct StrictnessReport {
  std::size_t s = 0, k = 0, samples = 0;
  std::size_t projected_pass = 0;
  bool all_projected_in_lower = false;
  BlockPoint witness;
  bool witness_in_lower = false;
  bool witness_in_projection = true;
  bool strict() const { return all_projected_in_lower && witness_in_lower && !witness_in_projection; }
};

inline StrictnessReport projection_strictness(std::size_t s, std::size_t k, std::size_t samples,
                                              std::uint64_t seed, double tol = 1e-9) {
  if (k < 2 || k > s) throw InvalidInput("projection_strictness needs 2 <= k <= s");
  StrictnessReport rep;
  rep.s = s, rep.k = k, rep.samples = samples;
  for (const auto& p : omega_sample(s, k, samples, seed)) {
    BlockPoint head(p.begin(), p.begin() + static_cast<std::ptrdiff_t>((k + 1) * s));
    if (omega_member(s, k - 1, head, tol)) ++rep.projected_pass;
  }
  rep.all_projected_in_lower = rep.projected_pass == samples;

  // Omega_{k-1} point whose free coordinate j = k breaks v_2[k] = 2^k v_1[k].
  std::vector<double> t(k - 1, 0.0);
  for (std::size_t j = 0; j + 1 < k; ++j) t[j] = 0.1 * double(j + 1);
  std::vector<std::vector<double>> u(k, std::vector<double>(s - k + 1, 0.5));
  u[0][0] = 0.1;
  u[1][0] = wrap01(ipow(2.0, k) * 0.1 + 0.1);
  rep.witness = omega_point(s, k - 1, t, u);
  rep.witness_in_lower = omega_member(s, k - 1, rep.witness, tol);
  rep.witness_in_projection = in_omega_projection(s, k, rep.witness, 1e-6);
  return rep;
}

}  // namespace sumdyn

#endif
