#include <gtest/gtest.h>

#include <algorithm>

#include "sumdyn/progressive.hpp"

using namespace sumdyn;

namespace {

const Rational kSqrt2Frac(195025, 470832);

bool same_terms(std::vector<PatternTerm> a, std::vector<PatternTerm> b) {
  auto key = [](const PatternTerm& t) { return std::make_tuple(t.coord, t.shift, t.box); };
  auto cmp = [&](const PatternTerm& x, const PatternTerm& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), cmp);
  std::sort(b.begin(), b.end(), cmp);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (key(a[i]) != key(b[i])) return false;
  return true;
}

// Brute force rotation count, no bitsets or fixed point.
double rotation_left_oracle(const Rational& alpha, double len, std::uint64_t n, std::uint64_t N) {
  auto sys = make_rational_system(1, alpha);
  auto x = [&](std::uint64_t t) { return sys.to_doubles(sys.orbit_point(sys.zero(), t))[0]; };
  auto in = [&](std::uint64_t t) { return x(t) < len; };
  if (!in(n)) return 0;
  std::uint64_t c = 0;
  for (std::uint64_t p = 1; p <= N; ++p) c += (in(p) && in(2 * p) && in(p + n)) ? 1 : 0;
  return double(c) / double(N);
}

}  // namespace

TEST(Patterns, MultiWithOneLagIsRight) {
  for (std::size_t k = 1; k <= 4; ++k)
    for (std::uint64_t n : {1u, 5u})
      for (std::uint64_t m : {1u, 3u}) EXPECT_TRUE(same_terms(multi_right_pattern(k, 1, n, m), right_pattern(k + 1, n + m)));
}

TEST(Scanners, FullBoxesHitEverything) {
  ScanSystem ss{2, kSqrt2Frac, {}};
  std::vector<TorusBox> full(3, TorusBox::cube(2, 0, 1));
  ScanOptions o;
  o.N = 2000;
  auto L = left_progressive_scan(ss, 3, full, 50, o);
  ASSERT_EQ(L.hits.size(), 50u);
  for (const auto& h : L.hits) {
    EXPECT_EQ(h.estimate, 1.0);
    EXPECT_TRUE(h.confirmed);
  }
  auto R = right_progressive_scan(ss, 3, {full[0], full[1]}, 40, o);
  EXPECT_EQ(R.hits.size(), 40u);
  auto M = multiple_right_scan(ss, 2, 2, {full[0], full[1]}, 10, 10, o);
  EXPECT_EQ(M.hits.size(), 100u);
}

TEST(Scanners, RotationLeftScanMatchesOracle) {
  ScanSystem ss{1, kSqrt2Frac, {}};
  std::vector<TorusBox> U(2, TorusBox{{make_arc(0, Rational(3, 10))}});
  ScanOptions o;
  o.N = 20000;
  auto L = left_progressive_scan(ss, 2, U, 10000, o);
  EXPECT_GE(L.hits.size(), 5u);
  for (std::size_t i = 0; i < std::min<std::size_t>(L.hits.size(), 8); ++i) {
    const auto& h = L.hits[i];
    EXPECT_NEAR(h.estimate, rotation_left_oracle(kSqrt2Frac, 0.3, h.n, o.N), 2e-4) << h.n;
    EXPECT_TRUE(h.confirmed);
  }
}

TEST(Scanners, ThresholdAboveOneIsEmpty) {
  ScanSystem ss{2, kSqrt2Frac, {}};
  ScanOptions o;
  o.N = 2000;
  o.threshold = 1.5;
  auto R = right_progressive_scan(ss, 3, {TorusBox::cube(2, 0, 1), TorusBox::cube(2, 0, 1)}, 100, o);
  EXPECT_TRUE(R.hits.empty());
  EXPECT_EQ(R.scanned, 100u);
}

TEST(Scanners, SmallBoxesStayUnderVolume) {
  ScanSystem ss{2, kSqrt2Frac, {}};
  ScanOptions o;
  o.N = 20000;
  o.threshold = 0.0;
  TorusBox tiny = TorusBox::cube(2, Rational(1, 7), Rational(1, 20));
  auto L = left_progressive_scan(ss, 2, {tiny, tiny}, 300, o);
  for (const auto& h : L.hits) EXPECT_LE(h.estimate, to_double(tiny.volume()) + 0.01);
}

TEST(Scanners, AffineHitsRecountConfirmed) {
  ScanSystem ss{2, kSqrt2Frac, {}};
  std::vector<TorusBox> U(2, TorusBox::cube(2, 0, Rational(2, 5)));
  ScanOptions o;
  o.N = 20000;
  o.max_hits = 4;
  auto R = right_progressive_scan(ss, 3, U, 10000, o);
  EXPECT_EQ(R.hits.size(), 4u);
  auto M = multiple_right_scan(ss, 2, 2, U, 1000, 1000, o);
  EXPECT_EQ(M.hits.size(), 4u);
  for (const auto& h : R.hits) EXPECT_TRUE(h.confirmed);
  for (const auto& h : M.hits) EXPECT_TRUE(h.confirmed);
  // Lags order: increasing n + m.
  for (std::size_t i = 1; i < M.hits.size(); ++i)
    EXPECT_LE(M.hits[i - 1].n + M.hits[i - 1].m, M.hits[i].n + M.hits[i].m);
}

TEST(Scanners, NonzeroBasePoint) {
  ScanSystem ss{2, kSqrt2Frac, {Rational(1, 3), Rational(2, 5)}};
  std::vector<TorusBox> U(2, TorusBox::cube(2, 0, Rational(1, 2)));
  ScanOptions o;
  o.N = 3000;
  o.max_hits = 3;
  auto L = left_progressive_scan(ss, 2, U, 500, o);
  for (const auto& h : L.hits) EXPECT_TRUE(h.confirmed);
}

TEST(MultipleRecurrence, FullAndShrinking) {
  ScanSystem rot{1, kSqrt2Frac, {}};
  EXPECT_EQ(multiple_recurrence_average(rot, 2, 2, {TorusBox::cube(1, 0, 1), TorusBox::cube(1, 0, 1)}, 10, 10).value, 1.0);
  auto arcs = [](Rational len) { return std::vector<TorusBox>(2, TorusBox{{make_arc(0, len)}}); };
  auto big = multiple_recurrence_average(rot, 2, 2, arcs(Rational(45, 100)), 50, 2000, 2048);
  EXPECT_GT(big.value, 1e-3);
  auto small = multiple_recurrence_average(rot, 2, 2, arcs(Rational(5, 100)), 50, 2000, 2048);
  EXPECT_LT(small.value, big.value);
  EXPECT_LE(small.value, 0.05);
  // Thread count does not change the result.
  auto par = multiple_recurrence_average(rot, 2, 2, arcs(Rational(45, 100)), 50, 2000, 2048, 3);
  EXPECT_EQ(par.value, big.value);
}
