#include <gtest/gtest.h>

#include <random>

#include "sumdyn/checks.hpp"
#include "sumdyn/straus.hpp"

using namespace sumdyn;

namespace {

SumsetCertificate certA(FiniteNatSet B, std::vector<std::int64_t> t, std::size_t ell, std::uint64_t window) {
  SumsetCertificate c;
  c.kind = CertKind::ThmA;
  c.ell = ell;
  c.B = std::move(B);
  c.K = t.size();
  c.t = std::move(t);
  c.window = window;
  return c;
}

SumsetCertificate certB(FiniteNatSet B, std::vector<std::int64_t> t, std::vector<std::int64_t> s,
                        std::uint64_t window) {
  SumsetCertificate c;
  c.kind = CertKind::ThmB;
  c.B = std::move(B);
  c.K = t.size();
  c.t = std::move(t);
  c.s = std::move(s);
  c.window = window;
  return c;
}

}  // namespace

TEST(CheckThmA, OddsExamples) {
  auto odds = SetSpec::residue(2, 1);
  auto pass = check_thmA(odds, certA(FiniteNatSet({1, 3}), {0}, 0, 100), 100);
  EXPECT_EQ(pass.status, CheckStatus::Pass);
  EXPECT_DOUBLE_EQ(pass.fraction_tested(), 1.0);

  auto fail = check_thmA(odds, certA(FiniteNatSet({1, 3}), {0, 0}, 0, 100), 100);
  ASSERT_EQ(fail.status, CheckStatus::Violation);
  EXPECT_EQ(fail.violation->k, 2u);
  EXPECT_EQ(fail.violation->F, (std::vector<std::uint64_t>{1, 3}));
  EXPECT_EQ(fail.violation->sum, 4u);
}

TEST(CheckThmA, VacuousWhenWindowTooSmall) {
  auto r = check_thmA(SetSpec::everything(), certA(FiniteNatSet({50, 60}), {0}, 0, 10), 10);
  EXPECT_EQ(r.status, CheckStatus::Vacuous);
  EXPECT_EQ(r.tested, 0u);
  EXPECT_EQ(r.total, 2u);
  auto e = check_thmA(SetSpec::everything(), certA(FiniteNatSet{}, {0}, 0, 10), 10);
  EXPECT_EQ(e.status, CheckStatus::Vacuous);
}

TEST(CheckThmA, PartialWindowReportsFraction) {
  auto r = check_thmA(SetSpec::everything(), certA(FiniteNatSet({1, 2, 50}), {0}, 1, 10), 10);
  EXPECT_EQ(r.status, CheckStatus::Pass);
  EXPECT_LT(r.fraction_tested(), 1.0);
  EXPECT_GT(r.fraction_tested(), 0.0);
}

TEST(CheckThmA, StrausDirectCheck) {
  StrausSpec spec({5, 13, 29});
  auto A = make_straus(spec);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::uint64_t> b;
    while (b.size() < 5) {
      b.push_back(1 + rng() % 500);
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    FiniteNatSet B(b);
    std::vector<std::int64_t> t{static_cast<std::int64_t>(rng() % 10), 10, 20};
    auto rep = check_thmA(A, certA(B, t, 1, 5000), 5000);
    // Oracle: enumerate subsets directly.
    bool ok = true;
    for (std::size_t k = 1; k <= 3 && ok; ++k)
      for (std::uint32_t mask = 1; mask < 32 && ok; ++mask) {
        auto sz = std::size_t(std::popcount(mask));
        if (sz < k || sz > k + 1) continue;
        std::uint64_t s = t[k - 1];
        for (int j = 0; j < 5; ++j)
          if (mask >> j & 1) s += B[j];
        if (!spec.member(s)) ok = false;
      }
    EXPECT_EQ(rep.status == CheckStatus::Pass, ok) << trial;
    if (rep.violation) {
      std::uint64_t s = t[rep.violation->k - 1];
      for (auto x : rep.violation->F) s += x;
      EXPECT_EQ(s, rep.violation->sum);
      EXPECT_FALSE(spec.member(s));
    }
  }
}

TEST(CheckThmB, NaturalsAlwaysPass) {
  auto r = check_thmB(SetSpec::everything(), certB(FiniteNatSet({3, 7, 11}), {0, 1, 2}, {1, 1, 5}, 1000), 1000);
  EXPECT_EQ(r.status, CheckStatus::Pass);
}

TEST(CheckThmB, ZeroSReducesToThmA) {
  std::mt19937_64 rng(11);
  auto A = make_straus(StrausSpec({5, 13, 29}));
  auto odds = SetSpec::residue(2, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const SetSpec& S = trial % 2 ? A : odds;
    std::vector<std::uint64_t> b;
    while (b.size() < 4) {
      b.push_back(1 + rng() % 300);
      std::sort(b.begin(), b.end());
      b.erase(std::unique(b.begin(), b.end()), b.end());
    }
    FiniteNatSet B(b);
    std::vector<std::int64_t> t;
    std::int64_t acc = 0;
    for (int k = 0; k < 3; ++k) t.push_back(acc += static_cast<std::int64_t>(rng() % 4));
    for (std::size_t k = 1; k <= 3; ++k) {
      // Level kk of ThmB with s = 0 is range_sums(B, 1, kk) + t_kk: ThmA with K = 1, ell = kk - 1.
      auto b_level = check_thmB(S, certB(B, {t.begin(), t.begin() + k}, std::vector<std::int64_t>(k, 0), 3000), 3000);
      bool b_ok_upto_k = true;
      for (std::size_t kk = 1; kk <= k; ++kk)
        b_ok_upto_k = b_ok_upto_k && check_thmA(S, certA(B, {t[kk - 1]}, kk - 1, 3000), 3000).status == CheckStatus::Pass;
      EXPECT_EQ(b_level.status == CheckStatus::Pass, b_ok_upto_k);
    }
  }
}

TEST(Verify, TamperedCertificate) {
  auto A = make_straus(StrausSpec({5, 13, 29}));
  // B multiples of 1885, t = 3: every sum is 3 mod each prime.
  auto c = certA(FiniteNatSet({1885, 3770, 5655}), {3, 3}, 1, 100000);
  EXPECT_EQ(verify(c, A, 100000).status, CheckStatus::Pass);
  c.B = FiniteNatSet({1885, 3767, 5655});  // 3767 + 3 = 3770 is 0 mod 5
  EXPECT_EQ(verify(c, A, 100000).status, CheckStatus::Violation);
  auto empty = certA(FiniteNatSet{}, {0}, 0, 100);
  EXPECT_EQ(verify(empty, A, 100).status, CheckStatus::Vacuous);
}

TEST(Verify, MonotoneInWindow) {
  auto A = make_straus(StrausSpec({5, 13, 29}));
  auto c = certB(FiniteNatSet({1885, 3770, 5655, 7540}), {3, 3, 3}, {0, 0, 1885}, 100000);
  ASSERT_EQ(verify(c, A, 100000).status, CheckStatus::Pass);
  for (std::uint64_t W : {50000u, 20000u, 5000u}) EXPECT_NE(verify(c, A, W).status, CheckStatus::Violation);
}

TEST(Certificate, JsonRoundTripAndInvariants) {
  auto c = certB(FiniteNatSet({2, 5}), {1, 1}, {0, 3}, 77);
  c.verified = true;
  auto j = to_json(c);
  for (const char* key : {"kind", "ell", "B", "t", "s", "K", "window", "verified", "violation"})
    EXPECT_TRUE(j.contains(key)) << key;
  auto back = certificate_from_json(j);
  EXPECT_EQ(back.B, c.B);
  EXPECT_EQ(back.s, c.s);
  auto bad = j;
  bad["t"] = {2, 1};
  EXPECT_THROW(certificate_from_json(bad), InvalidInput);
  bad = j;
  bad["t"] = {1};
  EXPECT_THROW(certificate_from_json(bad), InvalidInput);
}
