#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace zolab;
using oracle::q;

namespace {

std::vector<long> as_longs(const std::vector<Integer>& xs) {
  std::vector<long> out;
  for (const auto& x : xs) out.push_back(x.get_si());
  return out;
}

LambdaSpec naturals() { return dyadic_blocks({Block::natural(0, q(0), std::nullopt)}); }

// Γ ∩ [a, b] from oracle points, closed on both sides.
std::vector<Rational> closed_slice(const std::set<Rational>& pts, const Rational& a, const Rational& b) {
  std::vector<Rational> out;
  for (auto it = pts.lower_bound(a); it != pts.end() && *it <= b; ++it) out.push_back(*it);
  return out;
}

bool periodic_oracle(const std::set<Rational>& pts, int i, long n) {
  const Rational h = oracle::pow2q(-i);
  for (long j = 1; j < (1L << i); ++j) {
    const Rational a = Rational(n) + h * (j - 1);
    auto lower = closed_slice(pts, a, a + h);
    for (auto& x : lower) x += h;
    if (lower != closed_slice(pts, a + h, a + 2 * h)) return false;
  }
  return true;
}

}  // namespace

// ------------------------------------------------------------ exponent gaps

TEST(MkType, DecidesRuleFamilies) {
  const auto a = classify::mk_type(catalog::dyadic_a());
  EXPECT_EQ(a.kind, VerdictKind::Type1);
  EXPECT_EQ(a.witness["M"], "1");
  const auto tri = catalog::dyadic_family(IntRule::polynomial({q(0), q(1, 2), q(1, 2)}), IntRule::affine(1, 0));
  EXPECT_EQ(classify::mk_type(tri).kind, VerdictKind::Type2);
  EXPECT_EQ(classify::mk_type(catalog::require("dyadic_family.exp")).kind, VerdictKind::Type2);
  const auto k_k = catalog::dyadic_family(IntRule::affine(1, 0), IntRule::affine(1, 0));
  EXPECT_EQ(classify::mk_type(k_k).kind, VerdictKind::Type1);
  const auto bounded = catalog::dyadic_family(IntRule::affine(5, 2), IntRule::exponential(1, 2, 0));
  EXPECT_EQ(classify::mk_type(bounded).kind, VerdictKind::Type1);
}

TEST(MkType, PrefixIsInconclusive) {
  std::vector<Integer> m, n;
  for (long k = 1; k <= 10; ++k) {
    m.push_back(k * k);
    n.push_back(k);
  }
  const auto e = catalog::dyadic_family(IntRule::prefix(m, 1), IntRule::prefix(n, 1));
  EXPECT_EQ(classify::mk_type(e).kind, VerdictKind::Inconclusive);
  EXPECT_THROW(classify::mk_type(catalog::union_counterexample_part(1)), UnsupportedRule);
}

TEST(MkType, AgreesWithCatalogOnRuleEntries) {
  for (const auto& name : {"dyadic_a", "dyadic_family.exp", "dyadic_family.triangular", "example_dyadic_b",
                           "union_counterexample.union"}) {
    const auto e = catalog::require(name);
    ASSERT_TRUE(e.family) << name;
    const auto v = classify::mk_type(e);
    const auto want = e.known_type == KnownType::Type1 ? VerdictKind::Type1 : VerdictKind::Type2;
    EXPECT_EQ(v.kind, want) << name;
  }
}

// ------------------------------------------------------------ ratio chains

TEST(CountRatio, DyadicAHasNoDeepChain) {
  const auto r = classify::count_ratio_test(catalog::dyadic_a().spec, q(1), Window(q(0), q(24)), 2);
  EXPECT_EQ(r.verdict.kind, VerdictKind::Inconclusive);
  const auto cells = oracle::unit_grid_cells([](long v) { return v; }, q(1, 3), 0, 71);
  EXPECT_EQ(r.cells.counts, cells);
  EXPECT_EQ(as_longs(r.chain.indices), oracle::greedy_chain(cells, 0));
}

TEST(CountRatio, CounterexampleChainAtDepthTwo) {
  const auto l1 = catalog::union_counterexample_part(1);
  const auto r = classify::count_ratio_test(l1.spec, q(1), Window(q(1), q(70)), 2);
  EXPECT_EQ(r.verdict.kind, VerdictKind::Evidence);
  const auto cells = oracle::unit_grid_cells([](long v) { return oracle::counterexample_exp(1, v); }, q(1, 3), 3, 209);
  ASSERT_EQ(r.cells.counts, cells);
  const auto want = oracle::greedy_chain(cells, 3);
  EXPECT_EQ(as_longs(r.chain.indices), want);
  EXPECT_EQ(as_longs(r.chain.indices), (std::vector<long>{48, 192}));
  // the unit-cell jumps at 16 and 64 are 2^8 and 2^32
  EXPECT_GE(make_rational(r.chain.numerators[0], r.chain.denominators[0]), 4);
  EXPECT_GE(make_rational(r.chain.numerators[1], r.chain.denominators[1]), 256);
}

TEST(CountRatio, EmptyCellsAreInconclusive) {
  const auto far = dyadic_blocks({Block::natural(2, q(100), q(200))});
  const auto r = classify::count_ratio_test(far, q(1), Window(q(0), q(10)), 1);
  EXPECT_EQ(r.verdict.kind, VerdictKind::Inconclusive);
  EXPECT_EQ(r.chain.size(), 0u);
  for (const auto& c : r.cells.counts) EXPECT_EQ(c, 0);
  EXPECT_EQ(classify::count_ratio_test(far, q(1), Window(q(3), q(3)), 1).cells.counts.size(), 0u);
}

TEST(CountRatio, ZeroConventions) {
  EXPECT_FALSE(classify::ratio_at_least_pow2(0, 0, 1));
  EXPECT_TRUE(classify::ratio_at_least_pow2(1, 0, 30));
  EXPECT_TRUE(classify::ratio_at_least_pow2(8, 2, 2));
  EXPECT_FALSE(classify::ratio_at_least_pow2(7, 2, 2));
}

TEST(CountRatio, ChainsAreValidOnRandomSpecs) {
  CounterRng rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto g = oracle::random_spec(rng, i);
    const auto r = classify::count_ratio_test(g.spec, q(1), Window(q(-2), q(24)), 1);
    ASSERT_TRUE(classify::chain_valid(r.chain, r.cells)) << i;
    for (std::size_t k = 0; k < r.chain.size(); ++k) {
      const Integer m = r.chain.indices[k];
      const Integer den = r.cells.at(m - 3) + r.cells.at(m - 2) + r.cells.at(m - 1);
      EXPECT_EQ(den, r.chain.denominators[k]);
      EXPECT_GT(r.chain.numerators[k], 0);
      EXPECT_GE(Rational(r.chain.numerators[k]), Rational(den) * oracle::pow2q(static_cast<long>(k) + 1));
      if (k > 0) EXPECT_GE(m - r.chain.indices[k - 1], 2);
    }
    EXPECT_EQ(as_longs(r.chain.indices),
              oracle::greedy_chain(r.cells.counts, static_cast<long>(r.cells.offset.get_si())));
  }
}

TEST(CountRatio, ChainNeverShrinksWithHorizon) {
  for (const auto& name : {"union_counterexample.1", "union_counterexample.2", "dyadic_family.exp"}) {
    const auto e = catalog::require(name);
    std::vector<long> prev;
    const bool exp_family = std::string(name) == "dyadic_family.exp";
    for (long h : {6L, 12L, 16L, 20L, 40L, 70L, 130L, 260L}) {
      if (exp_family && h > 16) break;
      const auto r = classify::count_ratio_test(e.spec, q(1), Window(q(1), q(h)), 1);
      const auto now = as_longs(r.chain.indices);
      ASSERT_GE(now.size(), prev.size()) << name << ' ' << h;
      EXPECT_TRUE(std::equal(prev.begin(), prev.end(), now.begin())) << name << ' ' << h;
      prev = now;
    }
    EXPECT_GE(prev.size(), 3u) << name;
  }
}

TEST(CountRatio, LongChainForcesLargeCoarseRatio) {
  EXPECT_EQ(classify::coarse_ratio_bound(q(1)), 9);
  EXPECT_EQ(classify::coarse_ratio_bound(q(2)), 2 + 6 + 24);
  for (const auto& name : {"union_counterexample.1", "union_counterexample.2", "dyadic_family.exp",
                           "dyadic_family.triangular"}) {
    const auto e = catalog::require(name);
    const Window w(q(1), q(std::string(name) == "dyadic_family.exp" ? 16 : 130));
    const auto r = classify::count_ratio_test(e.spec, q(1), w, 1);
    const auto coarse = classify::max_coarse_ratio(count_cells(e.spec, q(1), w), 2);
    for (const Rational c : {q(1, 2), q(1), q(2), q(5)}) {
      const Rational bound = classify::coarse_ratio_bound(c);
      bool exceeded = false;
      for (std::size_t k = 0; k < r.chain.size(); ++k)
        if (sgn(r.chain.denominators[k]) == 0 ||
            make_rational(r.chain.numerators[k], r.chain.denominators[k]) > bound)
          exceeded = true;
      if (exceeded) EXPECT_TRUE(coarse.infinite || *coarse.max_finite > c) << name << ' ' << c;
    }
  }
}

// ------------------------------------------------------------ growth

TEST(Growth, DoubleExponentialCountsOutgrowEveryBase) {
  const auto e = catalog::require("dyadic_family.exp");
  const std::vector<Rational> cs{q(2), q(10), q(100)};
  const auto v = classify::growth_test(e.spec, q(1), Window(q(1), q(17)), cs);
  EXPECT_EQ(v.kind, VerdictKind::Evidence);
  const auto& rows = v.witness["rows"];
  for (std::size_t i = 0; i < cs.size(); ++i) {
    // a_16 = 2^(2^16)
    const double want = 65536 * std::log10(2.0) - 16 * std::log10(to_double(cs[i]));
    EXPECT_NEAR(rows[i]["log10_max_ratio"].get<double>(), want, 1e-6);
    EXPECT_EQ(rows[i]["argmax_n"], "16");
  }
}

TEST(Growth, SingleExponentialFailsAtFour) {
  const auto v = classify::growth_test(catalog::dyadic_a().spec, q(1), Window(q(0), q(30)), {q(4)});
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  // max_n (2^n / 4^n) at n = 1
  EXPECT_NEAR(v.witness["rows"][0]["log10_max_ratio"].get<double>(), std::log10(0.5), 1e-12);
}

TEST(Growth, HorizonBeforeFirstBlock) {
  const auto far = dyadic_blocks({Block::natural(4, q(50), std::nullopt)});
  const auto v = classify::growth_test(far, q(1), Window(q(0), q(10)), {q(2)});
  EXPECT_EQ(v.kind, VerdictKind::Inconclusive);
  EXPECT_TRUE(v.witness["rows"][0]["log10_max_ratio"].is_null());
  EXPECT_THROW(classify::growth_test(far, q(1), Window(q(0), q(10)), {}), InvalidArgument);
}

// ------------------------------------------------------------ lacunarity

TEST(Lacunarity, ReferenceCases) {
  const auto nat = classify::lacunarity_verdict(naturals(), Window(q(0), q(64)));
  EXPECT_EQ(nat.kind, VerdictKind::Evidence);
  EXPECT_EQ(nat.witness["verdict"], "lacunary-evidence");
  const auto single = classify::lacunarity_test(dyadic_blocks({Block::natural(3, q(0), std::nullopt)}),
                                                Window(q(0), q(16)));
  EXPECT_FALSE(single.dense);
  EXPECT_TRUE(single.decreasing_gaps);
  for (const auto& g : single.window_sup) EXPECT_EQ(g, q(1, 8));
  const auto logs = classify::lacunarity_verdict(catalog::log_integers(10000).spec, Window(q(0), q(9)));
  EXPECT_EQ(logs.witness["verdict"], "dense-evidence");
  EXPECT_EQ(logs.kind, VerdictKind::Inconclusive);
}

// ------------------------------------------------------------ speed

TEST(Speed, QuadraticCountsGrow) {
  std::vector<Dyadic> pts;
  for (long k = 0; k < 32; ++k)
    for (long j = 0; j < 2 * k + 1; ++j) pts.push_back(Dyadic(k) + Dyadic(Integer(j), 6));
  const auto sq = explicit_set(pts);
  const auto rep = classify::speed_test(sq, Window(q(1), q(32)));
  for (std::size_t i = 0; i < rep.ns.size(); ++i) EXPECT_EQ(rep.ratios[i], Rational(rep.ns[i]));
  EXPECT_TRUE(rep.growing);
  EXPECT_EQ(classify::speed_verdict(sq, Window(q(1), q(32))).kind, VerdictKind::Evidence);
}

TEST(Speed, DyadicAAndNaturals) {
  const auto rep = classify::speed_test(catalog::dyadic_a().spec, Window(q(1), q(20)));
  for (std::size_t i = 0; i < rep.ns.size(); ++i) {
    const long n = rep.ns[i].get_si();
    EXPECT_EQ(rep.ratios[i], make_rational((Integer(1) << n) - 1, n));
  }
  const auto v = classify::speed_verdict(catalog::dyadic_a().spec, Window(q(1), q(20)));
  EXPECT_EQ(v.kind, VerdictKind::Evidence);
  EXPECT_NE(v.note.find("not checked"), std::string::npos);
  const auto nat = classify::speed_test(naturals(), Window(q(1), q(100)));
  for (const auto& r : nat.ratios) EXPECT_EQ(r, 1);
  EXPECT_FALSE(nat.growing);
}

// ------------------------------------------------------------ translators

TEST(Translator, CountsMatchBruteForce) {
  const auto a = catalog::dyadic_a().spec;
  for (const Rational t : {q(1, 2), q(1, 4), q(1), q(3, 8)}) {
    for (long hi : {2L, 5L, 8L}) {
      const auto pts = oracle::diagonal_points(q(0), q(hi));
      const auto before = oracle::diagonal_points(q(0) - t, q(hi) - t);
      long missing = 0;
      for (const auto& x : before)
        if (!pts.count(x + t)) ++missing;
      EXPECT_EQ(classify::translator_count(a, t, Window(q(0), q(hi))), missing) << t << ' ' << hi;
    }
  }
}

TEST(Translator, ReferenceCases) {
  const auto rep = classify::translator_test(catalog::dyadic_a().spec, q(1, 2), Window(q(0), q(8)));
  EXPECT_TRUE(rep.stable);
  for (const auto& c : rep.counts) EXPECT_EQ(c, 1);
  EXPECT_EQ(classify::translator_count(naturals(), q(1), Window(q(0), q(50))), 0);
  const auto logs = classify::translator_test(catalog::log_integers(10000).spec, q(1, 2), Window(q(0), q(9)));
  EXPECT_FALSE(logs.stable);
  EXPECT_TRUE(std::is_sorted(logs.counts.begin(), logs.counts.end()));
  EXPECT_GT(logs.counts.back(), logs.counts.front());
  EXPECT_THROW(classify::translator_test(naturals(), q(0), Window(q(0), q(4))), InvalidArgument);
}

TEST(Translator, DyadicShiftsOfIndependentTranslates) {
  const auto e = catalog::alg_indep_type1(3);
  const auto reps = classify::dyadic_translators(e.spec, Window(q(2), q(16)), 3);
  ASSERT_EQ(reps.size(), 4u);
  for (const auto& [t, rep] : reps) EXPECT_LE(rep.counts.back(), 400) << t;
}

// ------------------------------------------------------------ periodicity

TEST(Periodicity, FullAndCoarseGrids) {
  for (int i = 0; i <= 4; ++i) {
    const auto full = dyadic_blocks({Block{i, q(-4), std::nullopt}});
    for (long n = -2; n <= 5; ++n) EXPECT_TRUE(classify::periodicity_test(full, i, n)) << i << ' ' << n;
    if (i >= 1) {
      const auto coarse = dyadic_blocks({Block{i - 1, q(-4), std::nullopt}});
      for (long n = -2; n <= 5; ++n) EXPECT_FALSE(classify::periodicity_test(coarse, i, n)) << i << ' ' << n;
    }
  }
  // ℕ clipped at 0 breaks the shift on [-1, 0]
  EXPECT_FALSE(classify::periodicity_test(naturals(), 1, -1));
}

TEST(Periodicity, MatchesBruteForceShifts) {
  CounterRng rng(41);
  int trues = 0, falses = 0;
  for (int s = 0; s < 40; ++s) {
    const auto g = oracle::random_blocks(rng, 4, 6);
    const auto pts = oracle::points(*g.mirror, q(-3), q(12));
    for (long n = -1; n < 9; ++n)
      for (int i = 1; i <= 3; ++i) {
        const bool want = periodic_oracle(pts, i, n);
        ASSERT_EQ(classify::periodicity_test(g.spec, i, n), want) << s << ' ' << n << ' ' << i;
        (want ? trues : falses)++;
      }
  }
  EXPECT_GT(trues, 0);
  EXPECT_GT(falses, 0);
}
