#include <cmath>
#include <cstdio>

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace zolab;
using oracle::q;

namespace {

std::vector<Rational> enum_q(const LambdaSpec& s, const Window& w) { return oracle::as_rationals(enumerate(s, w)); }

}  // namespace

// ------------------------------------------------------------ dyadic numbers

TEST(Dyadic, CanonicalFormIsUnique) {
  CounterRng rng(11);
  for (int i = 0; i < 2000; ++i) {
    const Integer num(static_cast<long>(rng.between(-100000, 100000)));
    const auto e = rng.between(-5, 40);
    const Dyadic d(num, e);
    EXPECT_TRUE(d.exp() == 0 || mpz_odd_p(d.num().get_mpz_t()));
    EXPECT_GE(d.exp(), 0);
    EXPECT_EQ(d.to_rational(), Rational(num) * oracle::pow2q(-e));
    const auto back = Dyadic::from_rational(d.to_rational());
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->num(), d.num());
    EXPECT_EQ(back->exp(), d.exp());
  }
}

TEST(Dyadic, OrderingMatchesRationalsOnRandomPairs) {
  CounterRng rng(12);
  for (int i = 0; i < 10000; ++i) {
    const Dyadic a(Integer(static_cast<long>(rng.between(-1000, 1000))), rng.between(0, 12));
    const Dyadic b(Integer(static_cast<long>(rng.between(-1000, 1000))), rng.between(0, 12));
    const Rational qa = a.to_rational(), qb = b.to_rational();
    EXPECT_EQ(a < b, qa < qb);
    EXPECT_EQ(a == b, qa == qb);
    EXPECT_EQ((a + b).to_rational(), qa + qb);
    EXPECT_EQ((a - b).to_rational(), qa - qb);
    EXPECT_EQ((a * b).to_rational(), qa * qb);
    EXPECT_EQ(compare(a, qb), qa < qb ? -1 : (qa == qb ? 0 : 1));
  }
}

TEST(Dyadic, DecimalAndDoubleConversions) {
  EXPECT_EQ(Dyadic(Integer(3), 1).to_decimal(), "1.5");
  EXPECT_EQ(Dyadic(Integer(-1), 3).to_decimal(), "-0.125");
  EXPECT_EQ(Dyadic(7).to_decimal(), "7");
  EXPECT_EQ(Dyadic::from_double(0.375).to_rational(), q(3, 8));
  EXPECT_FALSE(Dyadic::from_rational(q(1, 3)).has_value());
  EXPECT_EQ(parse_rational("0.125"), q(1, 8));
  EXPECT_EQ(parse_rational("-7/14"), q(-1, 2));
}

TEST(Rng, ThreefryKnownAnswer) {
  const auto out = Threefry2x64::apply({0, 0}, {0, 0});
  EXPECT_EQ(out[0], 0xc2b6e3a8c2c69865ULL);
  EXPECT_EQ(out[1], 0x6f81ed42f350084dULL);
}

TEST(Rng, StreamsAreReproducible) {
  CounterRng a(99, 3), b(99, 3), c(99, 4);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a(), y = b(), z = c();
    EXPECT_EQ(x, y);
    differs = differs || x != z;
  }
  EXPECT_TRUE(differs);
}

// ------------------------------------------------------------ enumeration

TEST(Enumerate, SingleHalfGridBlock) {
  const auto s = dyadic_blocks({Block{1, Rational(1), Rational(2)}});
  EXPECT_EQ(enum_q(s, Window(Rational(0), Rational(3))), (std::vector<Rational>{q(1), q(3, 2)}));
}

TEST(Enumerate, WindowBelowInfimumIsEmpty) {
  const auto s = catalog::union_counterexample_part(1).spec;
  EXPECT_TRUE(enumerate(s, Window(Rational(-5), Rational(0))).empty());
  EXPECT_TRUE(enumerate(catalog::dyadic_a().spec, Window(Rational(2), Rational(2))).empty());
}

TEST(Enumerate, UnionWithItselfIsIdempotent) {
  CounterRng rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto g = oracle::random_blocks(rng, 6, 10);
    const Window w(Rational(-1), Rational(12));
    EXPECT_EQ(enumerate(union_of(g.spec, g.spec), w), enumerate(g.spec, w));
  }
}

TEST(Enumerate, DyadicABlocks) {
  const auto s = catalog::dyadic_a().spec;
  EXPECT_EQ(enum_q(s, Window(Rational(0), Rational(1))), std::vector<Rational>{q(0)});
  EXPECT_EQ(enumerate(s, Window(Rational(0), Rational(4))).size(), 15u);
  EXPECT_EQ(count(s, Rational(5), Rational(6)), 32);
}

TEST(Enumerate, MatchesOracleOnRandomSpecs) {
  CounterRng rng(2024);
  for (int i = 0; i < 60; ++i) {
    const auto g = oracle::random_spec(rng, i);
    const Rational a = oracle::random_cut(rng, -3, 10);
    const Window w(a, a + oracle::random_cut(rng, 1, 14));
    EXPECT_EQ(enum_q(g.spec, w), oracle::as_vector(oracle::points(*g.mirror, w.lo, w.hi)))
        << g.kind << " case " << i;
  }
}

TEST(Enumerate, IsDeterministicAndSorted) {
  CounterRng rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto g = oracle::random_spec(rng, i);
    const Window w(Rational(-2), Rational(20));
    const auto a = enumerate(g.spec, w), b = enumerate(g.spec, w);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(std::adjacent_find(a.begin(), a.end(), [](const Dyadic& x, const Dyadic& y) { return !(x < y); }) ==
                a.end());
  }
}

TEST(Enumerate, CapRaisesWindowTooLarge) {
  const auto s = catalog::dyadic_a().spec;
  try {
    enumerate(s, Window(Rational(0), Rational(40)), EnumOptions{1'000'000});
    FAIL() << "expected WindowTooLarge";
  } catch (const WindowTooLarge& e) {
    EXPECT_EQ(e.code(), ExitCode::CapExceeded);
  }
}

TEST(Enumerate, ExplicitRealsMergeWithinTolerance) {
  const auto s = explicit_reals({1.0, 1.0 + 1e-15, 2.0, 0.5}, default_tau());
  EXPECT_FALSE(s.exact());
  EXPECT_EQ(enumerate(s, Window(Rational(0), Rational(3))).size(), 3u);
}

// ------------------------------------------------------------ cell counts

TEST(CountCells, UnionCounterexampleRatio) {
  const auto s = catalog::union_counterexample_part(1).spec;
  const auto cv = count_cells(s, Rational(1), Window(Rational(0), Rational(20)));
  EXPECT_EQ(cv.at(3), 4);
  EXPECT_EQ(cv.at(4), 16);
  EXPECT_EQ(cv.at(4) / cv.at(3), 4);
  // a_16 / a_15 = 2^16 / 2^8 at n = 2^4
  EXPECT_EQ(cv.at(16), Integer(1) << 16);
  EXPECT_EQ(cv.at(15), Integer(1) << 8);
}

TEST(CountCells, EmptyCellsBeforeInfimum) {
  const auto s = dyadic_blocks({Block{2, Rational(10), Rational(11)}});
  const auto cv = count_cells(s, Rational(1), Window(Rational(0), Rational(12)));
  for (int n = 0; n < 10; ++n) EXPECT_EQ(cv.at(n), 0);
  EXPECT_EQ(cv.at(10), 4);
}

TEST(CountCells, PartitionSumsToEnumeration) {
  CounterRng rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto g = oracle::random_spec(rng, i);
    const Rational eps = q(1, static_cast<long>(1 << rng.between(0, 3)));
    const Window w(Rational(-2), Rational(18));
    const auto cv = count_cells(g.spec, eps, w);
    Integer total(0);
    for (const auto& c : cv.counts) total += c;
    EXPECT_EQ(total, Integer(static_cast<unsigned long>(enumerate(g.spec, w).size()))) << g.kind;
    for (std::size_t k = 0; k < cv.counts.size(); ++k) {
      const Rational lo = Rational(cv.offset + static_cast<unsigned long>(k)) * eps;
      EXPECT_EQ(cv.counts[k], Integer(static_cast<unsigned long>(oracle::points(*g.mirror, lo, lo + eps).size())));
    }
  }
}

// ------------------------------------------------------------ set algebra

TEST(Union, WithEmptySetIsIdentity) {
  const auto s = catalog::dyadic_a().spec;
  const Window w(Rational(0), Rational(9));
  EXPECT_EQ(enumerate(union_of(s, empty_set()), w), enumerate(s, w));
}

TEST(Union, CounterexamplePartsGiveDiagonalGrid) {
  const auto [a, b] = catalog::union_counterexample();
  const Window w(Rational(1), Rational(16));
  const auto u = enum_q(union_of(a.spec, b.spec), w);
  EXPECT_EQ(u, oracle::as_vector(oracle::diagonal_points(w.lo, w.hi)));
  EXPECT_EQ(enum_q(a.spec, w), oracle::as_vector(oracle::counterexample_points(1, w.lo, w.hi)));
  EXPECT_EQ(enum_q(b.spec, w), oracle::as_vector(oracle::counterexample_points(2, w.lo, w.hi)));
  EXPECT_TRUE(equal_on(union_of(a.spec, b.spec), catalog::diagonal_grid().spec, w));
}

TEST(Union, AlignedBlockListsNormalize) {
  const std::vector<Block> x{Block{2, Rational(0), Rational(3)}}, y{Block{1, Rational(2), Rational(5)}};
  std::vector<Block> both = x;
  both.insert(both.end(), y.begin(), y.end());
  const auto merged = dyadic_blocks(both);
  const Window w(Rational(-1), Rational(6));
  EXPECT_EQ(enumerate(union_of(dyadic_blocks(x), dyadic_blocks(y)), w), enumerate(merged, w));
  const auto* db = merged.as<LambdaSpec::DyadicBlocks>();
  ASSERT_NE(db, nullptr);
  for (std::size_t i = 1; i < db->blocks.size(); ++i) EXPECT_LE(*db->blocks[i - 1].hi, db->blocks[i].lo);
}

TEST(Minkowski, IntegersPlusHalf) {
  const auto nat = dyadic_blocks({Block::natural(0, Rational(0), std::nullopt)});
  const auto half = explicit_set({Dyadic(0), Dyadic(Integer(1), 1)});
  EXPECT_EQ(enum_q(minkowski(nat, half), Window(Rational(0), Rational(3))),
            (std::vector<Rational>{q(0), q(1, 2), q(1), q(3, 2), q(2), q(5, 2)}));
}

TEST(Minkowski, ZeroIsIdentity) {
  const auto s = catalog::union_counterexample_part(2).spec;
  const Window w(Rational(0), Rational(9));
  EXPECT_EQ(enumerate(minkowski(s, explicit_set({Dyadic(0)})), w), enumerate(s, w));
  EXPECT_EQ(enumerate(minkowski_sum(s, explicit_set({Dyadic(0)}), w), w), enumerate(s, w));
}

TEST(Minkowski, ContainsBaseWhenOtherHasZero) {
  CounterRng rng(77);
  for (int i = 0; i < 15; ++i) {
    const auto a = oracle::random_blocks(rng, 4, 8);
    auto other = oracle::random_explicit(rng, 6);
    const auto b = union_of(other.spec, explicit_set({Dyadic(0)}));
    const Window w(Rational(-2), Rational(10));
    EXPECT_TRUE(subset_on(a.spec, minkowski(a.spec, b), w));
  }
}

TEST(Minkowski, CounterexampleSumEqualsUnion) {
  const auto [a, b] = catalog::union_counterexample();
  const Window w(Rational(1), Rational(16));
  EXPECT_EQ(enumerate(minkowski(a.spec, b.spec), w), enumerate(union_of(a.spec, b.spec), w));
}

// ------------------------------------------------------------ thinning

TEST(Thin, FullProbabilityKeepsEverything) {
  const auto s = catalog::dyadic_a().spec;
  const Window w(Rational(0), Rational(8));
  EXPECT_EQ(enumerate(thin(s, 1.0, 5), w), enumerate(s, w));
}

TEST(Thin, HalfWithinThreeSigmaOfBinomial) {
  const auto s = catalog::dyadic_a().spec;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    const auto kept = enumerate(thin(s, 0.5, seed), Window(Rational(10), Rational(11))).size();
    const double mean = 512.0, sigma = std::sqrt(1024 * 0.25);
    EXPECT_LE(std::fabs(static_cast<double>(kept) - mean), 3 * sigma) << "seed " << seed;
  }
}

TEST(Thin, DecisionsAgreeAcrossWindows) {
  const auto t = thin(catalog::dyadic_a().spec, 0.3, 42);
  const auto big = enumerate(t, Window(Rational(3), Rational(9)));
  const auto small = enumerate(t, Window(Rational(5), Rational(7)));
  std::vector<Dyadic> restricted;
  for (const auto& x : big)
    if (compare(x, Rational(5)) >= 0 && compare(x, Rational(7)) < 0) restricted.push_back(x);
  EXPECT_EQ(small, restricted);
  EXPECT_THROW(thin(catalog::dyadic_a().spec, 0.0, 1), InvalidArgument);
}

// ------------------------------------------------------------ affine images

TEST(Affine, IdentityAndExactness) {
  const auto s = catalog::dyadic_a().spec;
  const Window w(Rational(0), Rational(6));
  EXPECT_EQ(enumerate(affine(s, Rational(1), Rational(0)), w), enumerate(s, w));
  EXPECT_TRUE(affine(s, Rational(3), Rational(0)).exact());
  EXPECT_FALSE(affine(s, q(1, 3), Rational(0)).exact());
  EXPECT_TRUE(affine(s, q(1, 4), q(1, 2)).exact());
}

TEST(Affine, DoublingCoarsensGrid) {
  for (long k = 1; k <= 5; ++k) {
    const auto grid = dyadic_blocks({Block{k, Rational(0), Rational(4)}});
    const auto coarser = dyadic_blocks({Block{k - 1, Rational(0), Rational(8)}});
    const Window w(Rational(0), Rational(8));
    EXPECT_EQ(enumerate(affine(grid, Rational(2), Rational(0)), w), enumerate(coarser, w));
  }
}

TEST(Affine, ThirdScaleFallsBackToFloatingPoint) {
  const auto s = affine(dyadic_blocks({Block{1, Rational(0), Rational(2)}}), q(1, 3), Rational(0));
  const auto xs = enumerate(s, Window(Rational(0), Rational(1)));
  ASSERT_EQ(xs.size(), 4u);
  EXPECT_NEAR(xs[1].to_double(), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(classify::require_exact(s, "count_ratio_test"), InexactSpec);
}

// ------------------------------------------------------------ spec documents

TEST(SpecJson, RoundTripsEveryVariant) {
  CounterRng rng(3);
  std::vector<LambdaSpec> specs;
  for (int i = 0; i < 9; ++i) specs.push_back(oracle::random_spec(rng, i).spec);
  specs.push_back(thin(catalog::dyadic_a().spec, 0.5, 9));
  specs.push_back(affine(catalog::union_counterexample_part(1).spec, Rational(3), q(1, 2)));
  specs.push_back(catalog::sandwich(3).spec);
  specs.push_back(catalog::require("dyadic_family.exp").spec);
  for (const auto& s : specs) {
    const auto text = spec_json::to_json(s).dump();
    const auto back = spec_json::parse(text);
    EXPECT_EQ(spec_json::to_json(back).dump(), text);
    const Window w(Rational(-1), Rational(4));
    EXPECT_EQ(enumerate(back, w), enumerate(s, w)) << text;
  }
}

TEST(SpecJson, CatalogReferenceAndErrors) {
  const auto s = spec_json::parse(R"({"variant":"catalog","name":"dyadic_a"})");
  EXPECT_EQ(enumerate(s, Window(Rational(0), Rational(4))).size(), 15u);
  const auto nat = spec_json::parse(R"({"variant":"dyadic_blocks","blocks":[{"exp":0,"lo":"-3","hi":"2","grid":"N"}]})");
  EXPECT_EQ(enumerate(nat, Window(Rational(-5), Rational(5))).size(), 2u);
  EXPECT_THROW(spec_json::parse("{"), InvalidArgument);
  EXPECT_THROW(spec_json::parse(R"({"variant":"nope"})"), InvalidArgument);
  EXPECT_THROW(spec_json::parse(R"({"variant":"explicit","values":["1/3"]})"), InvalidArgument);
}
