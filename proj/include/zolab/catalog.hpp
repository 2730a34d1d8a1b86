#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "zolab/block_rules.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/int_rule.hpp"
#include "zolab/lambda.hpp"
#include "zolab/rng.hpp"

namespace zolab {

enum class KnownType { Type1, Type2, Open };

inline std::string to_string(KnownType t) {
  switch (t) {
    case KnownType::Type1: return "Type1";
    case KnownType::Type2: return "Type2";
    case KnownType::Open: return "Open";
  }
  return "Open";
}

struct CatalogEntry {
  std::string name;
  LambdaSpec spec;
  KnownType known_type = KnownType::Open;
  std::string source;  // which construction the type comes from
  std::shared_ptr<const FamilyRule> family;  // set for dyadic families
  nlohmann::json params = nlohmann::json::object();
  std::string note;
};

namespace catalog {

inline KnownType type_from_gaps(const FamilyRule& rule) {
  switch (rule.m().gap_sup(rule.k0()).kind) {
    case IntRule::GapClass::Bounded: return KnownType::Type1;
    case IntRule::GapClass::Unbounded: return KnownType::Type2;
    case IntRule::GapClass::Unknown: return KnownType::Open;
  }
  return KnownType::Open;
}

/// ∪_k 2^{-m_k} N ∩ [n_k, n_{k+1}); type decided by whether m has bounded gaps.
inline CatalogEntry dyadic_family(const IntRule& m, const IntRule& n, std::int64_t k0 = 1,
                                  std::string name = "dyadic_family") {
  auto rule = std::make_shared<const FamilyRule>(m, n, k0);
  CatalogEntry e;
  e.name = std::move(name);
  e.spec = dyadic_blocks(rule);
  e.family = rule;
  e.known_type = type_from_gaps(*rule);
  e.source = "dyadic family: type 1 iff sup(m_{k+1} - m_k) is finite";
  e.params = rule->to_json();
  if (e.known_type == KnownType::Open) e.note = "finite prefix only; gap supremum undecidable";
  return e;
}

/// 2^{-k} N ∩ [k, k+1) for k >= 0.
inline CatalogEntry dyadic_a() {
  auto e = dyadic_family(IntRule::affine(1, 0), IntRule::affine(1, 0), 0, "dyadic_a");
  e.source = "dyadic blocks 2^{-k}N on [k, k+1); bounded exponent gaps";
  return e;
}

/// m(k) = 1 + k(k-1)/2, so m(k+1) - m(k) = k. With a rule for n the family
/// is type 2; with only a finite prefix of n the type is left open.
inline CatalogEntry example_dyadic_b(const IntRule& n, std::string name = "example_dyadic_b") {
  const IntRule m = IntRule::polynomial({Rational(1), Rational(-1, 2), Rational(1, 2)});
  if (n.is_prefix()) {
    const auto len = *n.end_index() - 1;  // blocks k = 1 .. len
    std::vector<Integer> ms;
    for (std::int64_t k = 1; k <= len; ++k) ms.push_back(m.at(k));
    auto e = dyadic_family(IntRule::prefix(ms, 1), n, 1, std::move(name));
    e.note = "m(k+1) - m(k) = k recorded as rule; only a prefix of n supplied";
    e.params["m_rule"] = m.to_json();
    return e;
  }
  auto e = dyadic_family(m, n, 1, std::move(name));
  e.source = "dyadic blocks with exponent gaps m(k+1) - m(k) = k";
  return e;
}

/// Member n of the nested chain ... ⊂ Λ_{n+1} ⊂ Λ_n ⊂ ...; odd members are
/// type 1, even members type 2.
inline CatalogEntry sandwich(std::int64_t n) {
  auto rule = std::make_shared<const SandwichRule>(n);
  CatalogEntry e;
  e.name = "sandwich." + std::to_string(n);
  e.spec = dyadic_blocks(rule);
  e.known_type = rule->uses_l() ? KnownType::Type1 : KnownType::Type2;
  e.source = rule->uses_l() ? "nested chain, exponent l(v,j) = floor(v 2^-j): bounded gaps"
                            : "nested chain, exponent m(v,j) = largest power of 2 <= v 2^-j: unbounded gaps";
  e.params = {{"n", n}, {"j", rule->j()}, {"exponent", rule->uses_l() ? "l" : "m"}};
  return e;
}

inline CatalogEntry union_counterexample_part(int part) {
  CatalogEntry e;
  e.name = "union_counterexample." + std::to_string(part);
  e.spec = dyadic_blocks(std::make_shared<const UnionCounterexampleRule>(part));
  e.known_type = KnownType::Type2;
  e.source = "alternating fine/coarse runs; cell-count ratios unbounded";
  e.params = {{"part", part}};
  e.note = "includes the point 0";
  return e;
}

/// Two type 2 sets whose union is type 1.
inline std::pair<CatalogEntry, CatalogEntry> union_counterexample() {
  return {union_counterexample_part(1), union_counterexample_part(2)};
}

/// ∪_{n>=0} [n, n+1) ∩ 2^{-n}Z, the union of both counterexample parts.
inline CatalogEntry diagonal_grid() {
  auto e = dyadic_family(IntRule::affine(1, 0), IntRule::affine(1, 0), 0, "union_counterexample.union");
  e.source = "union of the two counterexample parts; dyadic family with m_k = n_k = k";
  return e;
}

/// {log 1, ..., log N}.
inline CatalogEntry log_integers(std::int64_t N) {
  if (N < 1) throw InvalidArgument("log_integers needs N >= 1");
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(N));
  for (std::int64_t n = 1; n <= N; ++n) xs.push_back(std::log(static_cast<double>(n)));
  CatalogEntry e;
  e.name = "log_integers." + std::to_string(N);
  e.spec = explicit_reals(xs, default_tau(), "log n");
  e.known_type = KnownType::Type2;
  e.source = "logarithms of the positive integers";
  e.params = {{"N", N}};
  e.note = "floating-point values; prefix of an infinite set";
  return e;
}

/// (i, j) with i <= j in the order (1,1), (1,2), (2,2), (1,3), (2,3), (3,3), ...
inline std::vector<std::pair<int, int>> anti_lex_pairs(int count) {
  std::vector<std::pair<int, int>> out;
  for (int j = 1; static_cast<int>(out.size()) < count; ++j)
    for (int i = 1; i <= j && static_cast<int>(out.size()) < count; ++i) out.emplace_back(i, j);
  return out;
}

/// Number of α values the depth-K construction uses.
inline int alg_indep_alpha_count(int K) {
  int most = 0;
  for (auto [i, j] : anti_lex_pairs(K)) most = std::max(most, i);
  return most;
}

/// Seeded dyadic stand-ins for independent reals in (0, 1).
inline std::vector<Dyadic> sampled_alphas(int count, std::uint64_t seed, unsigned bits = 192) {
  CounterRng rng(seed, 0x616c706861ULL);
  std::vector<Dyadic> out;
  while (static_cast<int>(out.size()) < count) {
    Dyadic a = rng.dyadic_in(Dyadic(0), Dyadic(1), bits);
    if (a.sign() <= 0) continue;
    bool clash = false;
    for (const auto& b : out) clash = clash || (a == b);
    if (!clash) out.push_back(a);
  }
  return out;
}

/// {α + j/2^k : 0 < α + j/2^k < 1}
inline std::vector<Dyadic> grid_translates(const Dyadic& alpha, int k) {
  std::vector<Dyadic> out;
  const Dyadic step(Integer(1), k);
  Dyadic x = alpha;
  while (x.sign() > 0) x = x - step;
  x = x + step;
  for (; x < Dyadic(1); x = x + step)
    if (x.sign() > 0) out.push_back(x);
  return out;
}

/// Materializes Λ_1 ∪ ... ∪ Λ_K where Λ_k = ∪_{i<2^k} (B_k + 2^k + i) and
/// B_k collects the translate grids of the first k anti-lexicographic pairs.
inline CatalogEntry alg_indep_type1(int K, const std::vector<Dyadic>& alphas) {
  if (K < 1) throw InvalidArgument("alg_indep_type1 needs K >= 1");
  if (K > 5) throw DepthTooLarge("alg_indep_type1 depth is limited to 5");
  const int need = alg_indep_alpha_count(K);
  if (static_cast<int>(alphas.size()) < need)
    throw InvalidArgument("alg_indep_type1 needs " + std::to_string(need) + " alpha values");
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    if (alphas[a].sign() <= 0 || alphas[a] >= Dyadic(1))
      throw InvalidArgument("alpha values must lie in (0, 1)");
    for (std::size_t b = 0; b < a; ++b)
      if (alphas[a] == alphas[b]) throw InvalidArgument("alpha values must be distinct");
  }
  std::vector<Dyadic> B, pts;
  const auto pairs = anti_lex_pairs(K);
  for (int k = 1; k <= K; ++k) {
    const auto [i, j] = pairs[static_cast<std::size_t>(k - 1)];
    auto A = grid_translates(alphas[static_cast<std::size_t>(i - 1)], j);
    B.insert(B.end(), A.begin(), A.end());
    std::sort(B.begin(), B.end());
    B.erase(std::unique(B.begin(), B.end()), B.end());
    const long base = 1L << k;
    for (long s = 0; s < base; ++s)
      for (const auto& b : B) pts.push_back(b + Dyadic(base + s));
  }
  CatalogEntry e;
  e.name = "alg_indep_type1." + std::to_string(K);
  e.spec = explicit_set(std::move(pts), e.name);
  e.known_type = KnownType::Type1;
  e.source = "shifted translate grids of independent reals; every 1/2^k is a translator";
  nlohmann::json al = nlohmann::json::array();
  for (const auto& a : alphas) al.push_back(a.str());
  e.params = {{"K", K}, {"alpha", al}};
  e.note = "assumed independent (sampled)";
  return e;
}

inline CatalogEntry alg_indep_type1(int K, std::uint64_t seed = 1) {
  if (K > 5) throw DepthTooLarge("alg_indep_type1 depth is limited to 5");
  auto e = alg_indep_type1(K, sampled_alphas(std::max(1, alg_indep_alpha_count(K)), seed));
  e.params["seed"] = seed;
  return e;
}

/// Type bookkeeping for set operations: unions and Minkowski sums of type 1
/// sets are type 1; nothing is known otherwise.
inline KnownType union_type(KnownType a, KnownType b) {
  return a == KnownType::Type1 && b == KnownType::Type1 ? KnownType::Type1 : KnownType::Open;
}
inline KnownType minkowski_type(KnownType a, KnownType b) { return union_type(a, b); }

inline CatalogEntry union_entry(const CatalogEntry& a, const CatalogEntry& b) {
  CatalogEntry e;
  e.name = a.name + "|" + b.name;
  e.spec = union_of(a.spec, b.spec);
  e.known_type = union_type(a.known_type, b.known_type);
  e.source = e.known_type == KnownType::Type1 ? "union of two type 1 sets" : "union; no general rule";
  e.params = {{"left", a.name}, {"right", b.name}};
  return e;
}

inline CatalogEntry minkowski_entry(const CatalogEntry& a, const CatalogEntry& b) {
  CatalogEntry e;
  e.name = a.name + "+" + b.name;
  e.spec = minkowski(a.spec, b.spec);
  e.known_type = minkowski_type(a.known_type, b.known_type);
  e.source = e.known_type == KnownType::Type1 ? "Minkowski sum of two type 1 sets"
                                              : "Minkowski sum; no general rule";
  e.params = {{"left", a.name}, {"right", b.name}};
  return e;
}

/// Fixed-name entries, plus parameterized names "sandwich.<n>",
/// "log_integers.<N>" and "alg_indep_type1.<K>".
inline std::optional<CatalogEntry> lookup(const std::string& name) {
  auto suffix = [&](const std::string& prefix) -> std::optional<std::int64_t> {
    if (name.rfind(prefix, 0) != 0) return std::nullopt;
    try {
      std::size_t used = 0;
      const std::string rest = name.substr(prefix.size());
      auto v = std::stoll(rest, &used);
      if (used != rest.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (name == "dyadic_a") return dyadic_a();
  if (name == "union_counterexample.1") return union_counterexample_part(1);
  if (name == "union_counterexample.2") return union_counterexample_part(2);
  if (name == "union_counterexample.union") return diagonal_grid();
  if (name == "example_dyadic_b") return example_dyadic_b(IntRule::affine(1, 0));
  if (name == "dyadic_family.exp")
    return dyadic_family(IntRule::exponential(1, 2, 0), IntRule::affine(1, 0), 1, name);
  if (name == "dyadic_family.triangular")
    return dyadic_family(IntRule::polynomial({Rational(0), Rational(1, 2), Rational(1, 2)}),
                         IntRule::affine(1, 0), 1, name);
  if (auto n = suffix("sandwich.")) return sandwich(*n);
  if (auto n = suffix("log_integers.")) return log_integers(*n);
  if (auto n = suffix("alg_indep_type1.")) return alg_indep_type1(static_cast<int>(*n));
  return std::nullopt;
}

inline CatalogEntry require(const std::string& name) {
  auto e = lookup(name);
  if (!e) throw InvalidArgument("unknown catalog name: " + name);
  return *e;
}

/// Representative names for listings.
inline std::vector<std::string> listing_names() {
  return {"dyadic_a",           "dyadic_family.exp",      "dyadic_family.triangular",
          "example_dyadic_b",   "sandwich.-1",            "sandwich.0",
          "sandwich.1",         "sandwich.2",             "union_counterexample.1",
          "union_counterexample.2", "union_counterexample.union", "log_integers.10000",
          "alg_indep_type1.3"};
}

}  // namespace catalog
}  // namespace zolab
