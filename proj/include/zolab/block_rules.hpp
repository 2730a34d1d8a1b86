#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/int_rule.hpp"
#include "zolab/lambda.hpp"

namespace zolab {

/// ∪_k 2^{-m_k} N ∩ [n_k, n_{k+1}) for k >= k0. When n is a prefix with as
/// many terms as m, the last block runs to +infinity.
class FamilyRule : public BlockRule {
 public:
  FamilyRule(IntRule m, IntRule n, std::int64_t k0 = 1)
      : m_(std::move(m)), n_(std::move(n)), k0_(k0) {
    if (!m_.defined_at(k0_) || !n_.defined_at(k0_))
      throw InvalidArgument("family rule undefined at its first index");
    if (!m_.strictly_increasing_from(k0_)) throw NotIncreasing("m_k is not strictly increasing");
    if (!n_.strictly_increasing_from(k0_)) throw NotIncreasing("n_k is not strictly increasing");
    std::optional<std::int64_t> end;
    if (m_.is_prefix()) end = *m_.end_index();
    if (n_.is_prefix()) {
      const auto en = *n_.end_index();
      if (m_.is_prefix() && en != *end && en != *end + 1)
        throw InvalidArgument("n must have as many terms as m, or one more");
      if (!end || en < *end) end = en;
    }
    if (end) last_k_ = *end - 1;
  }

  const IntRule& m() const { return m_; }
  const IntRule& n() const { return n_; }
  std::int64_t k0() const { return k0_; }
  /// Index of the last block, nullopt when there are infinitely many.
  std::optional<std::int64_t> last_index() const { return last_k_; }

  /// Support of block k: [n_k, n_{k+1}), upper end nullopt for the final
  /// block of a finite family.
  std::optional<Rational> block_end(std::int64_t k) const {
    if (last_k_ && k == *last_k_ && !(n_.is_prefix() && n_.defined_at(k + 1))) return std::nullopt;
    return Rational(n_.at(k + 1));
  }

  Block block(std::int64_t k) const {
    return Block::natural(to_int64(m_.at(k)), Rational(n_.at(k)), block_end(k));
  }

  std::vector<Block> blocks_meeting(const Rational& lo, const Rational& hi) const override {
    std::vector<Block> out;
    if (hi <= lo) return out;
    // First k with n_{k+1} > lo (or the last block).
    auto ends_after = [&](std::int64_t k) {
      auto e = block_end(k);
      return !e || *e > lo;
    };
    std::int64_t k = first_true(ends_after);
    for (; !last_k_ || k <= *last_k_; ++k) {
      if (Rational(n_.at(k)) >= hi) break;
      out.push_back(block(k));
      if (out.size() > 10'000'000) throw WindowTooLarge("window meets too many blocks");
      if (!block_end(k)) break;
    }
    return out;
  }

  std::optional<Rational> lower_bound() const override {
    Rational l(n_.at(k0_));
    return l < 0 ? Rational(0) : l;
  }

  nlohmann::json to_json() const override {
    return {{"kind", "family"}, {"m", m_.to_json()}, {"n", n_.to_json()}, {"k0", k0_}};
  }

 private:
  // Smallest k >= k0 with pred(k) true; pred is monotone.
  template <class Pred>
  std::int64_t first_true(Pred pred) const {
    std::int64_t lo = k0_;
    if (pred(lo)) return lo;
    std::int64_t step = 1;
    std::int64_t hi = lo + step;
    while (true) {
      if (last_k_ && hi >= *last_k_) {
        hi = *last_k_;
        break;
      }
      if (pred(hi)) break;
      lo = hi;
      step *= 2;
      hi = lo + step;
    }
    while (hi - lo > 1) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (pred(mid)) hi = mid;
      else lo = mid;
    }
    return hi;
  }

  IntRule m_, n_;
  std::int64_t k0_;
  std::optional<std::int64_t> last_k_;
};

/// One grid per unit interval [ν, ν+1), ν >= first_unit(), with exponent e(ν).
class UnitGridRule : public BlockRule {
 public:
  virtual Integer exponent(const Integer& nu) const = 0;
  virtual std::int64_t first_unit() const { return 1; }

  std::vector<Block> blocks_meeting(const Rational& lo, const Rational& hi) const override {
    std::vector<Block> out;
    Integer nu = floor_of(lo);
    if (nu < first_unit()) nu = first_unit();
    const Integer end = ceil_of(hi);
    if (end - nu > 10'000'000) throw WindowTooLarge("window meets too many unit blocks");
    for (; nu < end; ++nu)
      out.push_back(Block{to_int64(exponent(nu)), Rational(nu), Rational(nu + 1)});
    return out;
  }

  std::optional<Rational> lower_bound() const override { return Rational(first_unit()); }
};

inline std::int64_t floor_log2(const Integer& v) {
  return static_cast<std::int64_t>(mpz_sizeinbase(v.get_mpz_t(), 2)) - 1;
}

/// l(ν, j) = floor(ν 2^{-j})
inline Integer sandwich_l(const Integer& nu, std::int64_t j) {
  return floor_of(scale_pow2(Rational(nu), -j));
}

/// m(ν, j): the largest power of two <= ν 2^{-j}, or 0 when ν 2^{-j} < 1.
inline Integer sandwich_m(const Integer& nu, std::int64_t j) {
  Integer l = sandwich_l(nu, j);
  if (l < 1) return 0;
  return pow2(static_cast<std::uint64_t>(floor_log2(l)));
}

/// Member n of the nested chain: odd n uses l(·, j), even n uses m(·, j),
/// with j = ceil(n / 2).
class SandwichRule : public UnitGridRule {
 public:
  explicit SandwichRule(std::int64_t index) : index_(index) {}

  std::int64_t index() const { return index_; }
  std::int64_t j() const { return index_ >= 0 ? (index_ + 1) / 2 : -((-index_) / 2); }
  bool uses_l() const { return index_ % 2 != 0; }

  Integer exponent(const Integer& nu) const override {
    return uses_l() ? sandwich_l(nu, j()) : sandwich_m(nu, j());
  }

  nlohmann::json to_json() const override { return {{"kind", "sandwich"}, {"n", index_}}; }

 private:
  std::int64_t index_;
};

/// The two alternating-run sets whose union is ∪_{ν>=0} [ν, ν+1) ∩ 2^{-ν}Z.
/// With b = floor(log2 ν): part 1 uses exponent ν when b is even and 2^b
/// when b is odd; part 2 the other way round. Both contain the point 0.
class UnionCounterexampleRule : public UnitGridRule {
 public:
  explicit UnionCounterexampleRule(int part) : part_(part) {
    if (part != 1 && part != 2) throw InvalidArgument("union counterexample part must be 1 or 2");
  }

  int part() const { return part_; }
  std::int64_t first_unit() const override { return 0; }

  Integer exponent(const Integer& nu) const override {
    if (nu == 0) return 0;
    const std::int64_t b = floor_log2(nu);
    const bool fine = (b % 2 == 0) == (part_ == 1);
    return fine ? nu : pow2(static_cast<std::uint64_t>(b));
  }

  nlohmann::json to_json() const override {
    return {{"kind", "union_counterexample"}, {"part", part_}};
  }

 private:
  int part_;
};

}  // namespace zolab
