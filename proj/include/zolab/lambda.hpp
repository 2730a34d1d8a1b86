#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/rng.hpp"

namespace zolab {

/// Half-open interval [lo, hi). lo == hi is the empty window.
struct Window {
  Rational lo;
  Rational hi;

  Window() = default;
  Window(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) throw InvalidArgument("window needs lo <= hi");
  }
  bool empty() const { return lo == hi; }
  bool contains(const Rational& x) const { return lo <= x && x < hi; }
};

/// Grid points j / 2^exp (j in Z) inside [lo, hi). exp may be negative, in
/// which case the grid is 2^|exp| Z. hi == nullopt means +infinity.
struct Block {
  std::int64_t exp = 0;
  Rational lo;
  std::optional<Rational> hi;

  /// Points of 2^{-exp} N: same grid, support clipped to [0, ...).
  static Block natural(std::int64_t exp, Rational lo, std::optional<Rational> hi) {
    if (lo < 0) lo = 0;
    return Block{exp, std::move(lo), std::move(hi)};
  }

  bool unbounded() const { return !hi.has_value(); }

  /// First grid index at or above x.
  Integer index_at(const Rational& x) const { return ceil_of(scale_pow2(x, exp)); }

  /// #(block ∩ [a, b)), exact.
  Integer count_in(const Rational& a, const Rational& b) const {
    const Rational& l = a > lo ? a : lo;
    Rational h = b;
    if (hi && *hi < h) h = *hi;
    if (h <= l) return 0;
    return index_at(h) - index_at(l);
  }

  friend bool operator==(const Block& a, const Block& b) {
    return a.exp == b.exp && a.lo == b.lo && a.hi == b.hi;
  }
};

/// A (possibly infinite) sequence of blocks with pairwise disjoint supports,
/// described by a rule rather than a list.
class BlockRule {
 public:
  virtual ~BlockRule() = default;
  /// Blocks whose support meets [lo, hi), ascending by support. Supports
  /// need not be clipped to the window.
  virtual std::vector<Block> blocks_meeting(const Rational& lo, const Rational& hi) const = 0;
  /// Some rational <= every element; nullopt if the set is empty.
  virtual std::optional<Rational> lower_bound() const = 0;
  virtual nlohmann::json to_json() const = 0;
};

struct EnumOptions {
  std::uint64_t cap = 100'000'000;
};

class LambdaSpec;

namespace detail {
struct Node;
}

/// Immutable symbolic description of a discrete set bounded below.
class LambdaSpec {
 public:
  struct DyadicBlocks {
    std::vector<Block> blocks;  // normalized; ignored when rule is set
    std::shared_ptr<const BlockRule> rule;
  };
  struct ExplicitReals {
    std::vector<Dyadic> values;  // ascending, merged
    bool exact = true;
    Rational tau;
    std::string label;
  };
  struct Union {
    std::shared_ptr<const detail::Node> left, right;
  };
  struct Minkowski {
    std::shared_ptr<const detail::Node> left, right;
  };
  struct Thinned {
    std::shared_ptr<const detail::Node> base;
    double p = 1.0;
    std::uint64_t seed = 0;
  };
  struct Affine {
    std::shared_ptr<const detail::Node> base;
    Rational scale{1};
    Rational shift{0};
  };
  using Variant = std::variant<DyadicBlocks, ExplicitReals, Union, Minkowski, Thinned, Affine>;

  LambdaSpec();
  explicit LambdaSpec(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}

  const Variant& variant() const;
  bool exact() const;
  /// Merge tolerance for inexact specs; 0 for exact ones.
  const Rational& tau() const;
  const std::shared_ptr<const detail::Node>& node() const { return node_; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&variant());
  }

 private:
  std::shared_ptr<const detail::Node> node_;
};

namespace detail {
struct Node {
  LambdaSpec::Variant v;
  bool exact = true;
  Rational tau{0};
};
}  // namespace detail

inline LambdaSpec::LambdaSpec()
    : node_(std::make_shared<detail::Node>(
          detail::Node{DyadicBlocks{}, true, Rational(0)})) {}

inline const LambdaSpec::Variant& LambdaSpec::variant() const { return node_->v; }
inline bool LambdaSpec::exact() const { return node_->exact; }
inline const Rational& LambdaSpec::tau() const { return node_->tau; }

inline Rational default_tau() { return scale_pow2(Rational(1), -40); }

// ---------------------------------------------------------------- blocks

/// Sorts and merges blocks into disjoint supports. Where supports overlap the
/// finest grid wins (grids 2^{-e}Z are nested, so that is the union).
inline std::vector<Block> normalize_blocks(const std::vector<Block>& in) {
  std::vector<Rational> cuts;
  bool any_infinite = false;
  for (const auto& b : in) {
    if (b.hi && *b.hi <= b.lo) continue;
    cuts.push_back(b.lo);
    if (b.hi)
      cuts.push_back(*b.hi);
    else
      any_infinite = true;
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Block> out;
  auto covering_exp = [&](const Rational& a, const std::optional<Rational>& b) {
    std::optional<std::int64_t> e;
    for (const auto& blk : in) {
      if (blk.hi && *blk.hi <= blk.lo) continue;
      bool starts = blk.lo <= a;
      bool ends = !blk.hi || (b && *b <= *blk.hi);
      if (starts && ends && (!e || blk.exp > *e)) e = blk.exp;
    }
    return e;
  };
  auto push = [&](std::int64_t e, const Rational& a, const std::optional<Rational>& b) {
    if (!out.empty() && out.back().exp == e && out.back().hi && *out.back().hi == a) {
      out.back().hi = b;
      return;
    }
    out.push_back(Block{e, a, b});
  };
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (auto e = covering_exp(cuts[i], cuts[i + 1])) push(*e, cuts[i], cuts[i + 1]);
  }
  if (any_infinite && !cuts.empty()) {
    if (auto e = covering_exp(cuts.back(), std::nullopt)) push(*e, cuts.back(), std::nullopt);
  }
  return out;
}

inline std::vector<Block> clip_blocks(const std::vector<Block>& blocks, const Rational& lo,
                                      const Rational& hi) {
  std::vector<Block> out;
  for (const auto& b : blocks) {
    Rational l = b.lo > lo ? b.lo : lo;
    Rational h = hi;
    if (b.hi && *b.hi < h) h = *b.hi;
    if (l < h) out.push_back(Block{b.exp, l, h});
  }
  return out;
}

inline std::vector<Block> blocks_meeting(const LambdaSpec::DyadicBlocks& db, const Rational& lo,
                                         const Rational& hi) {
  if (db.rule) return db.rule->blocks_meeting(lo, hi);
  std::vector<Block> out;
  auto it = std::partition_point(db.blocks.begin(), db.blocks.end(),
                                 [&](const Block& b) { return b.hi && *b.hi <= lo; });
  for (; it != db.blocks.end() && it->lo < hi; ++it) out.push_back(*it);
  return out;
}

// ---------------------------------------------------------------- builders

inline LambdaSpec make_spec(LambdaSpec::Variant v, bool exact, Rational tau) {
  return LambdaSpec(std::make_shared<detail::Node>(detail::Node{std::move(v), exact, std::move(tau)}));
}

inline LambdaSpec empty_set() { return LambdaSpec(); }

inline LambdaSpec dyadic_blocks(const std::vector<Block>& blocks) {
  return make_spec(LambdaSpec::DyadicBlocks{normalize_blocks(blocks), nullptr}, true, Rational(0));
}

inline LambdaSpec dyadic_blocks(std::shared_ptr<const BlockRule> rule) {
  return make_spec(LambdaSpec::DyadicBlocks{{}, std::move(rule)}, true, Rational(0));
}

/// Exact finite set; duplicates removed.
inline LambdaSpec explicit_set(std::vector<Dyadic> values, std::string label = {}) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return make_spec(LambdaSpec::ExplicitReals{std::move(values), true, Rational(0), std::move(label)},
                   true, Rational(0));
}

/// Floating-point values: sorted, and values within tau of the last kept
/// value are merged into it.
inline LambdaSpec explicit_reals(const std::vector<double>& xs, Rational tau = default_tau(),
                                 std::string label = {}) {
  std::vector<Dyadic> v;
  v.reserve(xs.size());
  for (double x : xs) v.push_back(Dyadic::from_double(x));
  std::sort(v.begin(), v.end());
  std::vector<Dyadic> merged;
  for (auto& d : v) {
    if (!merged.empty() && compare(d - merged.back(), tau) <= 0) continue;
    merged.push_back(std::move(d));
  }
  return make_spec(LambdaSpec::ExplicitReals{std::move(merged), false, tau, std::move(label)},
                   false, tau);
}

inline Rational combined_tau(const LambdaSpec& a, const LambdaSpec& b) {
  return a.tau() > b.tau() ? a.tau() : b.tau();
}

inline LambdaSpec union_of(const LambdaSpec& a, const LambdaSpec& b) {
  return make_spec(LambdaSpec::Union{a.node(), b.node()}, a.exact() && b.exact(), combined_tau(a, b));
}

/// Lazy Minkowski sum {x + y}.
inline LambdaSpec minkowski(const LambdaSpec& a, const LambdaSpec& b) {
  return make_spec(LambdaSpec::Minkowski{a.node(), b.node()}, a.exact() && b.exact(),
                   combined_tau(a, b));
}

inline LambdaSpec thin(const LambdaSpec& base, double p, std::uint64_t seed) {
  if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("thinning probability must lie in (0, 1]");
  return make_spec(LambdaSpec::Thinned{base.node(), p, seed}, base.exact(), base.tau());
}

/// {scale * x + shift}. Exact iff base is exact and both parameters are dyadic.
inline LambdaSpec affine(const LambdaSpec& base, const Rational& scale, const Rational& shift) {
  if (sgn(scale) <= 0) throw InvalidArgument("affine scale must be positive");
  const bool dyadic = Dyadic::from_rational(scale) && Dyadic::from_rational(shift);
  const bool exact = base.exact() && dyadic;
  Rational tau = base.tau() * scale;
  if (!exact && tau < default_tau()) tau = default_tau();
  return make_spec(LambdaSpec::Affine{base.node(), scale, shift}, exact, tau);
}

// ---------------------------------------------------------------- queries

inline LambdaSpec wrap(const std::shared_ptr<const detail::Node>& n) { return LambdaSpec(n); }

inline std::optional<Rational> lower_bound(const LambdaSpec& s) {
  return std::visit(
      [&](const auto& v) -> std::optional<Rational> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LambdaSpec::DyadicBlocks>) {
          if (v.rule) return v.rule->lower_bound();
          if (v.blocks.empty()) return std::nullopt;
          return v.blocks.front().lo;
        } else if constexpr (std::is_same_v<T, LambdaSpec::ExplicitReals>) {
          if (v.values.empty()) return std::nullopt;
          return v.values.front().to_rational();
        } else if constexpr (std::is_same_v<T, LambdaSpec::Union>) {
          auto a = lower_bound(wrap(v.left));
          auto b = lower_bound(wrap(v.right));
          if (!a) return b;
          if (!b) return a;
          return *a < *b ? *a : *b;
        } else if constexpr (std::is_same_v<T, LambdaSpec::Minkowski>) {
          auto a = lower_bound(wrap(v.left));
          auto b = lower_bound(wrap(v.right));
          if (!a || !b) return std::nullopt;
          return Rational(*a + *b);
        } else if constexpr (std::is_same_v<T, LambdaSpec::Thinned>) {
          return lower_bound(wrap(v.base));
        } else {
          auto a = lower_bound(wrap(v.base));
          if (!a) return std::nullopt;
          return Rational(*a * v.scale + v.shift);
        }
      },
      s.variant());
}

/// Block description of the set restricted to [lo, hi), when one exists.
inline std::optional<std::vector<Block>> blocks_in(const LambdaSpec& s, const Rational& lo,
                                                   const Rational& hi) {
  if (hi <= lo) return std::vector<Block>{};
  if (const auto* db = s.as<LambdaSpec::DyadicBlocks>()) return clip_blocks(blocks_meeting(*db, lo, hi), lo, hi);
  if (const auto* u = s.as<LambdaSpec::Union>()) {
    auto a = blocks_in(wrap(u->left), lo, hi);
    if (!a) return std::nullopt;
    auto b = blocks_in(wrap(u->right), lo, hi);
    if (!b) return std::nullopt;
    a->insert(a->end(), b->begin(), b->end());
    return normalize_blocks(*a);
  }
  if (const auto* af = s.as<LambdaSpec::Affine>()) {
    auto sd = Dyadic::from_rational(af->scale);
    if (!sd || sd->num() != 1) return std::nullopt;  // scale must be 2^s
    const std::int64_t s_exp = -sd->exp();
    auto base = blocks_in(wrap(af->base), (lo - af->shift) / af->scale, (hi - af->shift) / af->scale);
    if (!base) return std::nullopt;
    std::vector<Block> out;
    for (const auto& b : *base) {
      const std::int64_t e = b.exp - s_exp;
      if (scale_pow2(af->shift, e).get_den() != 1) return std::nullopt;
      std::optional<Rational> h;
      if (b.hi) h = *b.hi * af->scale + af->shift;
      out.push_back(Block{e, b.lo * af->scale + af->shift, h});
    }
    return normalize_blocks(out);
  }
  return std::nullopt;
}

inline std::vector<Dyadic> enumerate(const LambdaSpec& s, const Window& w, const EnumOptions& opt = {});

inline void check_cap(const Integer& n, const EnumOptions& opt) {
  if (n > from_uint64(opt.cap))
    throw WindowTooLarge("enumeration would produce " + n.get_str() + " elements (cap " +
                         std::to_string(opt.cap) + ")");
}

/// #(Λ ∩ [lo, hi)), exact. Analytic for block sets and their affine images;
/// otherwise counts an enumeration (subject to the cap).
inline Integer count(const LambdaSpec& s, const Rational& lo, const Rational& hi,
                     const EnumOptions& opt = {}) {
  if (hi <= lo) return 0;
  if (const auto* db = s.as<LambdaSpec::DyadicBlocks>()) {
    Integer n = 0;
    for (const auto& b : blocks_meeting(*db, lo, hi)) n += b.count_in(lo, hi);
    return n;
  }
  if (const auto* ex = s.as<LambdaSpec::ExplicitReals>()) {
    auto first = std::partition_point(ex->values.begin(), ex->values.end(),
                                      [&](const Dyadic& d) { return compare(d, lo) < 0; });
    auto last = std::partition_point(first, ex->values.end(),
                                     [&](const Dyadic& d) { return compare(d, hi) < 0; });
    return Integer(static_cast<unsigned long>(last - first));
  }
  if (const auto* af = s.as<LambdaSpec::Affine>()) {
    return count(wrap(af->base), (lo - af->shift) / af->scale, (hi - af->shift) / af->scale, opt);
  }
  if (s.as<LambdaSpec::Union>()) {
    if (auto bl = blocks_in(s, lo, hi)) {
      Integer n = 0;
      for (const auto& b : *bl) n += b.count_in(lo, hi);
      return n;
    }
  }
  return Integer(static_cast<unsigned long>(enumerate(s, Window(lo, hi), opt).size()));
}

/// True when count() answers without enumerating on this window.
inline bool counts_analytically(const LambdaSpec& s, const Window& w) {
  if (s.as<LambdaSpec::DyadicBlocks>() || s.as<LambdaSpec::ExplicitReals>()) return true;
  if (const auto* af = s.as<LambdaSpec::Affine>())
    return counts_analytically(wrap(af->base), Window((w.lo - af->shift) / af->scale,
                                                      (w.hi - af->shift) / af->scale));
  if (s.as<LambdaSpec::Union>()) return blocks_in(s, w.lo, w.hi).has_value();
  return false;
}

namespace detail {

inline void enumerate_block(const Block& b, const Rational& lo, const Rational& hi,
                            std::vector<Dyadic>& out) {
  Rational l = b.lo > lo ? b.lo : lo;
  Rational h = hi;
  if (b.hi && *b.hi < h) h = *b.hi;
  if (h <= l) return;
  Integer j = b.index_at(l);
  const Integer end = b.index_at(h);
  for (; j < end; ++j) out.emplace_back(j, b.exp);
}

inline std::vector<Dyadic> merge_sorted(const std::vector<Dyadic>& a, const std::vector<Dyadic>& b,
                                        const Rational& tau) {
  std::vector<Dyadic> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  std::vector<Dyadic> merged;
  merged.reserve(out.size());
  for (auto& d : out) {
    if (!merged.empty()) {
      if (d == merged.back()) continue;
      if (sgn(tau) > 0 && compare(d - merged.back(), tau) <= 0) continue;
    }
    merged.push_back(std::move(d));
  }
  return merged;
}

}  // namespace detail

/// Ascending, duplicate-free Λ ∩ w.
inline std::vector<Dyadic> enumerate(const LambdaSpec& s, const Window& w, const EnumOptions& opt) {
  std::vector<Dyadic> out;
  if (w.empty()) return out;
  if (const auto* db = s.as<LambdaSpec::DyadicBlocks>()) {
    const auto blocks = blocks_meeting(*db, w.lo, w.hi);
    Integer total = 0;
    for (const auto& b : blocks) total += b.count_in(w.lo, w.hi);
    check_cap(total, opt);
    out.reserve(static_cast<std::size_t>(total.get_ui()));
    for (const auto& b : blocks) detail::enumerate_block(b, w.lo, w.hi, out);
    return out;
  }
  if (const auto* ex = s.as<LambdaSpec::ExplicitReals>()) {
    auto first = std::partition_point(ex->values.begin(), ex->values.end(),
                                      [&](const Dyadic& d) { return compare(d, w.lo) < 0; });
    auto last = std::partition_point(first, ex->values.end(),
                                     [&](const Dyadic& d) { return compare(d, w.hi) < 0; });
    check_cap(Integer(static_cast<unsigned long>(last - first)), opt);
    out.assign(first, last);
    return out;
  }
  if (const auto* u = s.as<LambdaSpec::Union>()) {
    auto a = enumerate(wrap(u->left), w, opt);
    auto b = enumerate(wrap(u->right), w, opt);
    out = detail::merge_sorted(a, b, s.exact() ? Rational(0) : s.tau());
    check_cap(Integer(static_cast<unsigned long>(out.size())), opt);
    return out;
  }
  if (const auto* m = s.as<LambdaSpec::Minkowski>()) {
    const LambdaSpec A = wrap(m->left), B = wrap(m->right);
    auto la = lower_bound(A), lb = lower_bound(B);
    if (!la || !lb) return out;
    auto xs = enumerate(A, Window(*la, std::max(*la, Rational(w.hi - *lb))), opt);
    auto ys = enumerate(B, Window(*lb, std::max(*lb, Rational(w.hi - *la))), opt);
    std::vector<Rational> ys_q;
    ys_q.reserve(ys.size());
    for (const auto& y : ys) ys_q.push_back(y.to_rational());
    for (const auto& x : xs) {
      const Rational xq = x.to_rational();
      const Rational from = w.lo - xq, to = w.hi - xq;
      auto first = std::lower_bound(ys_q.begin(), ys_q.end(), from);
      auto last = std::lower_bound(first, ys_q.end(), to);
      for (auto it = first; it != last; ++it) {
        out.push_back(x + ys[static_cast<std::size_t>(it - ys_q.begin())]);
        if (out.size() > opt.cap) check_cap(Integer(static_cast<unsigned long>(out.size())), opt);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (!s.exact()) out = detail::merge_sorted(out, {}, s.tau());
    return out;
  }
  if (const auto* t = s.as<LambdaSpec::Thinned>()) {
    auto base = enumerate(wrap(t->base), w, opt);
    for (auto& d : base)
      if (thinning_keeps(t->seed, t->p, d)) out.push_back(std::move(d));
    return out;
  }
  const auto& af = std::get<LambdaSpec::Affine>(s.variant());
  auto base = enumerate(wrap(af.base),
                        Window((w.lo - af.shift) / af.scale, (w.hi - af.shift) / af.scale), opt);
  const auto sd = Dyadic::from_rational(af.scale);
  const auto td = Dyadic::from_rational(af.shift);
  out.reserve(base.size());
  for (const auto& d : base) {
    if (sd && td) {
      out.push_back(d * *sd + *td);
    } else {
      Rational q = d.to_rational() * af.scale + af.shift;
      out.push_back(Dyadic::from_double(q.get_d()));
    }
  }
  if (!(sd && td)) out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Cell counts a_n = #(Λ ∩ [nε, (n+1)ε)) for every cell meeting a window.
struct CountVector {
  Rational eps;
  Integer offset;  // index of the first cell
  std::vector<Integer> counts;

  Integer first() const { return offset; }
  Integer last() const { return offset + static_cast<unsigned long>(counts.size()) - 1; }
  bool has(const Integer& n) const { return !counts.empty() && n >= first() && n <= last(); }
  /// a_n, 0 outside the computed range.
  Integer at(const Integer& n) const {
    if (!has(n)) return 0;
    return counts[static_cast<std::size_t>(Integer(n - offset).get_ui())];
  }
};

inline CountVector count_cells(const LambdaSpec& s, const Rational& eps, const Window& w,
                               const EnumOptions& opt = {}) {
  if (sgn(eps) <= 0) throw InvalidArgument("cell width must be positive");
  CountVector cv;
  cv.eps = eps;
  if (w.empty()) {
    cv.offset = floor_of(w.lo / eps);
    return cv;
  }
  const Integer n0 = floor_of(w.lo / eps);
  const Integer n1 = ceil_of(w.hi / eps);  // one past the last cell
  const Integer cells = n1 - n0;
  if (cells > 10'000'000) throw WindowTooLarge("too many cells: " + cells.get_str());
  cv.offset = n0;
  const Window full(Rational(n0) * eps, Rational(n1) * eps);
  const auto ncells = static_cast<std::size_t>(cells.get_ui());
  cv.counts.assign(ncells, Integer(0));
  if (counts_analytically(s, full)) {
    if (auto bl = blocks_in(s, full.lo, full.hi)) {
      // Walk the cells and the blocks together.
      std::size_t bi = 0;
      for (std::size_t i = 0; i < ncells; ++i) {
        const Rational a = Rational(n0 + static_cast<unsigned long>(i)) * eps;
        const Rational b = a + eps;
        while (bi < bl->size() && (*bl)[bi].hi && *(*bl)[bi].hi <= a) ++bi;
        for (std::size_t j = bi; j < bl->size() && (*bl)[j].lo < b; ++j)
          cv.counts[i] += (*bl)[j].count_in(a, b);
      }
    } else {
      for (std::size_t i = 0; i < ncells; ++i) {
        const Rational a = Rational(n0 + static_cast<unsigned long>(i)) * eps;
        cv.counts[i] = count(s, a, a + eps, opt);
      }
    }
    return cv;
  }
  for (const auto& d : enumerate(s, full, opt)) {
    const Integer n = floor_of(d.to_rational() / eps);
    cv.counts[static_cast<std::size_t>(Integer(n - n0).get_ui())] += 1;
  }
  return cv;
}

/// Λ_a ∩ w ⊆ Λ_b, decided on block structure when both sides have one.
inline bool subset_on(const LambdaSpec& a, const LambdaSpec& b, const Window& w,
                      const EnumOptions& opt = {}) {
  if (w.empty()) return true;
  auto ba = blocks_in(a, w.lo, w.hi);
  auto bb = blocks_in(b, w.lo, w.hi);
  if (ba && bb) {
    for (const auto& x : *ba) {
      const Rational xl = x.lo;
      const Rational xh = x.hi ? *x.hi : w.hi;
      Rational covered_to = xl;
      for (const auto& y : *bb) {
        const Rational yh = y.hi ? *y.hi : w.hi;
        if (yh <= xl || y.lo >= xh) continue;
        // gap before this piece of b
        if (y.lo > covered_to && x.count_in(covered_to, y.lo) != 0) return false;
        const Rational l = y.lo > xl ? y.lo : xl;
        const Rational h = yh < xh ? yh : xh;
        if (y.exp < x.exp) {
          Block coarse{y.exp, l, h};
          if (coarse.count_in(l, h) != x.count_in(l, h)) return false;
        }
        if (h > covered_to) covered_to = h;
      }
      if (covered_to < xh && x.count_in(covered_to, xh) != 0) return false;
    }
    return true;
  }
  auto xs = enumerate(a, w, opt);
  auto ys = enumerate(b, w, opt);
  return std::includes(ys.begin(), ys.end(), xs.begin(), xs.end());
}

inline bool equal_on(const LambdaSpec& a, const LambdaSpec& b, const Window& w,
                     const EnumOptions& opt = {}) {
  return subset_on(a, b, w, opt) && subset_on(b, a, w, opt);
}

/// Minkowski sum materialized on a window as an explicit finite set.
inline LambdaSpec minkowski_sum(const LambdaSpec& a, const LambdaSpec& b, const Window& w,
                                const EnumOptions& opt = {}) {
  auto pts = enumerate(minkowski(a, b), w, opt);
  if (a.exact() && b.exact()) return explicit_set(std::move(pts), "minkowski");
  auto tau = combined_tau(a, b);
  return make_spec(LambdaSpec::ExplicitReals{std::move(pts), false, tau, "minkowski"}, false, tau);
}

}  // namespace zolab
