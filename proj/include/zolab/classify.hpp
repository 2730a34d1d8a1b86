#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/block_rules.hpp"
#include "zolab/catalog.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/lambda.hpp"

namespace zolab {

enum class VerdictKind { Type1, Type2, Evidence, Inconclusive };

inline std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Type1: return "Type1";
    case VerdictKind::Type2: return "Type2";
    case VerdictKind::Evidence: return "Evidence(Type2)";
    case VerdictKind::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string criterion;
  nlohmann::json params = nlohmann::json::object();
  nlohmann::json witness = nlohmann::json::object();
  std::string note;

  nlohmann::json to_json() const {
    nlohmann::json j = {{"criterion", criterion}, {"verdict", to_string(kind)}, {"params", params},
                        {"witness", witness}};
    if (!note.empty()) j["note"] = note;
    return j;
  }
};

inline nlohmann::json integers_json(const std::vector<Integer>& xs) {
  auto a = nlohmann::json::array();
  for (const auto& x : xs) a.push_back(x.get_str());
  return a;
}

inline nlohmann::json to_json(const CountVector& cv) {
  return {{"eps", cv.eps.get_str()}, {"offset", cv.offset.get_str()}, {"counts", integers_json(cv.counts)}};
}

/// Indices m_1 < m_2 < ... on the ε/3 grid with
/// a'_{m_k} / (a'_{m_k-3} + a'_{m_k-2} + a'_{m_k-1}) >= 2^k and m_{k+1} - m_k >= 2.
struct RatioChain {
  Rational eps_prime;
  std::vector<Integer> indices;
  std::vector<Integer> numerators;    // a'_{m_k}
  std::vector<Integer> denominators;  // a'_{m_k-3} + a'_{m_k-2} + a'_{m_k-1}

  std::size_t size() const { return indices.size(); }

  nlohmann::json to_json() const {
    return {{"eps_prime", eps_prime.get_str()},
            {"indices", integers_json(indices)},
            {"numerators", integers_json(numerators)},
            {"denominators", integers_json(denominators)}};
  }
};

namespace classify {

inline void require_exact(const LambdaSpec& s, const std::string& what) {
  if (!s.exact()) throw InexactSpec(what + " needs an exact spec");
}

// ------------------------------------------------------------ family rules

/// Decides the type of a dyadic family from the symbolic growth of m_k:
/// bounded exponent gaps give type 1, unbounded gaps type 2.
inline Verdict mk_type(const FamilyRule& rule) {
  Verdict v;
  v.criterion = "mk_type";
  v.params = rule.to_json();
  if (rule.last_index()) {
    v.kind = VerdictKind::Inconclusive;
    v.note = "finitely many blocks; the criterion concerns infinite families";
    return v;
  }
  const auto gaps = rule.m().gap_sup(rule.k0());
  switch (gaps.kind) {
    case IntRule::GapClass::Bounded:
      v.kind = VerdictKind::Type1;
      v.witness = {{"M", gaps.sup ? gaps.sup->get_str() : "finite"}};
      break;
    case IntRule::GapClass::Unbounded:
      v.kind = VerdictKind::Type2;
      v.witness = {{"M", "infinity"}, {"m_rule", rule.m().describe()}};
      break;
    case IntRule::GapClass::Unknown:
      v.kind = VerdictKind::Inconclusive;
      if (gaps.sup) v.witness = {{"prefix_max_gap", gaps.sup->get_str()}};
      v.note = "limsup of gaps is undecidable from a finite prefix";
      break;
  }
  return v;
}

inline Verdict mk_type(const CatalogEntry& e) {
  if (!e.family) throw UnsupportedRule(e.name + " is not a dyadic family");
  return mk_type(*e.family);
}

// ------------------------------------------------------------ ratio chains

inline Integer sum_prev3(const CountVector& cv, const Integer& m) {
  return cv.at(m - 3) + cv.at(m - 2) + cv.at(m - 1);
}

/// a/b with 0/0 = 0 and c/0 = ∞, compared against 2^k.
inline bool ratio_at_least_pow2(const Integer& num, const Integer& den, std::int64_t k) {
  if (sgn(den) == 0) return sgn(num) > 0;
  Integer rhs = den;
  mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
  return num >= rhs;
}

/// Greedy leftmost chain; since the thresholds grow with k, the earliest
/// admissible choice at every step yields a longest chain.
inline RatioChain extract_chain(const CountVector& cv, std::size_t max_len = 64) {
  RatioChain ch;
  ch.eps_prime = cv.eps;
  if (cv.counts.empty()) return ch;
  std::optional<Integer> first_pos;
  for (std::size_t i = 0; i < cv.counts.size(); ++i)
    if (sgn(cv.counts[i]) > 0) {
      first_pos = cv.offset + static_cast<unsigned long>(i);
      break;
    }
  if (!first_pos) return ch;
  Integer start = cv.first() + 3;
  if (*first_pos + 3 > start) start = *first_pos + 3;
  std::optional<Integer> last;
  for (Integer m = start; m <= cv.last() && ch.size() < max_len; ++m) {
    if (last && m - *last < 2) continue;
    const Integer num = cv.at(m);
    const Integer den = sum_prev3(cv, m);
    if (ratio_at_least_pow2(num, den, static_cast<std::int64_t>(ch.size()) + 1)) {
      ch.indices.push_back(m);
      ch.numerators.push_back(num);
      ch.denominators.push_back(den);
      last = m;
    }
  }
  return ch;
}

/// Re-checks the chain inequalities against a count vector.
inline bool chain_valid(const RatioChain& ch, const CountVector& cv) {
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const Integer& m = ch.indices[k];
    if (!cv.has(m) || !cv.has(m - 3)) return false;
    if (cv.at(m) != ch.numerators[k] || sum_prev3(cv, m) != ch.denominators[k]) return false;
    if (sgn(ch.numerators[k]) <= 0) return false;
    if (!ratio_at_least_pow2(ch.numerators[k], ch.denominators[k], static_cast<std::int64_t>(k) + 1))
      return false;
    if (k > 0 && m - ch.indices[k - 1] < 2) return false;
  }
  return true;
}

struct RatioTestResult {
  Verdict verdict;
  RatioChain chain;
  CountVector cells;  // a'_n on the ε/3 grid
};

inline RatioTestResult count_ratio_test(const LambdaSpec& s, const Rational& eps, const Window& horizon,
                                        std::int64_t depth, const EnumOptions& opt = {}) {
  require_exact(s, "count_ratio_test");
  if (sgn(eps) <= 0) throw InvalidArgument("eps must be positive");
  if (depth < 0 || depth > 64) throw InvalidArgument("depth must lie in [0, 64]");
  RatioTestResult r;
  r.cells = count_cells(s, eps / 3, horizon, opt);
  r.chain = extract_chain(r.cells);
  auto& v = r.verdict;
  v.criterion = "count_ratio";
  v.params = {{"eps", eps.get_str()},
              {"eps_prime", r.chain.eps_prime.get_str()},
              {"horizon", {horizon.lo.get_str(), horizon.hi.get_str()}},
              {"depth", depth}};
  v.witness = {{"chain", r.chain.to_json()}, {"cells", to_json(r.cells)}};
  v.witness["chain_length"] = r.chain.size();
  const bool enough = depth > 0 && static_cast<std::int64_t>(r.chain.size()) >= depth;
  v.kind = enough ? VerdictKind::Evidence : VerdictKind::Inconclusive;
  v.note = enough ? "chain of the requested depth found within the horizon"
                  : "no chain of the requested depth within the horizon";
  return r;
}

/// Upper bound on a_n / a_{n-1} forced by a'_n / (a'_{n-3} + a'_{n-2} + a'_{n-1}) < c.
inline Rational coarse_ratio_bound(const Rational& c) {
  return c + (c + 1) * c + (c + 1) * c * (2 + c);
}

/// max_n a_n / a_{n-1} over the cells, with c/0 = ∞ reported as nullopt.
struct CoarseRatio {
  std::optional<Rational> max_finite;
  bool infinite = false;
};

inline CoarseRatio max_coarse_ratio(const CountVector& cv, const Integer& from) {
  CoarseRatio r;
  for (Integer n = std::max(from, Integer(cv.first() + 1)); n <= cv.last(); ++n) {
    const Integer a = cv.at(n), b = cv.at(n - 1);
    if (sgn(b) == 0) {
      if (sgn(a) > 0) r.infinite = true;
      continue;
    }
    Rational q = make_rational(a, b);
    if (!r.max_finite || q > *r.max_finite) r.max_finite = q;
  }
  return r;
}

// ------------------------------------------------------------ growth

struct GrowthRow {
  Rational c;
  double log10_max = -std::numeric_limits<double>::infinity();
  std::optional<Integer> argmax;
};

inline Verdict growth_test(const LambdaSpec& s, const Rational& eps, const Window& horizon,
                           const std::vector<Rational>& cs, double threshold = 1e6,
                           const EnumOptions& opt = {}) {
  require_exact(s, "growth_test");
  if (cs.empty()) throw InvalidArgument("growth_test needs at least one c");
  const auto cv = count_cells(s, eps, horizon, opt);
  Verdict v;
  v.criterion = "growth";
  v.params = {{"eps", eps.get_str()},
              {"horizon", {horizon.lo.get_str(), horizon.hi.get_str()}},
              {"threshold", threshold}};
  auto rows = nlohmann::json::array();
  bool all_exceed = true;
  const double log_thr = std::log10(threshold);
  for (const auto& c : cs) {
    if (sgn(c) <= 0) throw InvalidArgument("growth_test needs positive c");
    GrowthRow row{c, -std::numeric_limits<double>::infinity(), std::nullopt};
    const double lc = log_of(c) / std::log(10.0);
    for (std::size_t i = 0; i < cv.counts.size(); ++i) {
      const Integer n = cv.offset + static_cast<unsigned long>(i);
      if (n < 1 || sgn(cv.counts[i]) == 0) continue;
      const double val = log_of(cv.counts[i]) / std::log(10.0) - n.get_d() * lc;
      if (val > row.log10_max) {
        row.log10_max = val;
        row.argmax = n;
      }
    }
    if (!(row.log10_max > log_thr)) all_exceed = false;
    nlohmann::json jr = {{"c", c.get_str()}};
    if (row.argmax) {
      jr["log10_max_ratio"] = row.log10_max;
      jr["argmax_n"] = row.argmax->get_str();
    } else {
      jr["log10_max_ratio"] = nullptr;
    }
    rows.push_back(jr);
  }
  v.witness = {{"rows", rows}};
  v.kind = all_exceed ? VerdictKind::Evidence : VerdictKind::Inconclusive;
  v.note = all_exceed ? "a_n / c^n exceeds the threshold for every c; every superset is type 2 as well"
                      : "a_n / c^n stays below the threshold for some c";
  return v;
}

// ------------------------------------------------------------ lacunarity

struct LacunarityReport {
  bool dense = false;          // dense evidence (otherwise lacunary evidence)
  bool decreasing_gaps = false;  // whole gap sequence non-increasing
  std::vector<Rational> window_sup;  // sup of gaps meeting each sub-window
  std::size_t elements = 0;

  nlohmann::json to_json() const {
    auto sups = nlohmann::json::array();
    for (const auto& q : window_sup) sups.push_back(to_double(q));
    return {{"verdict", dense ? "dense-evidence" : "lacunary-evidence"},
            {"decreasing_gaps", decreasing_gaps},
            {"window_sup_gaps", sups},
            {"elements", elements}};
  }
};

/// Splits the horizon into `parts` sub-windows and records the largest gap
/// touching each one. Dense evidence: those maxima never increase and the
/// last is at most half the first.
inline LacunarityReport lacunarity_test(const LambdaSpec& s, const Window& horizon, int parts = 8,
                                        const EnumOptions& opt = {}) {
  if (parts < 2) throw InvalidArgument("lacunarity_test needs at least 2 sub-windows");
  LacunarityReport rep;
  const auto pts = enumerate(s, horizon, opt);
  rep.elements = pts.size();
  if (pts.size() < 2) return rep;
  std::vector<Rational> q;
  q.reserve(pts.size());
  for (const auto& d : pts) q.push_back(d.to_rational());
  const Rational width = (horizon.hi - horizon.lo) / parts;
  rep.window_sup.assign(static_cast<std::size_t>(parts), Rational(0));
  rep.decreasing_gaps = true;
  std::optional<Rational> prev_gap;
  for (std::size_t i = 1; i < q.size(); ++i) {
    const Rational g = q[i] - q[i - 1];
    if (prev_gap && g > *prev_gap) rep.decreasing_gaps = false;
    prev_gap = g;
    // sub-windows met by [q[i-1], q[i]]
    Integer a = floor_of((q[i - 1] - horizon.lo) / width);
    Integer b = floor_of((q[i] - horizon.lo) / width);
    for (Integer w = a; w <= b && w < parts; ++w) {
      auto& slot = rep.window_sup[static_cast<std::size_t>(w.get_si())];
      if (g > slot) slot = g;
    }
  }
  // A trailing stretch with no element is a gap of at least its length.
  const Rational tail = horizon.hi - q.back();
  for (Integer w = floor_of((q.back() - horizon.lo) / width); w < parts; ++w) {
    auto& slot = rep.window_sup[static_cast<std::size_t>(w.get_si())];
    if (tail > slot) slot = tail;
  }
  bool monotone = true;
  for (std::size_t i = 1; i < rep.window_sup.size(); ++i)
    if (rep.window_sup[i] > rep.window_sup[i - 1]) monotone = false;
  rep.dense = monotone && rep.window_sup.back() * 2 <= rep.window_sup.front();
  return rep;
}

inline Verdict lacunarity_verdict(const LambdaSpec& s, const Window& horizon, const EnumOptions& opt = {}) {
  auto rep = lacunarity_test(s, horizon, 8, opt);
  Verdict v;
  v.criterion = "lacunarity";
  v.params = {{"horizon", {horizon.lo.get_str(), horizon.hi.get_str()}}, {"parts", 8}};
  v.witness = rep.to_json();
  if (rep.dense) {
    v.kind = VerdictKind::Inconclusive;
    v.note = "gaps shrink along the horizon: asymptotically dense evidence";
  } else {
    v.kind = VerdictKind::Evidence;
    v.note = "gaps do not shrink: asymptotically lacunary evidence; lacunary sets are type 2";
  }
  return v;
}

// ------------------------------------------------------------ speed

struct SpeedReport {
  std::vector<Integer> ns;
  std::vector<Rational> ratios;  // #(Λ ∩ [0, n)) / n
  bool growing = false;
};

inline SpeedReport speed_test(const LambdaSpec& s, const Window& horizon, const EnumOptions& opt = {}) {
  SpeedReport rep;
  Integer n = ceil_of(horizon.lo);
  if (n < 1) n = 1;
  const Integer last = floor_of(horizon.hi);
  if (last - n > 100000) throw WindowTooLarge("speed_test horizon too long");
  for (; n <= last; ++n) {
    rep.ns.push_back(n);
    rep.ratios.push_back(Rational(count(s, Rational(0), Rational(n), opt)) / Rational(n));
  }
  if (rep.ratios.size() < 2) return rep;
  const std::size_t half = rep.ratios.size() / 2;
  const auto max_all = *std::max_element(rep.ratios.begin(), rep.ratios.end());
  const auto max_half = *std::max_element(rep.ratios.begin(), rep.ratios.begin() + static_cast<long>(half));
  rep.growing = max_all >= 2 * max_half && sgn(max_all) > 0;
  return rep;
}

inline Verdict speed_verdict(const LambdaSpec& s, const Window& horizon, const EnumOptions& opt = {}) {
  auto rep = speed_test(s, horizon, opt);
  Verdict v;
  v.criterion = "speed";
  v.params = {{"horizon", {horizon.lo.get_str(), horizon.hi.get_str()}}};
  double best = 0.0;
  std::string at;
  for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
    double r = to_double(rep.ratios[i]);
    if (r > best) {
      best = r;
      at = rep.ns[i].get_str();
    }
  }
  v.witness = {{"max_ratio", best}, {"argmax_n", at}, {"growing", rep.growing}};
  v.kind = rep.growing ? VerdictKind::Evidence : VerdictKind::Inconclusive;
  v.note = rep.growing ? "#(L cap [0,n))/n grows; implies type 2 for every superset only when the "
                         "elements are algebraically independent, which is not checked"
                       : "#(L cap [0,n))/n does not grow over the horizon";
  return v;
}

// ------------------------------------------------------------ translators

/// #(((Λ + t) \ Λ) ∩ w).
inline Integer translator_count(const LambdaSpec& s, const Rational& t, const Window& w,
                                const EnumOptions& opt = {}) {
  if (w.empty()) return 0;
  const auto shifted = enumerate(s, Window(w.lo - t, w.hi - t), opt);
  const auto here = enumerate(s, w, opt);
  const auto td = Dyadic::from_rational(t);
  Integer missing = 0;
  if (s.exact() && td) {
    for (const auto& x : shifted)
      if (!std::binary_search(here.begin(), here.end(), x + *td)) missing += 1;
    return missing;
  }
  std::vector<Rational> hq;
  hq.reserve(here.size());
  for (const auto& d : here) hq.push_back(d.to_rational());
  const Rational tau = s.tau();
  for (const auto& x : shifted) {
    const Rational y = x.to_rational() + t;
    auto it = std::lower_bound(hq.begin(), hq.end(), y - tau);
    if (!(it != hq.end() && *it <= y + tau)) missing += 1;
  }
  return missing;
}

struct TranslatorReport {
  std::vector<Rational> window_his;
  std::vector<Integer> counts;
  bool stable = false;  // count unchanged over the last doubling

  nlohmann::json to_json() const {
    auto his = nlohmann::json::array();
    for (const auto& h : window_his) his.push_back(h.get_str());
    return {{"window_his", his}, {"counts", integers_json(counts)},
            {"verdict", stable ? "finite-evidence" : "growing"}};
  }
};

/// Counts on nested windows [lo, lo + (hi-lo)/2^s), s = levels-1, ..., 0.
inline TranslatorReport translator_test(const LambdaSpec& s, const Rational& t, const Window& w,
                                        int levels = 4, const EnumOptions& opt = {}) {
  if (sgn(t) <= 0) throw InvalidArgument("translator needs t > 0");
  if (levels < 2) throw InvalidArgument("translator_test needs at least 2 nested windows");
  TranslatorReport rep;
  for (int sl = levels - 1; sl >= 0; --sl) {
    Rational hi = w.lo + scale_pow2(w.hi - w.lo, -sl);
    rep.window_his.push_back(hi);
    rep.counts.push_back(translator_count(s, t, Window(w.lo, hi), opt));
  }
  rep.stable = rep.counts.back() == rep.counts[rep.counts.size() - 2];
  return rep;
}

/// Condition (*) helper: translator reports for t = 1/2^k, k = 0..kmax.
inline std::vector<std::pair<Rational, TranslatorReport>> dyadic_translators(
    const LambdaSpec& s, const Window& w, int kmax, const EnumOptions& opt = {}) {
  std::vector<std::pair<Rational, TranslatorReport>> out;
  for (int k = 0; k <= kmax; ++k) {
    Rational t = scale_pow2(Rational(1), -k);
    out.emplace_back(t, translator_test(s, t, w, 4, opt));
  }
  return out;
}

// ------------------------------------------------------------ periodicity

/// Γ ∩ [a, b], both ends included.
inline std::vector<Dyadic> enumerate_closed(const LambdaSpec& s, const Rational& a, const Rational& b,
                                            const EnumOptions& opt = {}) {
  auto pts = enumerate(s, Window(a, b), opt);
  if (auto d = Dyadic::from_rational(b)) {
    auto end = enumerate(s, Window(b, b + 1), opt);
    if (!end.empty() && end.front() == *d) pts.push_back(*d);
  }
  return pts;
}

/// (Γ ∩ [n + (j-1)/2^i, n + j/2^i]) + 1/2^i == Γ ∩ [n + j/2^i, n + (j+1)/2^i]
/// for j = 1 .. 2^i - 1.
inline bool periodicity_test(const LambdaSpec& s, int i, const Integer& n, const EnumOptions& opt = {}) {
  if (!s.exact()) throw InexactSpec("periodicity_test needs an exact spec");
  if (i < 0 || i > 30) throw InvalidArgument("periodicity level out of range");
  const Dyadic step(Integer(1), i);
  const Rational h = step.to_rational();
  const auto pts = enumerate_closed(s, Rational(n), Rational(n) + 1, opt);
  std::vector<Rational> q;
  q.reserve(pts.size());
  for (const auto& d : pts) q.push_back(d.to_rational());
  auto slice = [&](const Rational& a, const Rational& b) {
    auto first = std::lower_bound(q.begin(), q.end(), a);
    auto last = std::upper_bound(first, q.end(), b);
    return std::vector<Rational>(first, last);
  };
  const long cells = 1L << i;
  for (long j = 1; j < cells; ++j) {
    const Rational a = Rational(n) + h * (j - 1);
    auto lower = slice(a, a + h);
    auto upper = slice(a + h, a + 2 * h);
    if (lower.size() != upper.size()) return false;
    for (std::size_t t = 0; t < lower.size(); ++t)
      if (lower[t] + h != upper[t]) return false;
  }
  return true;
}

}  // namespace classify
}  // namespace zolab
