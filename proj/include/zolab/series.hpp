#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/int_rule.hpp"
#include "zolab/witness.hpp"

namespace zolab::series {

/// 1 - (1 - q^{2^m})^gap, with its natural log so that terms below the
/// double range still carry full relative precision.
struct Term {
  double value = 0.0;
  double log_value = -std::numeric_limits<double>::infinity();
};

/// log(1 - e^L) for L < 0.
inline double log1mexp(double L) {
  return L > -0.6931471805599453 ? std::log(-std::expm1(L)) : std::log1p(-std::exp(L));
}

inline Term randt2_term(double q, std::int64_t m, const Integer& gap) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("q must lie in (0, 1)");
  if (sgn(gap) < 0) throw InvalidArgument("gap must be nonnegative");
  if (sgn(gap) == 0) return {};
  const double L = std::ldexp(std::log(q), static_cast<int>(std::min<std::int64_t>(m, 1 << 20)));
  if (!std::isfinite(L) || m >= (1 << 20))
    throw PrecisionOverflow("2^m log q is not finite for m = " + std::to_string(m) +
                            "; reduce m or evaluate the term symbolically");
  // T = gap * log(1 - q^{2^m}) <= 0; term = 1 - e^T.
  const double lg = log_of(gap);
  const double e = std::exp(L);
  double log_negT;  // log(-T)
  if (e == 0.0)
    log_negT = lg + L;  // -log(1 - e^L) = e^L (1 + O(e^L))
  else
    log_negT = lg + std::log(-log1mexp(L));
  Term t;
  const double negT = std::exp(log_negT);
  if (negT == 0.0) {
    t.log_value = log_negT;  // 1 - e^T = -T (1 + O(T))
    t.value = 0.0;
    return t;
  }
  t.value = -std::expm1(-negT);
  t.log_value = negT < 1e-8 ? log_negT + std::log1p(-negT / 2) : std::log(t.value);
  return t;
}

struct Randt2Report {
  std::vector<Term> terms;
  std::vector<double> partial_sums;
  bool tail_nonvanishing = false;  // last half of the terms all >= 1/2
  bool exceeds_bound = false;
  double bound = 1e3;

  bool divergence_evidence() const { return tail_nonvanishing || exceeds_bound; }

  nlohmann::json to_json() const {
    auto tv = nlohmann::json::array(), tl = nlohmann::json::array(), ps = nlohmann::json::array();
    for (const auto& t : terms) {
      tv.push_back(t.value);
      tl.push_back(std::isfinite(t.log_value) ? nlohmann::json(t.log_value) : nlohmann::json(nullptr));
    }
    for (double s : partial_sums) ps.push_back(s);
    return {{"terms", tv},
            {"log_terms", tl},
            {"partial_sums", ps},
            {"bound", bound},
            {"divergence_evidence", divergence_evidence()}};
  }
};

inline Randt2Report summarize_terms(std::vector<Term> terms, double bound) {
  Randt2Report r;
  r.bound = bound;
  r.terms = std::move(terms);
  double acc = 0.0;
  for (const auto& t : r.terms) {
    acc += t.value;
    r.partial_sums.push_back(acc);
  }
  r.exceeds_bound = acc > bound;
  if (!r.terms.empty()) {
    r.tail_nonvanishing = true;
    for (std::size_t i = r.terms.size() / 2; i < r.terms.size(); ++i)
      if (r.terms[i].value < 0.5) r.tail_nonvanishing = false;
  }
  return r;
}

/// Σ_k 1 - (1 - q^{2^{m_k}})^{n_{k+1} - n_k} for k = k0 .. k0 + K - 1.
inline Randt2Report randt2_series(const IntRule& m, const IntRule& n, double q, std::int64_t K,
                                  std::int64_t k0 = 1, double bound = 1e3) {
  if (!m.strictly_increasing_from(k0)) throw NotIncreasing("m_k is not strictly increasing");
  if (!n.strictly_increasing_from(k0)) throw NotIncreasing("n_k is not strictly increasing");
  std::vector<Term> terms;
  for (std::int64_t k = k0; k < k0 + K; ++k)
    terms.push_back(randt2_term(q, to_int64(m.at(k)), n.at(k + 1) - n.at(k)));
  return summarize_terms(std::move(terms), bound);
}

/// K identical terms for constant m and gap.
inline Randt2Report randt2_constant(double q, std::int64_t m, const Integer& gap, std::int64_t K,
                                    double bound = 1e3) {
  std::vector<Term> terms(static_cast<std::size_t>(std::max<std::int64_t>(K, 0)), randt2_term(q, m, gap));
  return summarize_terms(std::move(terms), bound);
}

// ------------------------------------------------------------ ∫ e^y g(y) dy

/// log(e^a + e^b)
inline long double log_add(long double a, long double b) {
  if (a == -std::numeric_limits<long double>::infinity()) return b;
  if (b == -std::numeric_limits<long double>::infinity()) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

/// log(v (e^b - e^a)) for a < b, v > 0.
inline long double log_piece(const Rational& v, const Rational& a, const Rational& b) {
  const long double la = static_cast<long double>(to_double(a));
  const long double lb = static_cast<long double>(to_double(b));
  return static_cast<long double>(log_of(v)) + lb + std::log(-std::expm1(la - lb));
}

struct IntegralReport {
  bool finite = true;
  long double log_value = -std::numeric_limits<long double>::infinity();
  std::vector<long double> log_partial_sums;

  double value() const { return static_cast<double>(std::exp(log_value)); }

  nlohmann::json to_json() const {
    auto ps = nlohmann::json::array();
    for (auto s : log_partial_sums) ps.push_back(static_cast<double>(s));
    return {{"finite", finite},
            {"log_value", std::isfinite(static_cast<double>(log_value)) ? nlohmann::json(static_cast<double>(log_value))
                                                                        : nlohmann::json(nullptr)},
            {"log_partial_sums", ps}};
  }
};

/// ∫_c^∞ e^y g(y) dy for a step function with finitely many pieces.
inline IntegralReport exp_integral(const StepFunction& g, const Rational& c) {
  IntegralReport r;
  for (const auto& p : g.pieces) {
    if (sgn(p.value) == 0) continue;
    const Rational a = p.a > c ? p.a : c;
    if (!(a < p.b)) continue;
    r.log_value = log_add(r.log_value, log_piece(p.value, a, p.b));
    r.log_partial_sums.push_back(r.log_value);
  }
  return r;
}

/// Same integral for an infinite family of pieces k -> piece(k), summed for
/// k = 1..kmax. Partial sums above `bound` count as divergence evidence.
inline IntegralReport exp_integral_family(const std::function<StepFunction::Piece(std::int64_t)>& piece,
                                          const Rational& c, std::int64_t kmax, double bound = 1e3) {
  IntegralReport r;
  const long double log_bound = std::log(static_cast<long double>(bound));
  for (std::int64_t k = 1; k <= kmax; ++k) {
    const auto p = piece(k);
    if (sgn(p.value) > 0) {
      const Rational a = p.a > c ? p.a : c;
      if (a < p.b) r.log_value = log_add(r.log_value, log_piece(p.value, a, p.b));
    }
    r.log_partial_sums.push_back(r.log_value);
  }
  r.finite = !(r.log_value > log_bound);
  return r;
}

}  // namespace zolab::series
