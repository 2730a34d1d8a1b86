#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"

namespace zolab {

/// Integer sequence k -> a_k given either by a closed-form rule or by a
/// finite prefix. Rules make statements about sup/limsup decidable;
/// prefixes only ever yield evidence.
class IntRule {
 public:
  enum class Kind { Polynomial, Exponential, DoubleExponential, Prefix };

  /// How sup_k (a_{k+1} - a_k) behaves on k >= k0.
  enum class GapClass { Bounded, Unbounded, Unknown };
  struct GapInfo {
    GapClass kind = GapClass::Unknown;
    std::optional<Integer> sup;  // set when Bounded (or the prefix maximum)
  };

  IntRule() : IntRule(polynomial({Rational(0), Rational(1)})) {}

  /// sum_i coeffs[i] * k^i; must be integer valued.
  static IntRule polynomial(std::vector<Rational> coeffs) {
    while (coeffs.size() > 1 && sgn(coeffs.back()) == 0) coeffs.pop_back();
    if (coeffs.empty()) coeffs.emplace_back(0);
    IntRule r(Kind::Polynomial);
    r.coeffs_ = std::move(coeffs);
    // Integer valued on every integer iff integer valued on deg+1 consecutive ones.
    for (std::int64_t k = 0; k <= static_cast<std::int64_t>(r.coeffs_.size()); ++k) {
      Rational v = r.eval_poly(k);
      if (v.get_den() != 1)
        throw UnsupportedRule("polynomial rule is not integer valued at k=" + std::to_string(k));
    }
    return r;
  }

  static IntRule affine(const Integer& slope, const Integer& intercept) {
    return polynomial({Rational(intercept), Rational(slope)});
  }

  /// c * base^k + d
  static IntRule exponential(const Integer& c, const Integer& base, const Integer& d) {
    if (base < 2 || sgn(c) <= 0) throw UnsupportedRule("exponential rule needs c > 0, base >= 2");
    IntRule r(Kind::Exponential);
    r.c_ = c;
    r.base_ = base;
    r.d_ = d;
    return r;
  }

  /// c * base^(2^k) + d
  static IntRule double_exponential(const Integer& c, const Integer& base, const Integer& d) {
    if (base < 2 || sgn(c) <= 0)
      throw UnsupportedRule("double exponential rule needs c > 0, base >= 2");
    IntRule r(Kind::DoubleExponential);
    r.c_ = c;
    r.base_ = base;
    r.d_ = d;
    return r;
  }

  /// Explicit values a_{k0}, a_{k0+1}, ...
  static IntRule prefix(std::vector<Integer> values, std::int64_t k0 = 0) {
    IntRule r(Kind::Prefix);
    r.values_ = std::move(values);
    r.prefix_start_ = k0;
    return r;
  }

  Kind kind() const { return kind_; }
  bool is_prefix() const { return kind_ == Kind::Prefix; }

  /// One past the last defined index for prefixes; nullopt for rules.
  std::optional<std::int64_t> end_index() const {
    if (!is_prefix()) return std::nullopt;
    return prefix_start_ + static_cast<std::int64_t>(values_.size());
  }

  bool defined_at(std::int64_t k) const {
    switch (kind_) {
      case Kind::Prefix:
        return k >= prefix_start_ && k < *end_index();
      case Kind::Exponential:
      case Kind::DoubleExponential:
        return k >= 0;
      case Kind::Polynomial:
        return true;
    }
    return false;
  }

  Integer at(std::int64_t k) const {
    if (!defined_at(k)) throw InvalidArgument("rule undefined at k=" + std::to_string(k));
    switch (kind_) {
      case Kind::Polynomial:
        return Integer(eval_poly(k).get_num());
      case Kind::Exponential: {
        Integer p;
        mpz_pow_ui(p.get_mpz_t(), base_.get_mpz_t(), static_cast<unsigned long>(k));
        return c_ * p + d_;
      }
      case Kind::DoubleExponential: {
        if (k > 40) throw WindowTooLarge("double exponential rule evaluated too far out");
        Integer p;
        mpz_pow_ui(p.get_mpz_t(), base_.get_mpz_t(), 1UL << k);
        return c_ * p + d_;
      }
      case Kind::Prefix:
        return values_[static_cast<std::size_t>(k - prefix_start_)];
    }
    return {};
  }

  /// True iff a_{k+1} > a_k for every k >= k0 where both are defined.
  bool strictly_increasing_from(std::int64_t k0) const {
    switch (kind_) {
      case Kind::Prefix: {
        for (std::int64_t k = std::max(k0, prefix_start_); k + 1 < *end_index(); ++k)
          if (at(k + 1) <= at(k)) return false;
        return true;
      }
      case Kind::Exponential:
      case Kind::DoubleExponential:
        return true;  // c > 0, base >= 2 enforced at construction
      case Kind::Polynomial:
        return poly_increasing_from(k0);
    }
    return false;
  }

  GapInfo gap_sup(std::int64_t k0) const {
    switch (kind_) {
      case Kind::Prefix: {
        GapInfo info{GapClass::Unknown, std::nullopt};
        for (std::int64_t k = std::max(k0, prefix_start_); k + 1 < *end_index(); ++k) {
          Integer g = at(k + 1) - at(k);
          if (!info.sup || g > *info.sup) info.sup = g;
        }
        return info;
      }
      case Kind::Exponential:
      case Kind::DoubleExponential:
        return {GapClass::Unbounded, std::nullopt};
      case Kind::Polynomial: {
        if (coeffs_.size() <= 1) return {GapClass::Bounded, Integer(0)};
        if (coeffs_.size() == 2) return {GapClass::Bounded, Integer(coeffs_[1].get_num())};
        // Degree >= 2: the difference polynomial has degree >= 1.
        return {sgn(coeffs_.back()) > 0 ? GapClass::Unbounded : GapClass::Bounded, std::nullopt};
      }
    }
    return {};
  }

  nlohmann::json to_json() const {
    using nlohmann::json;
    json j;
    switch (kind_) {
      case Kind::Polynomial: {
        j["kind"] = "poly";
        json cs = json::array();
        for (const auto& c : coeffs_) cs.push_back(c.get_str());
        j["coeffs"] = cs;
        break;
      }
      case Kind::Exponential:
      case Kind::DoubleExponential:
        j["kind"] = kind_ == Kind::Exponential ? "exp" : "dexp";
        j["c"] = c_.get_str();
        j["base"] = base_.get_str();
        j["d"] = d_.get_str();
        break;
      case Kind::Prefix: {
        j["kind"] = "prefix";
        j["k0"] = prefix_start_;
        json vs = json::array();
        for (const auto& v : values_) vs.push_back(v.get_str());
        j["values"] = vs;
        break;
      }
    }
    return j;
  }

  static IntRule from_json(const nlohmann::json& j) {
    auto as_int = [](const nlohmann::json& v) -> Integer {
      if (v.is_string()) return Integer(v.get<std::string>(), 10);
      if (v.is_number_integer()) return Integer(v.get<long>());
      throw InvalidArgument("expected integer in rule");
    };
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "poly") {
      std::vector<Rational> cs;
      for (const auto& c : j.at("coeffs"))
        cs.push_back(c.is_string() ? parse_rational(c.get<std::string>()) : Rational(c.get<long>()));
      return polynomial(std::move(cs));
    }
    if (kind == "affine") return affine(as_int(j.at("slope")), as_int(j.at("intercept")));
    if (kind == "exp") return exponential(as_int(j.at("c")), as_int(j.at("base")), as_int(j.at("d")));
    if (kind == "dexp")
      return double_exponential(as_int(j.at("c")), as_int(j.at("base")), as_int(j.at("d")));
    if (kind == "prefix") {
      std::vector<Integer> vs;
      for (const auto& v : j.at("values")) vs.push_back(as_int(v));
      return prefix(std::move(vs), j.value("k0", std::int64_t{0}));
    }
    throw UnsupportedRule("unknown rule kind: " + kind);
  }

  /// Short human-readable description, e.g. "k" or "2^k" or "prefix[3]".
  std::string describe() const {
    std::ostringstream os;
    switch (kind_) {
      case Kind::Polynomial: {
        bool first = true;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
          if (sgn(coeffs_[i]) == 0 && coeffs_.size() > 1) continue;
          if (!first) os << " + ";
          first = false;
          os << coeffs_[i].get_str();
          if (i >= 1) os << "*k";
          if (i >= 2) os << "^" << i;
        }
        break;
      }
      case Kind::Exponential:
        os << c_.get_str() << "*" << base_.get_str() << "^k + " << d_.get_str();
        break;
      case Kind::DoubleExponential:
        os << c_.get_str() << "*" << base_.get_str() << "^(2^k) + " << d_.get_str();
        break;
      case Kind::Prefix:
        os << "prefix[" << values_.size() << "]";
        break;
    }
    return os.str();
  }

 private:
  explicit IntRule(Kind k) : kind_(k) {}

  Rational eval_poly(std::int64_t k) const {
    Rational acc(0);
    for (std::size_t i = coeffs_.size(); i-- > 0;) acc = acc * Rational(k) + coeffs_[i];
    return acc;
  }

  bool poly_increasing_from(std::int64_t k0) const {
    // D(k) = P(k+1) - P(k). Past the Cauchy root bound of D its sign is the
    // sign of its leading coefficient; below it, check each integer.
    if (coeffs_.size() <= 1) return false;
    const std::size_t deg = coeffs_.size() - 1;
    // Coefficients of D via finite differences of the monomials.
    std::vector<Rational> dcoef(deg, Rational(0));
    for (std::size_t i = 1; i <= deg; ++i) {
      // (k+1)^i - k^i = sum_{j<i} C(i,j) k^j
      Integer binom(1);
      for (std::size_t j = 0; j < i; ++j) {
        dcoef[j] += coeffs_[i] * Rational(binom);
        binom = binom * Integer(static_cast<unsigned long>(i - j)) / Integer(static_cast<unsigned long>(j + 1));
      }
    }
    if (sgn(dcoef.back()) <= 0) return false;
    Rational bound(1);
    for (std::size_t j = 0; j + 1 < dcoef.size(); ++j) {
      Rational r = abs(dcoef[j] / dcoef.back());
      if (r + 1 > bound) bound = r + 1;
    }
    Integer kmax = ceil_of(bound);
    if (kmax - k0 > 1000000) throw UnsupportedRule("polynomial rule too irregular to certify");
    for (std::int64_t k = k0; k <= std::max<std::int64_t>(k0, to_int64(kmax)); ++k)
      if (eval_poly(k + 1) <= eval_poly(k)) return false;
    return true;
  }

  Kind kind_;
  std::vector<Rational> coeffs_;
  Integer c_, base_, d_;
  std::vector<Integer> values_;
  std::int64_t prefix_start_ = 0;
};

}  // namespace zolab
