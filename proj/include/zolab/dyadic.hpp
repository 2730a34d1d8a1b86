#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "zolab/error.hpp"

namespace zolab {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(const Integer& num, const Integer& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer floor_of(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_of(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// q * 2^e for any signed e.
inline Rational scale_pow2(const Rational& q, std::int64_t e) {
  Rational r;
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), q.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

inline Integer pow2(std::uint64_t e) {
  Integer r;
  mpz_setbit(r.get_mpz_t(), e);
  return r;
}

inline bool fits_int64(const Integer& z) {
  return mpz_fits_slong_p(z.get_mpz_t()) != 0 && sizeof(long) == 8;
}

inline std::int64_t to_int64(const Integer& z) {
  if (!fits_int64(z)) throw InvalidArgument("integer does not fit in 64 bits: " + z.get_str());
  return static_cast<std::int64_t>(z.get_si());
}

inline Integer from_uint64(std::uint64_t v) {
  Integer r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

inline std::uint64_t low_uint64(const Integer& z) {
  // Low 64 bits of |z|.
  std::uint64_t out = 0;
  std::size_t count = 0;
  Integer t = abs(z);
  mpz_fdiv_r_2exp(t.get_mpz_t(), t.get_mpz_t(), 64);
  mpz_export(&out, &count, -1, sizeof(out), 0, 0, t.get_mpz_t());
  return count == 0 ? 0 : out;
}

/// Natural log of a positive integer, accurate for integers of any size.
inline double log_of(const Integer& z) {
  if (sgn(z) <= 0) return -std::numeric_limits<double>::infinity();
  long e = 0;
  double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(d) + static_cast<double>(e) * std::log(2.0);
}

inline double log_of(const Rational& q) {
  return log_of(Integer(q.get_num())) - log_of(Integer(q.get_den()));
}

inline double to_double(const Rational& q) {
  // mpq_get_d truncates; good enough for reporting.
  long en = 0, ed = 0;
  if (sgn(q) == 0) return 0.0;
  double n = mpz_get_d_2exp(&en, q.get_num_mpz_t());
  double d = mpz_get_d_2exp(&ed, q.get_den_mpz_t());
  return std::ldexp(n / d, static_cast<int>(std::clamp<long>(en - ed, -100000, 100000)));
}

/// Parses "a/b", integers, and decimal notation ("0.125", "-3e-2") exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  if (s.empty()) throw InvalidArgument("empty number");
  try {
    if (s.find('/') != std::string::npos) {
      Rational q(s, 10);
      if (q.get_den() == 0) throw InvalidArgument("zero denominator in " + s);
      q.canonicalize();
      return q;
    }
    bool neg = false;
    std::size_t pos = 0;
    if (s[0] == '-' || s[0] == '+') {
      neg = s[0] == '-';
      pos = 1;
    }
    std::string digits;
    long scale = 0;
    bool seen_point = false;
    for (; pos < s.size() && s[pos] != 'e' && s[pos] != 'E'; ++pos) {
      char c = s[pos];
      if (c == '.') {
        if (seen_point) throw InvalidArgument("bad number: " + s);
        seen_point = true;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (seen_point) ++scale;
      } else {
        throw InvalidArgument("bad number: " + s);
      }
    }
    if (digits.empty()) throw InvalidArgument("bad number: " + s);
    long exp10 = 0;
    if (pos < s.size()) exp10 = std::stol(s.substr(pos + 1));
    exp10 -= scale;
    Integer mant(digits, 10);
    if (neg) mant = -mant;
    Integer p10;
    mpz_ui_pow_ui(p10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    return exp10 >= 0 ? Rational(mant * p10) : make_rational(mant, p10);
  } catch (const std::invalid_argument&) {
    throw InvalidArgument("bad number: " + s);
  }
}

/// Exact number num / 2^exp with exp >= 0 and, in canonical form, either
/// exp == 0 or num odd.
class Dyadic {
 public:
  Dyadic() = default;
  Dyadic(long v) : num_(v) {}  // NOLINT(google-explicit-constructor)
  Dyadic(Integer num, std::int64_t exp) : num_(std::move(num)), exp_(exp) { normalize(); }

  static Dyadic from_double(double x) {
    if (!std::isfinite(x)) throw InvalidArgument("non-finite value");
    if (x == 0.0) return {};
    int e = 0;
    double m = std::frexp(x, &e);
    auto mant = static_cast<long>(std::ldexp(m, 53));
    return Dyadic(Integer(mant), 53 - static_cast<std::int64_t>(e));
  }

  static std::optional<Dyadic> from_rational(const Rational& q) {
    const auto* den = q.get_den_mpz_t();
    if (mpz_popcount(den) != 1) return std::nullopt;
    auto e = static_cast<std::int64_t>(mpz_sizeinbase(den, 2) - 1);
    return Dyadic(Integer(q.get_num()), e);
  }

  static Dyadic require(const Rational& q, std::string_view what) {
    auto d = from_rational(q);
    if (!d) throw InvalidArgument(std::string(what) + " is not a dyadic rational: " + q.get_str());
    return *d;
  }

  const Integer& num() const { return num_; }
  std::int64_t exp() const { return exp_; }
  int sign() const { return sgn(num_); }
  bool is_integer() const { return exp_ == 0; }

  Rational to_rational() const {
    if (exp_ == 0) return Rational(num_);
    return make_rational(num_, pow2(static_cast<std::uint64_t>(exp_)));
  }

  double to_double() const {
    if (sign() == 0) return 0.0;
    long e = 0;
    double d = mpz_get_d_2exp(&e, num_.get_mpz_t());
    long total = e - static_cast<long>(exp_);
    return std::ldexp(d, static_cast<int>(std::clamp<long>(total, -100000, 100000)));
  }

  /// Exact decimal expansion (every dyadic rational has a finite one).
  std::string to_decimal() const {
    if (exp_ == 0) return num_.get_str();
    Integer scaled = abs(num_);
    Integer five;
    mpz_ui_pow_ui(five.get_mpz_t(), 5, static_cast<unsigned long>(exp_));
    scaled *= five;
    std::string digits = scaled.get_str();
    auto frac = static_cast<std::size_t>(exp_);
    if (digits.size() <= frac) digits.insert(0, frac - digits.size() + 1, '0');
    digits.insert(digits.size() - frac, ".");
    return (sign() < 0 ? "-" : "") + digits;
  }

  /// "num/den" text, the form used in spec documents.
  std::string str() const { return to_rational().get_str(); }

  Dyadic operator-() const { return Dyadic(Integer(-num_), exp_); }

  friend Dyadic operator+(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return Dyadic(Integer(a.num_ + b.num_), a.exp_);
    const Dyadic& fine = a.exp_ > b.exp_ ? a : b;
    const Dyadic& coarse = a.exp_ > b.exp_ ? b : a;
    Integer t;
    mpz_mul_2exp(t.get_mpz_t(), coarse.num_.get_mpz_t(),
                 static_cast<mp_bitcnt_t>(fine.exp_ - coarse.exp_));
    t += fine.num_;
    return Dyadic(std::move(t), fine.exp_);
  }
  friend Dyadic operator-(const Dyadic& a, const Dyadic& b) { return a + (-b); }
  friend Dyadic operator*(const Dyadic& a, const Dyadic& b) {
    return Dyadic(Integer(a.num_ * b.num_), a.exp_ + b.exp_);
  }

  /// this * 2^k
  Dyadic times_pow2(std::int64_t k) const { return Dyadic(num_, exp_ - k); }

  friend bool operator==(const Dyadic& a, const Dyadic& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }

  friend std::strong_ordering operator<=>(const Dyadic& a, const Dyadic& b) {
    if (a.exp_ == b.exp_) return order(cmp(a.num_, b.num_));
    int sa = a.sign(), sb = b.sign();
    if (sa != sb) return sa <=> sb;
    if (sa == 0) return std::strong_ordering::equal;
    // Same sign: compare magnitudes by bit length first.
    auto mag = [](const Dyadic& d) {
      return static_cast<std::int64_t>(mpz_sizeinbase(d.num_.get_mpz_t(), 2)) - d.exp_;
    };
    std::int64_t ma = mag(a), mb = mag(b);
    if (ma != mb) return sa > 0 ? ma <=> mb : mb <=> ma;
    Integer t;
    if (a.exp_ < b.exp_) {
      mpz_mul_2exp(t.get_mpz_t(), a.num_.get_mpz_t(), static_cast<mp_bitcnt_t>(b.exp_ - a.exp_));
      return order(cmp(t, b.num_));
    }
    mpz_mul_2exp(t.get_mpz_t(), b.num_.get_mpz_t(), static_cast<mp_bitcnt_t>(a.exp_ - b.exp_));
    return order(cmp(a.num_, t));
  }

  friend int compare(const Dyadic& a, const Rational& q) {
    Rational lhs = a.to_rational();
    return cmp(lhs, q);
  }

 private:
  static std::strong_ordering order(int c) {
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  void normalize() {
    if (sgn(num_) == 0) {
      exp_ = 0;
      return;
    }
    if (exp_ < 0) {
      mpz_mul_2exp(num_.get_mpz_t(), num_.get_mpz_t(), static_cast<mp_bitcnt_t>(-exp_));
      exp_ = 0;
      return;
    }
    if (exp_ > 0) {
      auto tz = static_cast<std::int64_t>(mpz_scan1(num_.get_mpz_t(), 0));
      auto s = std::min(tz, exp_);
      if (s > 0) {
        mpz_tdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), static_cast<mp_bitcnt_t>(s));
        exp_ -= s;
      }
    }
  }

  Integer num_;
  std::int64_t exp_ = 0;
};

inline Dyadic abs(const Dyadic& d) { return d.sign() < 0 ? -d : d; }

/// Distance to the nearest integer, exact.
inline Rational dist_to_int(const Rational& q) {
  Rational f = q - Rational(floor_of(q));
  Rational g = Rational(1) - f;
  return f < g ? f : g;
}

}  // namespace zolab
