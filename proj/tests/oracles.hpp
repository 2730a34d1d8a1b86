#pragma once

// Brute-force reference implementations used by the tests. They work on
// plain GMP rationals and std::set, sharing no code paths with the library
// beyond the LambdaSpec they are compared against.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "zolab/zolab.hpp"

namespace oracle {

using zolab::Integer;
using zolab::Rational;

inline Rational q(long n, long d = 1) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

inline Rational pow2q(long e) {
  Rational r(1);
  if (e >= 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

inline Integer floor_q(const Rational& x) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

/// Points j / 2^e with lo <= x < hi, intersected with [a, b).
inline std::set<Rational> grid_points(long e, const Rational& lo, const Rational& hi, const Rational& a,
                                      const Rational& b) {
  std::set<Rational> out;
  const Rational from = std::max(lo, a), to = std::min(hi, b);
  if (!(from < to)) return out;
  const Rational step = pow2q(-e);
  Integer j = floor_q(from / step) - 1;
  for (;; ++j) {
    Rational x = Rational(j) * step;
    if (x >= to) break;
    if (x >= from) out.insert(x);
  }
  return out;
}

inline Integer ceil_q(const Rational& x) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return r;
}

/// #(2^-e Z ∩ [lo, hi) ∩ [a, b)) from the ceiling formula.
inline Integer grid_count(long e, const Rational& lo, const Rational& hi, const Rational& a, const Rational& b) {
  const Rational from = std::max(lo, a), to = std::min(hi, b);
  if (!(from < to)) return 0;
  const Rational step = pow2q(-e);
  return ceil_q(to / step) - ceil_q(from / step);
}

/// Mirror description of a generated spec.
struct Node {
  enum Kind { Blocks, Explicit, Union, Minkowski } kind = Blocks;
  struct B {
    long exp;
    Rational lo, hi;
  };
  std::vector<B> blocks;
  std::vector<Rational> values;
  std::shared_ptr<Node> left, right;

  Rational lower() const {
    switch (kind) {
      case Blocks: {
        Rational m = blocks.front().lo;
        for (const auto& b : blocks) m = std::min(m, b.lo);
        return m;
      }
      case Explicit: return *std::min_element(values.begin(), values.end());
      case Union: return std::min(left->lower(), right->lower());
      case Minkowski: return left->lower() + right->lower();
    }
    return 0;
  }
};

inline std::set<Rational> points(const Node& n, const Rational& a, const Rational& b) {
  std::set<Rational> out;
  switch (n.kind) {
    case Node::Blocks:
      for (const auto& bl : n.blocks) {
        auto s = grid_points(bl.exp, bl.lo, bl.hi, a, b);
        out.insert(s.begin(), s.end());
      }
      break;
    case Node::Explicit:
      for (const auto& v : n.values)
        if (a <= v && v < b) out.insert(v);
      break;
    case Node::Union: {
      auto l = points(*n.left, a, b), r = points(*n.right, a, b);
      out.insert(l.begin(), l.end());
      out.insert(r.begin(), r.end());
      break;
    }
    case Node::Minkowski: {
      const Rational la = n.left->lower(), lb = n.right->lower();
      auto l = points(*n.left, la, b - lb), r = points(*n.right, lb, b - la);
      for (const auto& x : l)
        for (const auto& y : r) {
          Rational s = x + y;
          if (a <= s && s < b) out.insert(s);
        }
      break;
    }
  }
  return out;
}

struct Generated {
  zolab::LambdaSpec spec;
  std::shared_ptr<Node> mirror;
  std::string kind;
};

inline Rational random_cut(zolab::CounterRng& rng, long lo, long hi) {
  // multiples of 1/4 in [lo, hi]
  return q(rng.between(lo * 4, hi * 4), 4);
}

inline Generated random_blocks(zolab::CounterRng& rng, long max_exp, long span) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Blocks;
  std::vector<zolab::Block> blocks;
  const int nb = static_cast<int>(rng.between(1, 3));
  for (int i = 0; i < nb; ++i) {
    const long e = rng.between(0, max_exp);
    Rational lo = random_cut(rng, -2, span);
    Rational hi = lo + random_cut(rng, 0, span / 2 + 1) + q(1, 4);
    node->blocks.push_back({e, lo, hi});
    blocks.push_back(zolab::Block{e, lo, hi});
  }
  return {zolab::dyadic_blocks(blocks), node, "blocks"};
}

inline Generated random_explicit(zolab::CounterRng& rng, long span) {
  auto node = std::make_shared<Node>();
  node->kind = Node::Explicit;
  std::vector<zolab::Dyadic> vals;
  const int n = static_cast<int>(rng.between(1, 12));
  for (int i = 0; i < n; ++i) {
    const Rational v = q(rng.between(-8, span * 8), 8);
    node->values.push_back(v);
    vals.push_back(zolab::Dyadic::require(v, "oracle value"));
  }
  return {zolab::explicit_set(vals), node, "explicit"};
}

/// One of DyadicBlocks, Union or Minkowski, cycling with i.
inline Generated random_spec(zolab::CounterRng& rng, int i) {
  switch (i % 3) {
    case 0: return random_blocks(rng, 8, 24);
    case 1: {
      auto a = rng.between(0, 1) ? random_blocks(rng, 7, 20) : random_explicit(rng, 20);
      auto b = random_blocks(rng, 7, 20);
      auto node = std::make_shared<Node>();
      node->kind = Node::Union;
      node->left = a.mirror;
      node->right = b.mirror;
      return {zolab::union_of(a.spec, b.spec), node, "union"};
    }
    default: {
      auto a = random_blocks(rng, 3, 6);
      auto b = rng.between(0, 1) ? random_blocks(rng, 3, 6) : random_explicit(rng, 6);
      auto node = std::make_shared<Node>();
      node->kind = Node::Minkowski;
      node->left = a.mirror;
      node->right = b.mirror;
      return {zolab::minkowski(a.spec, b.spec), node, "minkowski"};
    }
  }
}

inline std::vector<Rational> as_rationals(const std::vector<zolab::Dyadic>& xs) {
  std::vector<Rational> out;
  out.reserve(xs.size());
  for (const auto& x : xs) out.push_back(x.to_rational());
  return out;
}

inline std::vector<Rational> as_vector(const std::set<Rational>& s) { return {s.begin(), s.end()}; }

/// Union counterexample parts by direct bit arithmetic: unit [v, v+1) with
/// b = bit_width(v) - 1 uses 2^-v when b has the part's parity, else 2^-(2^b).
inline long counterexample_exp(int part, long v) {
  if (v == 0) return 0;
  const long b = static_cast<long>(std::bit_width(static_cast<unsigned long>(v))) - 1;
  const bool fine = (b % 2 == 0) == (part == 1);
  return fine ? v : (1L << b);
}

inline std::set<Rational> counterexample_points(int part, const Rational& a, const Rational& b) {
  std::set<Rational> out;
  for (long v = 0; Rational(v) < b; ++v) {
    auto s = grid_points(counterexample_exp(part, v), Rational(v), Rational(v + 1), a, b);
    out.insert(s.begin(), s.end());
  }
  return out;
}

/// Cell counts #(Λ ∩ [n w, (n+1) w)) for n in [first, last] where Λ has one
/// grid per unit interval [v, v+1), v >= 0, with exponent exp_of(v).
template <class ExpOf>
std::vector<Integer> unit_grid_cells(ExpOf exp_of, const Rational& w, long first, long last) {
  std::vector<Integer> out;
  for (long n = first; n <= last; ++n) {
    const Rational a = w * n, b = w * (n + 1);
    Integer c = 0;
    for (long v = std::max(0L, static_cast<long>(floor_q(a).get_si())); Rational(v) < b; ++v)
      c += grid_count(exp_of(v), Rational(v), Rational(v + 1), a, b);
    out.push_back(c);
  }
  return out;
}

/// Leftmost chain over counts c[0..] (index n = first + i): starts three
/// cells after the first nonempty one, needs c_m >= 2^k (c_{m-3} + c_{m-2} +
/// c_{m-1}) with c_m > 0, and m_{k+1} - m_k >= 2.
inline std::vector<long> greedy_chain(const std::vector<Integer>& c, long first) {
  std::vector<long> chain;
  long start = -1;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > 0) {
      start = static_cast<long>(i) + 3;
      break;
    }
  if (start < 0) return chain;
  for (long i = std::max(start, 3L); i < static_cast<long>(c.size()); ++i) {
    if (!chain.empty() && first + i - chain.back() < 2) continue;
    const Integer den = c[i - 3] + c[i - 2] + c[i - 1];
    Integer need = den;
    mpz_mul_2exp(need.get_mpz_t(), need.get_mpz_t(), chain.size() + 1);
    if (c[i] > 0 && c[i] >= need) chain.push_back(first + i);
  }
  return chain;
}

// Sandwich generators l(ν, j), m(ν, j) and the exponent of Λ_n on [ν, ν+1).
inline long l_oracle(long nu, long j) { return j >= 0 ? (nu >> j) : (nu << (-j)); }

inline long m_oracle(long nu, long j) {
  long l = l_oracle(nu, j);
  if (l < 1) return 0;
  long p = 1;
  while (p * 2 <= l) p *= 2;
  return p;
}

inline long sandwich_exp_oracle(long n, long nu) {
  const long j = n >= 0 ? (n + 1) / 2 : -((-n) / 2);
  return n % 2 != 0 ? l_oracle(nu, j) : m_oracle(nu, j);
}

/// ∪_n [n, n+1) ∩ 2^-n Z on [a, b), a >= 0.
inline std::set<Rational> diagonal_points(const Rational& a, const Rational& b) {
  std::set<Rational> out;
  for (long v = 0; Rational(v) < b; ++v) {
    auto s = grid_points(v, Rational(v), Rational(v + 1), a, b);
    out.insert(s.begin(), s.end());
  }
  return out;
}

/// 1 - (1 - q^{2^m})^gap as an unreduced fraction N/D (q = a/b).
inline std::pair<Integer, Integer> randt2_exact(long a, long b, long m, long gap) {
  Integer num, den;
  mpz_ui_pow_ui(num.get_mpz_t(), static_cast<unsigned long>(a), 1UL << m);
  mpz_ui_pow_ui(den.get_mpz_t(), static_cast<unsigned long>(b), 1UL << m);
  Integer dg, rg;
  const Integer rest = den - num;
  mpz_pow_ui(dg.get_mpz_t(), den.get_mpz_t(), static_cast<unsigned long>(gap));
  mpz_pow_ui(rg.get_mpz_t(), rest.get_mpz_t(), static_cast<unsigned long>(gap));
  return {dg - rg, dg};
}

/// log(N / D) for big integers via mpz_get_d_2exp.
inline double log_ratio(const Integer& n, const Integer& d) {
  long en = 0, ed = 0;
  const double mn = mpz_get_d_2exp(&en, n.get_mpz_t());
  const double md = mpz_get_d_2exp(&ed, d.get_mpz_t());
  return std::log(mn) - std::log(md) + static_cast<double>(en - ed) * std::log(2.0);
}

/// ||x|| in exact arithmetic.
inline Rational nearest_int_distance(const Rational& x) {
  const Rational f = x - Rational(floor_q(x));
  return std::min(f, Rational(Rational(1) - f));
}

/// Merged measure of ∪ [c_j - h, c_j + h] ∩ [a, b] by walking every band.
inline Rational band_measure_walk(const Rational& t, const Rational& h, const Rational& a, const Rational& b) {
  Rational total(0), covered_to = a;
  const Rational P = Rational(1) / t;
  Integer j = floor_q((a - h) / P) - 1;
  for (;; ++j) {
    const Rational c = Rational(j) * P;
    if (c - h > b) break;
    Rational lo = std::max(Rational(c - h), covered_to), hi = std::min(Rational(c + h), b);
    if (lo < hi) {
      total += hi - lo;
      covered_to = hi;
    }
  }
  return total;
}

}  // namespace oracle
