#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#if defined(__AVX512F__)
#include <immintrin.h>
#endif

#include <json.hpp>

#include "zolab/block_rules.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/rng.hpp"

namespace zolab::kron {

/// Find p with ||θ_j p - α_j|| < ε for every j.
struct ApproxProblem {
  std::vector<Rational> theta;
  std::vector<Rational> alpha;
  Rational eps{1, 20};
  Integer p_bound{10'000'000};
  bool positive_only = false;  // search p = 1, 2, ... only
};

inline void validate(const ApproxProblem& pr) {
  if (pr.theta.size() != pr.alpha.size()) throw InvalidArgument("theta and alpha lengths differ");
  if (pr.theta.empty()) throw InvalidArgument("empty approximation problem");
  if (sgn(pr.eps) <= 0) throw InvalidArgument("eps must be positive");
  if (sgn(pr.p_bound) < 0) throw InvalidArgument("p_bound must be nonnegative");
}

/// max_j ||θ_j p - α_j||, exact.
inline Rational residual(const ApproxProblem& pr, const Integer& p) {
  Rational worst(0);
  for (std::size_t j = 0; j < pr.theta.size(); ++j) {
    Rational d = dist_to_int(pr.theta[j] * Rational(p) - pr.alpha[j]);
    if (d > worst) worst = d;
  }
  return worst;
}

inline bool satisfies(const ApproxProblem& pr, const Integer& p) { return residual(pr, p) < pr.eps; }

// ------------------------------------------------------------ condition B

struct PrecheckResult {
  bool admissible = true;
  std::vector<long> violating_u;
};

/// Looks for integer u with |u_j| <= bound, Σ u_j θ_j within 1e-9 of an
/// integer while Σ u_j α_j is not within 1e-6 of one. Such a u rules out a
/// solution for small ε. Vectors are tried by increasing max-norm.
inline PrecheckResult precheck_condition_B(const ApproxProblem& pr, long bound = 20) {
  validate(pr);
  const std::size_t L = pr.theta.size();
  if (L > 4) throw InvalidArgument("exhaustive condition-B search supports at most 4 coordinates");
  const Rational tol_theta(1, 1'000'000'000), tol_alpha(1, 1'000'000);
  PrecheckResult res;
  std::vector<long> u(L, 0);
  for (long shell = 1; shell <= bound; ++shell) {
    // every u in [-shell, shell]^L with max |u_j| == shell
    std::fill(u.begin(), u.end(), -shell);
    while (true) {
      long norm = 0;
      std::size_t first_nz = L;
      for (std::size_t j = 0; j < L; ++j) {
        norm = std::max(norm, std::labs(u[j]));
        if (first_nz == L && u[j] != 0) first_nz = j;
      }
      if (norm == shell && first_nz < L && u[first_nz] > 0) {
        Rational st(0), sa(0);
        for (std::size_t j = 0; j < L; ++j) {
          st += pr.theta[j] * u[j];
          sa += pr.alpha[j] * u[j];
        }
        if (dist_to_int(st) <= tol_theta && dist_to_int(sa) > tol_alpha) {
          res.admissible = false;
          res.violating_u = u;
          return res;
        }
      }
      std::size_t j = 0;
      while (j < L && u[j] == shell) u[j++] = -shell;
      if (j == L) break;
      ++u[j];
    }
  }
  return res;
}

// ------------------------------------------------------------ solver

namespace detail {

/// frac(q) * 2^64 rounded to nearest, modulo 2^64.
inline std::uint64_t to_fixed(const Rational& q) {
  Rational f = q - Rational(floor_of(q));
  Integer v = floor_of(scale_pow2(f, 64) + Rational(1, 2));
  return low_uint64(v);
}

inline std::uint64_t absdist(std::uint64_t x) { return x < (1ULL << 63) ? x : (0 - x); }

/// Fixed-point image of a problem: x_j(p) = p Θ_j - A_j mod 2^64 is within
/// (|p| + 1) / 2 units of (θ_j p - α_j) 2^64 mod 2^64.
struct FixedProblem {
  std::vector<std::uint64_t> T, A;
  std::uint64_t threshold = 0;
};

inline FixedProblem fixed_problem(const ApproxProblem& pr, const Integer& pmax) {
  FixedProblem fp;
  for (std::size_t j = 0; j < pr.theta.size(); ++j) {
    fp.T.push_back(to_fixed(pr.theta[j]));
    fp.A.push_back(to_fixed(pr.alpha[j]));
  }
  Integer thr = ceil_of(scale_pow2(pr.eps, 64)) + pmax / 2 + 4;
  fp.threshold = thr >= pow2(64) ? std::numeric_limits<std::uint64_t>::max() : low_uint64(thr);
  return fp;
}

/// Eight consecutive p values advanced together. Lane l holds
/// x_j(p) + thr - 1 for the two leading constraints, so a constraint passes
/// iff that value is below 2 thr - 1 (one unsigned compare).
class LaneScanner {
 public:
  LaneScanner(const FixedProblem& fp, bool negative) {
    const std::uint64_t thr = fp.threshold >= (1ULL << 63) ? (1ULL << 63) : fp.threshold;
    width_ = 2 * thr - 1;
    for (int j = 0; j < 2; ++j) {
      const bool real = static_cast<std::size_t>(j) < fp.T.size();
      const std::uint64_t T = real ? (negative ? 0 - fp.T[j] : fp.T[j]) : 0;
      const std::uint64_t A = real ? fp.A[j] : 0;
      for (std::uint64_t l = 0; l < 8; ++l) x_[j][l] = (l + 1) * T - A + thr - 1;
      step_[j] = 8 * T;
    }
    all_pass_ = fp.threshold >= (1ULL << 63);
  }

  /// bits[g], bit l: p = base + 8 g + l passes both leading constraints,
  /// for g < groups; then moves past those groups.
  void scan(std::size_t groups, std::uint8_t* bits) {
    if (all_pass_) {
      std::memset(bits, 0xff, groups);
      return;
    }
#if defined(__AVX512F__)
    __m512i x0 = _mm512_loadu_si512(x_[0]), x1 = _mm512_loadu_si512(x_[1]);
    const __m512i s0 = _mm512_set1_epi64(static_cast<long long>(step_[0]));
    const __m512i s1 = _mm512_set1_epi64(static_cast<long long>(step_[1]));
    const __m512i w = _mm512_set1_epi64(static_cast<long long>(width_));
    for (std::size_t g = 0; g < groups; ++g) {
      bits[g] = _mm512_mask_cmplt_epu64_mask(_mm512_cmplt_epu64_mask(x0, w), x1, w);
      x0 = _mm512_add_epi64(x0, s0);
      x1 = _mm512_add_epi64(x1, s1);
    }
    _mm512_storeu_si512(x_[0], x0);
    _mm512_storeu_si512(x_[1], x1);
#else
    std::uint64_t x0[8], x1[8];
    std::memcpy(x0, x_[0], sizeof x0);
    std::memcpy(x1, x_[1], sizeof x1);
    const std::uint64_t s0 = step_[0], s1 = step_[1], w = width_;
    for (std::size_t g = 0; g < groups; ++g) {
      unsigned b = 0;
      for (int l = 0; l < 8; ++l) {
        b |= static_cast<unsigned>((x0[l] < w) & (x1[l] < w)) << l;
        x0[l] += s0;
        x1[l] += s1;
      }
      bits[g] = static_cast<std::uint8_t>(b);
    }
    std::memcpy(x_[0], x0, sizeof x0);
    std::memcpy(x_[1], x1, sizeof x1);
#endif
  }

 private:
  std::uint64_t x_[2][8];
  std::uint64_t step_[2];
  std::uint64_t width_;
  bool all_pass_ = false;
};

inline bool passes_rest(const FixedProblem& fp, std::uint64_t p_abs, bool negative, std::size_t from) {
  for (std::size_t j = from; j < fp.T.size(); ++j) {
    const std::uint64_t p = negative ? 0 - p_abs : p_abs;
    if (absdist(p * fp.T[j] - fp.A[j]) >= fp.threshold) return false;
  }
  return true;
}

}  // namespace detail

/// Smallest |p| <= p_bound with max_j ||θ_j p - α_j|| < ε; among p and -p the
/// positive one wins. Every hit is confirmed in exact arithmetic.
inline Integer solve(const ApproxProblem& pr) {
  validate(pr);
  if (!pr.positive_only && satisfies(pr, Integer(0))) return 0;
  if (pr.p_bound >= pow2(62)) throw InvalidArgument("p_bound too large");
  const auto bound = static_cast<std::uint64_t>(to_int64(pr.p_bound));
  const auto fp = detail::fixed_problem(pr, pr.p_bound);
  const std::size_t lead = std::min<std::size_t>(2, fp.T.size());
  detail::LaneScanner pos(fp, false), neg(fp, true);
  constexpr std::size_t kGroups = 1024;
  std::vector<std::uint8_t> pb(kGroups, 0), nb(kGroups, 0);
  for (std::uint64_t base = 1; base <= bound; base += 8 * kGroups) {
    const std::size_t groups = static_cast<std::size_t>(std::min<std::uint64_t>(kGroups, (bound - base) / 8 + 1));
    pos.scan(groups, pb.data());
    if (!pr.positive_only) neg.scan(groups, nb.data());
    for (std::size_t g = 0; g < groups; ++g) {
      if (g % 8 == 0 && g + 8 <= groups) {
        std::uint64_t wp, wn;
        std::memcpy(&wp, pb.data() + g, 8);
        std::memcpy(&wn, nb.data() + g, 8);
        if ((wp | wn) == 0) {
          g += 7;
          continue;
        }
      }
      if ((pb[g] | nb[g]) == 0) continue;
      for (unsigned l = 0; l < 8; ++l) {
        const std::uint64_t pa = base + 8 * g + l;
        if (pa > bound) break;
        if ((pb[g] >> l & 1u) && detail::passes_rest(fp, pa, false, lead) && satisfies(pr, from_uint64(pa)))
          return from_uint64(pa);
        if ((nb[g] >> l & 1u) && detail::passes_rest(fp, pa, true, lead) && satisfies(pr, -from_uint64(pa)))
          return -from_uint64(pa);
      }
    }
  }
  throw NotFoundWithinBound("no p with |p| <= " + pr.p_bound.get_str() + " meets the tolerance");
}

/// Reference scan in exact arithmetic, same order as solve().
inline std::optional<Integer> exhaustive_scan(const ApproxProblem& pr, long limit) {
  if (!pr.positive_only && satisfies(pr, Integer(0))) return Integer(0);
  for (long p = 1; p <= limit; ++p) {
    if (satisfies(pr, Integer(p))) return Integer(p);
    if (!pr.positive_only && satisfies(pr, Integer(-p))) return Integer(-p);
  }
  return std::nullopt;
}

// ------------------------------------------------------------ S witness

/// Measure of [a, b] ∩ ∪_{j ∈ Z} [j/t - h, j/t + h] for t > 0, h >= 0.
inline Rational grid_band_measure(const Rational& t, const Rational& h, const Rational& a, const Rational& b) {
  if (!(a < b)) return 0;
  const Rational P = Rational(1) / t;
  const bool full = 2 * h >= P;
  const Rational per = full ? P : Rational(2 * h);
  // cumulative band measure on [0, x], extended to negative x
  auto cumulative = [&](const Rational& x) {
    const Integer k = floor_of(x / P);
    const Rational y = x - Rational(k) * P;
    Rational part = full ? y : Rational((y < h ? y : h) + (y > P - h ? Rational(y - (P - h)) : Rational(0)));
    return Rational(Rational(k) * per + part);
  };
  return cumulative(b) - cumulative(a);
}

struct SInterval {
  int k = 0;
  int i = 0;
  Dyadic alpha;  // α_{i,k}
  Integer j_lo, j_hi;  // bands j/t ± 1/(n t) meeting [α, α + 1]
};

struct Level {
  int k = 0;
  long n = 0;
  std::int64_t r = 0;
  Integer p, t;
  std::vector<std::size_t> b_indices;  // positions of α_{i,k} in the α list
  std::size_t a_count = 0;            // |A_k|
  std::vector<SInterval> s;
  Rational max_residual;
};

struct SWitness {
  std::vector<Dyadic> alphas;
  std::vector<std::size_t> beta_indices;  // ν_1, ν_2, ... (0-based)
  std::vector<Level> levels;
  nlohmann::json lambda1;

  const Dyadic& beta(std::size_t one_based) const { return alphas[beta_indices[one_based - 1]]; }

  nlohmann::json to_json() const {
    auto lv = nlohmann::json::array();
    for (const auto& L : levels) {
      auto s = nlohmann::json::array();
      for (const auto& si : L.s)
        s.push_back({{"k", si.k}, {"i", si.i}, {"alpha", si.alpha.str()}, {"t", L.t.get_str()},
                     {"n", L.n}, {"j_lo", si.j_lo.get_str()}, {"j_hi", si.j_hi.get_str()}});
      lv.push_back({{"k", L.k}, {"n", L.n}, {"r", L.r}, {"p", L.p.get_str()}, {"t", L.t.get_str()},
                    {"a_count", L.a_count}, {"max_residual", L.max_residual.get_str()}, {"S", s}});
    }
    auto al = nlohmann::json::array();
    for (const auto& a : alphas) al.push_back(a.str());
    return {{"alphas", al}, {"lambda1", lambda1}, {"levels", lv}};
  }
};

/// α_1 in (1, 2), then α_{j+1} = α_j + 5 + U with U uniform in (0, 1);
/// each value carries `bits` random bits.
inline std::vector<Dyadic> spaced_alphas(std::size_t count, std::uint64_t seed, unsigned bits = 192) {
  CounterRng rng(seed, 0x6b726f6eULL);
  std::vector<Dyadic> out;
  Dyadic cur = rng.dyadic_in(Dyadic(1), Dyadic(1), bits);
  for (std::size_t j = 0; j < count; ++j) {
    out.push_back(cur);
    Dyadic u(0);
    while (u.sign() == 0) u = rng.dyadic_in(Dyadic(0), Dyadic(1), bits);
    cur = cur + Dyadic(5) + u;
  }
  return out;
}

/// Greedy subsequence with consecutive differences > 5.
inline std::vector<std::size_t> extract_betas(const std::vector<Dyadic>& alphas) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    if (j > 0 && !(alphas[j - 1] < alphas[j])) throw InvalidArgument("alphas must be strictly ascending");
    if (idx.empty() || alphas[j] - alphas[idx.back()] > Dyadic(5)) idx.push_back(j);
  }
  return idx;
}

/// sup{m_l : n_l <= x}; the last block's exponent for finite families.
inline std::int64_t max_exponent_up_to(const FamilyRule& rule, const Rational& x) {
  std::optional<std::int64_t> r;
  for (std::int64_t l = rule.k0(); !rule.last_index() || l <= *rule.last_index(); ++l) {
    if (Rational(rule.n().at(l)) > x) break;
    r = to_int64(rule.m().at(l));
    if (l - rule.k0() > 1'000'000) throw WindowTooLarge("too many blocks below the spacing point");
  }
  return r.value_or(0);
}

/// The stacked approximation problem at level k.
inline ApproxProblem level_problem(const SWitness& w, int k, std::int64_t r, const Integer& p_bound) {
  const long n = 1L << k;
  const std::size_t top = w.beta_indices[static_cast<std::size_t>((1L << (k + 1)) - 1)];
  ApproxProblem pr;
  pr.eps = make_rational(1, 10 * n);
  pr.p_bound = p_bound;
  pr.positive_only = true;
  std::vector<bool> in_b(top + 1, false);
  for (long i = 1; i <= n; ++i) {
    const std::size_t idx = w.beta_indices[static_cast<std::size_t>(n + i - 1)];
    in_b[idx] = true;
    pr.theta.push_back(scale_pow2(w.alphas[idx].to_rational(), r));
    pr.alpha.push_back(make_rational(n - i, n));  // ||t α + i/n|| = ||t α - (n - i)/n||
  }
  for (std::size_t j = 0; j <= top; ++j) {
    if (in_b[j]) continue;
    pr.theta.push_back(scale_pow2(w.alphas[j].to_rational(), r));
    pr.alpha.push_back(Rational(0));
  }
  return pr;
}

inline SWitness build_S_witness(const FamilyRule& lambda1, const std::vector<Dyadic>& alphas, int K,
                                const Integer& p_bound = pow2(40)) {
  if (K < 0) throw InvalidArgument("K must be nonnegative");
  if (K > 3) throw DepthTooLarge("S witness depth is limited to 3");
  SWitness w;
  w.alphas = alphas;
  w.lambda1 = lambda1.to_json();
  for (const auto& a : alphas)
    if (a.sign() <= 0) throw InvalidArgument("alphas must be positive");
  w.beta_indices = extract_betas(alphas);
  const std::size_t need = static_cast<std::size_t>(1) << (K + 1);
  if (K > 0 && w.beta_indices.size() < need)
    throw SpacingError("need " + std::to_string(need) + " alphas spaced more than 5 apart, found " +
                       std::to_string(w.beta_indices.size()));
  for (int k = 1; k <= K; ++k) {
    Level L;
    L.k = k;
    L.n = 1L << k;
    const Dyadic& top = w.beta(static_cast<std::size_t>(1L << (k + 1)));
    L.r = max_exponent_up_to(lambda1, top.to_rational() + 1);
    if (L.r < 0) throw InvalidArgument("negative grid exponent in lambda1");
    const auto pr = level_problem(w, k, L.r, p_bound);
    L.p = solve(pr);
    L.max_residual = residual(pr, L.p);
    L.t = L.p * pow2(static_cast<std::uint64_t>(L.r));
    L.a_count = w.beta_indices[need / (static_cast<std::size_t>(1) << (K - k)) - 1] + 1;
    const Rational tq(L.t);
    const Rational h = Rational(1) / (Rational(L.n) * tq);
    for (long i = 1; i <= L.n; ++i) {
      const std::size_t idx = w.beta_indices[static_cast<std::size_t>(L.n + i - 1)];
      L.b_indices.push_back(idx);
      SInterval si;
      si.k = k;
      si.i = static_cast<int>(i);
      si.alpha = w.alphas[idx];
      const Rational a = si.alpha.to_rational();
      si.j_lo = ceil_of((a - h) * tq);
      si.j_hi = floor_of((a + 1 + h) * tq);
      L.s.push_back(si);
    }
    w.levels.push_back(std::move(L));
  }
  return w;
}

/// Band measure of S_{i,k}.
inline Rational s_measure(const Level& L, const SInterval& si) {
  const Rational tq(L.t);
  const Rational a = si.alpha.to_rational();
  return grid_band_measure(tq, Rational(1) / (Rational(L.n) * tq), a, a + 1);
}

/// Smallest distance between the hulls [α, α + 1] of distinct S_{i,k}.
inline Rational min_s_separation(const SWitness& w) {
  std::vector<Rational> starts;
  for (const auto& L : w.levels)
    for (const auto& si : L.s) starts.push_back(si.alpha.to_rational());
  std::sort(starts.begin(), starts.end());
  std::optional<Rational> best;
  for (std::size_t i = 1; i < starts.size(); ++i) {
    Rational d = starts[i] - starts[i - 1] - 1;
    if (!best || d < *best) best = d;
  }
  return best.value_or(Rational(1'000'000));
}

/// Every block of lambda1 meeting [0, β_{2^{k+1}} - 2] uses a grid
/// 2^{-m} with m <= r_k, so those points lie on 2^{-r_k} N.
inline bool lambda1_on_grid(const FamilyRule& lambda1, const SWitness& w) {
  for (const auto& L : w.levels) {
    const Rational lim = w.beta(static_cast<std::size_t>(1L << (L.k + 1))).to_rational() - 2;
    for (const auto& b : lambda1.blocks_meeting(Rational(0), lim + 1))
      if (b.lo <= lim && b.exp > L.r) return false;
  }
  return true;
}

struct DivergenceRow {
  Rational x;
  int hits = 0;
  std::vector<int> l;  // l_k per level
};

struct DivergenceReport {
  std::vector<DivergenceRow> rows;
  int levels = 0;
  double full_hit_fraction() const {
    if (rows.empty()) return 1.0;
    int full = 0;
    for (const auto& r : rows) full += r.hits == levels;
    return static_cast<double>(full) / static_cast<double>(rows.size());
  }
};

/// For each x and level k: choose l_k with |x - i/t - l_k/(n t)| <= 1/(2 n t)
/// and test whether x + α_{l_k,k} lands in S_{l_k,k}.
inline DivergenceReport check_claim_divergence(const SWitness& w, const std::vector<Rational>& xs, int K) {
  if (K > static_cast<int>(w.levels.size())) throw InvalidArgument("witness has fewer levels than requested");
  DivergenceReport rep;
  rep.levels = K;
  for (const auto& x : xs) {
    DivergenceRow row;
    row.x = x;
    for (int k = 1; k <= K; ++k) {
      const Level& L = w.levels[static_cast<std::size_t>(k - 1)];
      const Rational nt = Rational(L.n) * Rational(L.t);
      const Integer N = floor_of(x * nt + Rational(1, 2));  // nearest multiple of 1/(n t)
      Integer i = ceil_of(make_rational(N, L.n)) - 1;
      const long l = static_cast<long>(Integer(N - i * L.n).get_si());
      row.l.push_back(static_cast<int>(l));
      const SInterval& si = L.s[static_cast<std::size_t>(l - 1)];
      const Rational y = x + si.alpha.to_rational();
      const Rational a = si.alpha.to_rational();
      if (y < a || y > a + 1) continue;
      const Integer j = floor_of(y * Rational(L.t) + Rational(1, 2));
      if (abs(Rational(y - Rational(j) / Rational(L.t))) <= Rational(1) / nt && j >= si.j_lo && j <= si.j_hi)
        ++row.hits;
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

struct ConvergenceRow {
  int k = 0;
  Rational mu_F, mu_G, bound_F, expected_G;
  bool f_ok = false, g_ok = false;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<Rational> partial_sums;  // Σ_{j<=k} μ(F_j)
  bool all_ok() const {
    for (const auto& r : rows)
      if (!r.f_ok || !r.g_ok) return false;
    return true;
  }
};

/// Exact measures of F_k and G_k inside [3, 4] against 1/2^{k-2} and 2/n.
inline ConvergenceReport check_claim_convergence(const SWitness& w, int K) {
  if (K > static_cast<int>(w.levels.size())) throw InvalidArgument("witness has fewer levels than requested");
  ConvergenceReport rep;
  Rational acc(0);
  for (int k = 1; k <= K; ++k) {
    const Level& L = w.levels[static_cast<std::size_t>(k - 1)];
    const Rational tq(L.t), nt = Rational(L.n) * Rational(L.t);
    ConvergenceRow row;
    row.k = k;
    row.mu_F = grid_band_measure(tq, Rational(3, 2) / nt, Rational(3), Rational(4));
    row.mu_G = grid_band_measure(tq, Rational(1) / nt, Rational(3), Rational(4));
    row.bound_F = scale_pow2(Rational(1), 2 - k);
    row.expected_G = make_rational(2, L.n);
    row.f_ok = row.mu_F <= row.bound_F;
    row.g_ok = row.mu_G == row.expected_G;
    acc += row.mu_F;
    rep.partial_sums.push_back(acc);
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace zolab::kron
