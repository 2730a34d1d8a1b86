#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "zolab/classify.hpp"
#include "zolab/dyadic.hpp"
#include "zolab/error.hpp"
#include "zolab/lambda.hpp"

namespace zolab {

/// Nonnegative step function: value on [a, b), zero off the pieces.
struct StepFunction {
  struct Piece {
    Rational a, b, value;
  };
  std::vector<Piece> pieces;  // disjoint, ascending

  Rational operator()(const Rational& x) const {
    for (const auto& p : pieces)
      if (p.a <= x && x < p.b) return p.value;
    return 0;
  }

  bool disjoint() const {
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (!(pieces[i].a < pieces[i].b) || sgn(pieces[i].value) < 0) return false;
      if (i > 0 && pieces[i].a < pieces[i - 1].b) return false;
    }
    return true;
  }

  nlohmann::json to_json() const {
    auto arr = nlohmann::json::array();
    for (const auto& p : pieces) arr.push_back({p.a.get_str(), p.b.get_str(), p.value.get_str()});
    return arr;
  }
};

namespace witness {

/// f and the sets where Σ f(x + λ) provably stays bounded (I_C) or blows up
/// (I_D). Everything lives on the rescaled axis Λ / ε'; g and the *_orig
/// windows are the same objects on the original axis, g(y) = f(y / ε').
struct Type2Witness {
  Rational eps_prime;
  LambdaSpec rescaled;
  RatioChain chain;
  StepFunction f, g;
  Window ic, id;
  Window ic_orig, id_orig;

  nlohmann::json to_json() const {
    auto win = [](const Window& w) { return nlohmann::json::array({w.lo.get_str(), w.hi.get_str()}); };
    return {{"eps_prime", eps_prime.get_str()},
            {"chain", chain.to_json()},
            {"f_rescaled", f.to_json()},
            {"g_original", g.to_json()},
            {"I_C", win(ic)},
            {"I_D", win(id)},
            {"I_C_original", win(ic_orig)},
            {"I_D_original", win(id_orig)}};
  }
};

/// Puts f = 1 / a'_{m_k} on [m_k - 2, m_k) along the rescaled axis, after
/// re-deriving every cell count the chain relies on.
inline Type2Witness build_type2_witness(const LambdaSpec& spec, const Rational& eps, const RatioChain& chain,
                                        const EnumOptions& opt = {}) {
  if (!spec.exact()) throw InexactSpec("witness construction needs an exact spec");
  if (sgn(eps) <= 0) throw InvalidArgument("eps must be positive");
  Type2Witness w;
  w.eps_prime = eps / 3;
  if (chain.eps_prime != w.eps_prime) throw InvalidChain("chain was built for a different cell width");
  w.rescaled = affine(spec, Rational(1) / w.eps_prime, Rational(0));
  w.chain = chain;
  if (chain.size() > 0) {
    const Integer lo = chain.indices.front() - 3;
    const Integer hi = chain.indices.back() + 1;
    if (lo >= hi) throw InvalidChain("chain indices must increase");
    const auto cv = count_cells(w.rescaled, Rational(1), Window(Rational(lo), Rational(hi)), opt);
    if (!classify::chain_valid(chain, cv)) throw InvalidChain("chain inequalities do not hold for this set");
  }
  for (std::size_t k = 0; k < chain.size(); ++k) {
    const Rational m(chain.indices[k]);
    const Rational v = make_rational(Integer(1), chain.numerators[k]);
    w.f.pieces.push_back({m - 2, m, v});
    w.g.pieces.push_back({(m - 2) * w.eps_prime, m * w.eps_prime, v});
  }
  w.ic = Window(Rational(0), Rational(1));
  w.id = Window(Rational(-2), Rational(-1));
  w.ic_orig = Window(Rational(0), w.eps_prime);
  w.id_orig = Window(-2 * w.eps_prime, -w.eps_prime);
  return w;
}

/// Σ_{λ ∈ Λ ∩ [a_k - x, b_k - x)} f(x + λ) for the k-th piece (k from 1),
/// computed as value times an exact count.
inline Rational block_contribution(const StepFunction& f, const LambdaSpec& spec, std::size_t k,
                                   const Rational& x, const EnumOptions& opt = {}) {
  if (k == 0 || k > f.pieces.size()) throw InvalidArgument("piece index out of range");
  const auto& p = f.pieces[k - 1];
  if (sgn(p.value) == 0) return 0;
  return p.value * Rational(count(spec, p.a - x, p.b - x, opt));
}

enum class CertKind { None, CUpper, DLower };

struct SumProfile {
  Rational x;
  CertKind cert = CertKind::None;
  std::vector<Rational> blocks;      // s_k(x), k = 1..K
  std::vector<Rational> cumulative;  // Σ_{j<=k} s_j(x)
  std::vector<Rational> bounds;      // 2^-k (C side) or 1 (D side)
  std::vector<bool> holds;

  bool all_hold() const {
    for (bool h : holds)
      if (!h) return false;
    return true;
  }
  Rational total() const { return cumulative.empty() ? Rational(0) : cumulative.back(); }
};

inline std::string cert_name(CertKind c) {
  switch (c) {
    case CertKind::CUpper: return "C-upper";
    case CertKind::DLower: return "D-lower";
    case CertKind::None: return "none";
  }
  return "none";
}

inline std::vector<SumProfile> sum_profile(const Type2Witness& w, const std::vector<Rational>& xs,
                                           std::size_t K, const EnumOptions& opt = {}) {
  if (K > w.f.pieces.size()) throw InvalidArgument("profile depth exceeds the number of pieces");
  std::vector<SumProfile> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    SumProfile sp;
    sp.x = x;
    if (w.ic.contains(x)) sp.cert = CertKind::CUpper;
    else if (w.id.contains(x)) sp.cert = CertKind::DLower;
    Rational acc(0);
    for (std::size_t k = 1; k <= K; ++k) {
      Rational b = block_contribution(w.f, w.rescaled, k, x, opt);
      acc += b;
      sp.blocks.push_back(b);
      sp.cumulative.push_back(acc);
      switch (sp.cert) {
        case CertKind::CUpper: {
          Rational bound = scale_pow2(Rational(1), -static_cast<std::int64_t>(k));
          sp.holds.push_back(b <= bound);
          sp.bounds.push_back(bound);
          break;
        }
        case CertKind::DLower:
          sp.holds.push_back(b >= 1);
          sp.bounds.push_back(Rational(1));
          break;
        case CertKind::None:
          sp.holds.push_back(true);
          sp.bounds.push_back(Rational(0));
          break;
      }
    }
    out.push_back(std::move(sp));
  }
  return out;
}

/// `count` points a + i * len / count, i = 0..count-1 (dyadic when a and
/// len / count are).
inline std::vector<Rational> equispaced(const Window& w, int count) {
  std::vector<Rational> xs;
  const Rational step = (w.hi - w.lo) / count;
  for (int i = 0; i < count; ++i) xs.push_back(w.lo + step * i);
  return xs;
}

struct ProfileSummary {
  Rational c_max_cumulative{0};
  std::optional<Rational> d_min_cumulative;
  bool certificates_hold = true;
};

inline ProfileSummary summarize(const std::vector<SumProfile>& ps) {
  ProfileSummary s;
  for (const auto& p : ps) {
    s.certificates_hold = s.certificates_hold && p.all_hold();
    if (p.cert == CertKind::CUpper && p.total() > s.c_max_cumulative) s.c_max_cumulative = p.total();
    if (p.cert == CertKind::DLower && (!s.d_min_cumulative || p.total() < *s.d_min_cumulative))
      s.d_min_cumulative = p.total();
  }
  return s;
}

}  // namespace witness
}  // namespace zolab
