#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "zolab/dyadic.hpp"

namespace zolab {

/// Threefry-2x64 with 20 rounds (the Random123 counter-based generator).
/// Stateless: the output is a pure function of (counter, key).
struct Threefry2x64 {
  using Word2 = std::array<std::uint64_t, 2>;

  static constexpr std::uint64_t rotl(std::uint64_t x, unsigned r) {
    return (x << r) | (x >> (64U - r));
  }

  static constexpr Word2 apply(Word2 ctr, Word2 key) {
    constexpr unsigned kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};
    const std::uint64_t ks[3] = {key[0], key[1], 0x1BD11BDAA9FC1A22ULL ^ key[0] ^ key[1]};
    std::uint64_t x0 = ctr[0] + ks[0];
    std::uint64_t x1 = ctr[1] + ks[1];
    for (unsigned r = 0; r < 20; ++r) {
      x0 += x1;
      x1 = rotl(x1, kRot[r % 8]);
      x1 ^= x0;
      if ((r + 1) % 4 == 0) {
        const unsigned inj = (r + 1) / 4;
        x0 += ks[inj % 3];
        x1 += ks[(inj + 1) % 3] + inj;
      }
    }
    return {x0, x1};
  }
};

inline double u64_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Keyed digest of a dyadic rational's canonical (sign, exp, |num|) encoding.
/// Identical elements digest identically no matter how they were produced.
inline std::uint64_t element_digest(std::uint64_t seed, const Dyadic& d) {
  const Threefry2x64::Word2 key = {seed, 0x6c616d6264615f74ULL};
  Threefry2x64::Word2 state = {static_cast<std::uint64_t>(d.exp()),
                               static_cast<std::uint64_t>(d.sign() + 1)};
  state = Threefry2x64::apply(state, key);
  const auto* z = d.num().get_mpz_t();
  const std::size_t limbs = mpz_size(z);
  for (std::size_t i = 0; i < limbs; ++i) {
    const auto limb = static_cast<std::uint64_t>(mpz_getlimbn(z, i));
    state = Threefry2x64::apply({state[0] ^ limb, state[1] + i + 1}, key);
  }
  return state[0];
}

/// Bernoulli(p) retention decision for an element; depends only on
/// (seed, element), never on enumeration order or window.
inline bool thinning_keeps(std::uint64_t seed, double p, const Dyadic& d) {
  if (p >= 1.0) return true;
  return u64_to_unit(element_digest(seed, d)) < p;
}

/// Sequential stream over the counter-based generator. Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) : key_{seed, stream} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    auto out = Threefry2x64::apply({counter_++, 0}, key_);
    spare_ = out[1];
    have_spare_ = true;
    return out[0];
  }

  double uniform() { return u64_to_unit((*this)()); }

  /// Uniform integer in [0, n) by rejection, platform independent.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = max() - (max() % n);
    std::uint64_t v = 0;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % n;
  }

  std::int64_t between(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform dyadic in [lo, lo + width) with `bits` random fractional bits
  /// relative to `width` (width itself dyadic).
  Dyadic dyadic_in(const Dyadic& lo, const Dyadic& width, unsigned bits) {
    Integer r;
    for (unsigned got = 0; got < bits; got += 64) {
      r <<= 64;
      r += from_uint64((*this)());
    }
    const unsigned extra = ((bits + 63) / 64) * 64 - bits;
    if (extra > 0) r >>= extra;
    return lo + width * Dyadic(std::move(r), bits);
  }

 private:
  std::array<std::uint64_t, 2> key_;
  std::uint64_t counter_ = 0;
  std::uint64_t spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace zolab
