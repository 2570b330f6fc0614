#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace sklab {

// Philox 4x64 with 10 rounds (Salmon, Moraes, Dror, Shaw; SC'11): a
// counter-based generator, so every draw is a pure function of
// (key, counter).  A generator instance is identified by a 128-bit key
// (seed, stream); Monte Carlo replica r uses stream r, which makes runs
// reproducible from (seed, r) alone, independent of scheduling or the
// number of workers.
//
// The counter is incremented before each block, so the raw output stream
// for key (seed, stream) matches numpy.random.Philox with
// key = seed + (stream << 64).
class Philox {
 public:
  using result_type = std::uint64_t;

  explicit Philox(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : key0_(seed), key1_(stream) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    if (at_ == 4) {
      advance_block();
      at_ = 0;
    }
    return block_[at_++];
  }

  // Uniform on the open interval (0,1) with 53-bit resolution; never
  // returns 0 or 1, so logs of it are always finite.
  double uniform() noexcept {
    return static_cast<double>(operator()() >> 11) * 0x1.0p-53 + 0x1.0p-54;
  }

  // Standard exponential by inversion.
  double exponential() noexcept { return -std::log(uniform()); }

 private:
  struct U128 {
    std::uint64_t hi, lo;
  };
  static U128 mul128(std::uint64_t a, std::uint64_t b) noexcept {
    const auto p = static_cast<unsigned __int128>(a) * b;
    return {static_cast<std::uint64_t>(p >> 64), static_cast<std::uint64_t>(p)};
  }

  void advance_block() noexcept {
    if (++ctr0_ == 0)
      if (++ctr1_ == 0)
        if (++ctr2_ == 0) ++ctr3_;
    std::uint64_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
    std::uint64_t k0 = key0_, k1 = key1_;
    for (int round = 0; round < 10; ++round) {
      const U128 p0 = mul128(kMul0, c0);
      const U128 p1 = mul128(kMul1, c2);
      c0 = p1.hi ^ c1 ^ k0;
      c1 = p1.lo;
      c2 = p0.hi ^ c3 ^ k1;
      c3 = p0.lo;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    block_ = {c0, c1, c2, c3};
  }

  static constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

  std::uint64_t key0_, key1_;
  std::uint64_t ctr0_ = 0, ctr1_ = 0, ctr2_ = 0, ctr3_ = 0;
  std::array<std::uint64_t, 4> block_{};
  int at_ = 4;
};

// Stream-id layout shared by all simulations: the high byte says what the
// stream is used for, the rest indexes the replica.  Keeps model draws,
// limit-series draws and auxiliary randomness on disjoint streams even when
// they share a seed.
inline constexpr std::uint64_t kStreamModel = 0;
inline constexpr std::uint64_t kStreamLimit = 1;
inline constexpr std::uint64_t kStreamAux = 2;

constexpr std::uint64_t stream_id(std::uint64_t kind, std::uint64_t replica) noexcept {
  return (kind << 56) | (replica & 0x00FF'FFFF'FFFF'FFFFULL);
}

}  // namespace sklab
