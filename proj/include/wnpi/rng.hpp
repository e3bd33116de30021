#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace wnpi {

/// Philox4x32-10 counter-based generator (Salmon et al.). Stateless: a
/// (counter, key) pair maps to four 32-bit words, so any sample can be
/// regenerated independently of the order in which samples are drawn.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter apply(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = std::uint64_t(kM0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kM1) * ctr[2];
      const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

/// Standard normal stream for one sample: normals are addressed by
/// (seed, sample index, position) only.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t sample)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)}, sample_(sample) {}

  /// Normals 2*block and 2*block + 1 of this sample (Box-Muller on 53-bit uniforms).
  std::array<double, 2> pair(std::uint32_t block) const {
    const auto w = Philox4x32::apply(
        {std::uint32_t(sample_), std::uint32_t(sample_ >> 32), block, 0u}, key_);
    const double u1 = to_unit_open(w[0], w[1]);
    const double u2 = to_unit_open(w[2], w[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586477 * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  template <class Out>
  void fill(Out& out, int count) const {
    for (int j = 0; j < count; j += 2) {
      const auto z = pair(std::uint32_t(j / 2));
      out[j] = z[0];
      if (j + 1 < count) out[j + 1] = z[1];
    }
  }

 private:
  // (0, 1]: never zero so the logarithm stays finite.
  static double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t(hi) << 21) | (std::uint64_t(lo) >> 11);
    return (double(bits) + 1.0) * 0x1.0p-53;
  }

  Philox4x32::Key key_;
  std::uint64_t sample_;
};

/// Sequential standard normals from one Philox stream, for generating test
/// data. Independent of NormalStream sample indices only through the key.
class NormalSequence {
 public:
  NormalSequence(std::uint64_t seed, std::uint64_t stream)
      : stream_(seed ^ 0x5DEECE66DULL, stream) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const auto z = stream_.pair(block_++);
    spare_ = z[1];
    have_spare_ = true;
    return z[0];
  }

 private:
  NormalStream stream_;
  std::uint32_t block_ = 0;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace wnpi
