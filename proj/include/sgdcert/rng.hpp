#ifndef SGDCERT_RNG_HPP
#define SGDCERT_RNG_HPP

#include <cstdint>

#include "sgdcert/types.hpp"

namespace sgdcert {

// Finalizer of the SplitMix64 generator (Steele, Lea & Flood); a full-avalanche
// 64-bit mixing function. Used both as the output stage of Rng and to derive
// independent stream seeds from (master seed, stream index).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Seedable deterministic random number generator.
///
/// The generator is SplitMix64 and is fixed for the lifetime of this project;
/// every experiment artifact depends on it bitwise. State transition:
///
///     state <- state + 0x9E3779B97F4A7C15   (the 64-bit golden gamma)
///     output = mix64(state)
///
/// Independent replica streams are derived with `stream(master, index)`,
/// which seeds a fresh generator with mix64(master + (index + 1) * gamma).
/// Mixing gives full 64-bit avalanche, so nearby master seeds or indices
/// still produce uncorrelated streams.
class Rng {
 public:
  static constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Independent stream for replica `index` under `master` seed.
  static Rng stream(std::uint64_t master, std::uint64_t index) {
    return Rng(mix64(master + (index + 1) * kGoldenGamma));
  }

  std::uint64_t next_u64() {
    state_ += kGoldenGamma;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random mantissa bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Multiply-high mapping; the bias of ~n/2^64 is
  /// far below anything a desk-scale chi-squared test can see.
  Index next_index(Index n) {
    const auto wide = static_cast<unsigned __int128>(next_u64());
    return static_cast<Index>((wide * static_cast<std::uint64_t>(n)) >> 64);
  }

  /// Standard normal deviate (Box-Muller; the spare half is cached).
  double next_gaussian();

  std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Vector of independent standard normal entries.
DenseVector gaussian_vector(Rng& rng, Index dim);

/// Uniform draw from the closed ball of radius `radius` around `center`,
/// resampled in the (practically unreachable) case that it lands on the
/// center itself.
DenseVector sample_in_ball(Rng& rng, const DenseVector& center, double radius);

}  // namespace sgdcert

#endif  // SGDCERT_RNG_HPP
