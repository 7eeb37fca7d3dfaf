#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace drcount {

/// 64-bit finalizer from SplitMix64. Bijective on uint64.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a tag string.
std::uint64_t hash_tag(std::string_view tag);

/// Seed for an independent stream keyed by (master seed, index, stage tag).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::string_view tag);

/// Deterministic random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so all
/// real, integer and normal variates are derived here from raw engine words:
///   - uniform reals take the top 53 bits of one word,
///   - integers use rejection sampling on a power-of-two mask,
///   - normals use the Box-Muller transform (one word pair per variate).
/// Integer and uniform-real draws are bit-identical on every platform.
/// Normal draws go through std::log/std::cos/std::sqrt and are identical
/// wherever libm is correctly rounded for those calls (glibc, musl, MSVC UCRT
/// agree in practice).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform01();

  /// Uniform in [lo, hi]; returns lo when lo == hi.
  double uniform(double lo, double hi);

  /// Uniform integer in [lo, hi] inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

  double standard_normal();

  /// Child stream whose seed depends only on this stream's seed and the tag,
  /// never on how many draws have been taken.
  Rng fork(std::string_view tag, std::uint64_t index = 0) const {
    return Rng(derive_seed(seed_, index, tag));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace drcount
