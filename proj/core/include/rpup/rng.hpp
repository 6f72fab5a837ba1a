#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rpup {

// Child-seed derivation: one avalanche mix over root + stride*(index+1).
// The constants are part of the reproducibility contract (see README);
// for a fixed root the map is injective in the index.
inline constexpr std::uint64_t kSeedStride = 0x9e3779b97f4a7c15ull;

constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z ^= z >> 30;
  z *= 0xbf58476d1ce4e5b9ull;
  z ^= z >> 27;
  z *= 0x94d049bb133111ebull;
  z ^= z >> 31;
  return z;
}

constexpr std::uint64_t derive_child_seed(std::uint64_t root,
                                          std::uint64_t index) noexcept {
  return mix64(root + kSeedStride * (index + 1));
}

// Deterministic stream: xoshiro256++ state seeded by splitmix64 expansion.
// Exclusive-access; make one stream per consumer.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) noexcept;

  std::uint64_t next_bits() noexcept;

  // uniform on [0, 1), 53 significant bits
  double uniform_unit() noexcept { return double(next_bits() >> 11) * 0x1.0p-53; }

  // standard normal, Box-Muller pair with one value cached
  double normal() noexcept;

  // +1.0 or -1.0, equiprobable
  double sample_sign() noexcept { return (next_bits() >> 63) ? 1.0 : -1.0; }

  // plane-rotation angle with density proportional to cos^(d-1) on (-pi/2, pi/2);
  // d is the index gap j - i of the rotation plane. Throws ValidationError if d < 1.
  double sample_angle(std::size_t d);

private:
  double gamma_unit_scale(double shape) noexcept;  // shape >= 1

  std::array<std::uint64_t, 4> state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Root seed plus the derived child domains that partition the angle sequence
// of an M-point transform into independently regenerable subsets.
// Immutable; shareable across threads.
struct SeedHierarchy {
  std::uint64_t root_seed = 0;
  std::size_t num_subsets = 1;
  std::size_t total_angles = 0;           // M(M-1)/2
  std::size_t subset_size = 0;            // ceil(total/num_subsets)

  // subsets = 0 selects the default N_s = M
  static SeedHierarchy for_transform(std::uint64_t root, std::size_t m,
                                     std::size_t subsets = 0);

  std::uint64_t angle_domain() const noexcept { return derive_child_seed(root_seed, 0); }
  std::uint64_t sign_domain() const noexcept { return derive_child_seed(root_seed, 1); }
  std::uint64_t subset_seed(std::size_t k) const;  // k < num_subsets

  // [begin, end) of subset k in flat angle indices
  std::size_t subset_begin(std::size_t k) const noexcept { return k * subset_size; }
  std::size_t subset_end(std::size_t k) const noexcept;
};

enum class TraversalOrder { forward, reverse };

// Regenerates the angles of subset k. spans[t] is the d value of the t-th
// angle of this subset (the rotation plan determines it). Reverse order is
// the exact element reversal of the forward sequence. At most subset_size
// angles are materialized.
std::vector<double> angle_subset(const SeedHierarchy& h, std::size_t k,
                                 TraversalOrder order,
                                 std::span<const std::size_t> spans);

}  // namespace rpup
