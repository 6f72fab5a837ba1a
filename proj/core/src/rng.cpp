#include "rpup/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rpup/errors.hpp"

namespace rpup {
namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) noexcept {
  return (x << k) | (x >> (64 - k));
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed) noexcept {
  // splitmix64 expansion; guarantees a nonzero xoshiro state
  std::uint64_t z = seed;
  for (auto& w : state_) {
    z += 0x9e3779b97f4a7c15ull;
    w = mix64(z);
  }
}

std::uint64_t RandomStream::next_bits() noexcept {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform_unit();  // (0, 1], keeps log finite
  const double u2 = uniform_unit();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

// Marsaglia-Tsang squeeze; valid for shape >= 1.
double RandomStream::gamma_unit_scale(double shape) noexcept {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_unit();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double RandomStream::sample_angle(std::size_t d) {
  if (d < 1) throw ValidationError("sample_angle: span d must be >= 1");
  if (d == 1) {
    // density 1/pi on the open interval
    double u;
    do {
      u = uniform_unit();
    } while (u == 0.0);
    return std::numbers::pi * (u - 0.5);
  }
  // theta = arcsin(2B - 1) with B ~ Beta(d/2, d/2) has density
  // proportional to cos^(d-1)(theta); both gamma shapes are >= 1 here
  const double a = 0.5 * double(d);
  const double g1 = gamma_unit_scale(a);
  const double g2 = gamma_unit_scale(a);
  const double b = g1 / (g1 + g2);
  return std::asin(2.0 * b - 1.0);
}

SeedHierarchy SeedHierarchy::for_transform(std::uint64_t root, std::size_t m,
                                           std::size_t subsets) {
  if (m < 1) throw ValidationError("transform size must be >= 1");
  SeedHierarchy h;
  h.root_seed = root;
  h.num_subsets = subsets ? subsets : m;
  h.total_angles = m * (m - 1) / 2;
  h.subset_size = (h.total_angles + h.num_subsets - 1) / h.num_subsets;
  return h;
}

std::uint64_t SeedHierarchy::subset_seed(std::size_t k) const {
  if (k >= num_subsets) throw ValidationError("subset index out of range");
  return derive_child_seed(angle_domain(), k);
}

std::size_t SeedHierarchy::subset_end(std::size_t k) const noexcept {
  const std::size_t e = (k + 1) * subset_size;
  return e < total_angles ? e : total_angles;
}

std::vector<double> angle_subset(const SeedHierarchy& h, std::size_t k,
                                 TraversalOrder order,
                                 std::span<const std::size_t> spans) {
  const std::size_t begin = h.subset_begin(k);
  const std::size_t end = h.subset_end(k);  // throws via subset_seed below if k bad
  RandomStream stream(h.subset_seed(k));
  const std::size_t n = end > begin ? end - begin : 0;
  if (spans.size() < n) throw ValidationError("angle_subset: spans shorter than subset");
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = stream.sample_angle(spans[t]);
  if (order == TraversalOrder::reverse) std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace rpup
