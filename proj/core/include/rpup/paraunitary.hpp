#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rpup/givens.hpp"
#include "rpup/matrix.hpp"
#include "rpup/rng.hpp"

namespace rpup {

// Order-K cascade of random unitaries U_0..U_K separated by one-block delays
// on the bottom half of the channels. Channel count must be even.
struct ParaunitarySpec {
  std::size_t m = 0;         // channels
  std::size_t k = 0;         // order (delay stages)
  std::uint64_t seed = 0;    // master; stage i uses derive_child_seed(seed, i)
  std::size_t subsets = 0;   // per-stage subset count, 0 = default

  UnitarySpec stage(std::size_t i) const {
    return {m, derive_child_seed(seed, i), subsets};
  }
};

struct PolyphaseCoeffs {
  std::size_t m = 0;
  std::vector<Matrix> h;  // h[i] is the coefficient of z^-i; K+1 entries

  std::size_t order() const noexcept { return h.empty() ? 0 : h.size() - 1; }
};

// Streaming lattice. One instance serves one direction at a time: the delay
// registers of the forward and inverse structures are different, so mixing
// forward_block and inverse_block calls without reset() is rejected.
class Lattice {
public:
  explicit Lattice(const ParaunitarySpec& spec);

  const ParaunitarySpec& spec() const noexcept { return spec_; }
  std::size_t order() const noexcept { return spec_.k; }

  // state size is exactly k * m/2 samples
  std::size_t state_samples() const noexcept { return registers_.size(); }

  // x -> U_K L ... L U_0 x with L delaying the bottom half one block
  void forward_block(std::span<double> x);

  // y -> U_0^T L~ ... L~ U_K^T y with L~ delaying the top half; cascading
  // forward then inverse reproduces the input delayed by exactly k blocks
  void inverse_block(std::span<double> y);

  // Feed k zero blocks and return their outputs (k*m samples, flat).
  // Registers are zero afterwards.
  std::vector<double> flush();

  // Reset registers, block counter and direction latch.
  void reset();

  // Takes effect at the next block boundary. Added stages use the canonical
  // derived seeds and zero registers; removed stages drop theirs. Matching
  // forward/inverse order changes are the caller's job.
  void set_order(std::size_t new_k);

  std::size_t blocks_processed() const noexcept { return blocks_; }

private:
  enum class Direction { idle, forward, inverse };

  ParaunitarySpec spec_;
  std::vector<double> registers_;  // k slots of m/2 samples
  std::size_t blocks_ = 0;
  Direction direction_ = Direction::idle;

  void require_direction(Direction d);
};

// H_0..H_K from the stage recursion: starting from E(z) = U_0, appending a
// stage multiplies by L(z) U_n, i.e. F_k = (U_n P_top) E_k + (U_n P_bot) E_{k-1}
// where P_top/P_bot project onto the undelayed/delayed channel halves.
PolyphaseCoeffs coefficients(const ParaunitarySpec& spec);

// Inverse system G_i = H_{K-i}^T; block convolution of G with H is the
// identity at lag K and zero elsewhere.
PolyphaseCoeffs paraconjugate(const PolyphaseCoeffs& coeffs);

constexpr std::size_t filter_length(const ParaunitarySpec& spec) noexcept {
  return (spec.k + 1) * spec.m;
}

}  // namespace rpup
