#pragma once

#include <cstddef>
#include <cstdint>
#include <memory_resource>
#include <span>
#include <utility>

#include "rpup/matrix.hpp"

namespace rpup {

// A deterministic random unitary: size, seed, and the subset partition of its
// angle sequence. subsets = 0 selects the default N_s = M.
struct UnitarySpec {
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::size_t subsets = 0;
};

// First n rows of the full m-point unitary with the same seed.
struct ProjectionSpec {
  std::size_t m = 0;
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::size_t subsets = 0;
};

constexpr std::size_t rotation_count(std::size_t m) noexcept {
  return m * (m - 1) / 2;
}

// Rotations executed by an n-row projection: whole stages i >= n are skipped.
constexpr std::size_t executed_rotation_count(std::size_t m, std::size_t n) noexcept {
  const std::size_t tail = (m > n) ? (m - n - 1) : 0;
  return rotation_count(m) - tail * (tail + 1) / 2;
}

// Plane (i, j) of the flat plan index: stages i ascending, j ascending inside.
std::pair<std::size_t, std::size_t> plane_of_flat(std::size_t m, std::size_t flat);

// y = U x, in place. Working memory is bounded by the subset-seed vector plus
// O(1); angles are streamed, never buffered, on this path.
void apply_unitary(const UnitarySpec& spec, std::span<double> x,
                   std::pmr::memory_resource* mem = std::pmr::get_default_resource());

// y -> U^T y, in place: signs first, then the rotations in reverse order with
// negated angles, regenerated subset by subset. Working memory is bounded by
// the seed vector plus one subset buffer.
void apply_unitary_inverse(const UnitarySpec& spec, std::span<double> y,
                           std::pmr::memory_resource* mem = std::pmr::get_default_resource());

// Dense U for oracles, stats and reports; column k equals apply_unitary(e_k).
Matrix materialize(const UnitarySpec& spec);

// out = A x where A is the first spec.n rows of the spec.m unitary. Executes
// only stages 0..n-1 and the first n signs.
void project(const ProjectionSpec& spec, std::span<const double> x,
             std::span<double> out,
             std::pmr::memory_resource* mem = std::pmr::get_default_resource());

// out = A^T y: y is sign-flipped, zero-padded to m, and the retained
// rotations are traversed backwards.
void project_transpose(const ProjectionSpec& spec, std::span<const double> y,
                       std::span<double> out,
                       std::pmr::memory_resource* mem = std::pmr::get_default_resource());

}  // namespace rpup
