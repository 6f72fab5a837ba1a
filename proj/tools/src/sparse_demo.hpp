#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace rpup::tools {

// Matching-pursuit recovery study over the maximally decimated sampling
// operator. The solver sees the operator only through forward and adjoint
// applications, never as an explicit matrix.
struct SparseDemoConfig {
  std::size_t m = 16;
  std::size_t k_order = 3;
  std::size_t sparsity = 3;
  std::size_t trials = 100;
  std::uint64_t seed = 0;
};

struct SparseDemoResult {
  std::size_t trials = 0;
  std::size_t exact_recoveries = 0;
  double rate = 0.0;
};

SparseDemoResult run_sparse_demo(const SparseDemoConfig& config);

}  // namespace rpup::tools
