#include "sparse_demo.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "rpup/decimation.hpp"
#include "rpup/errors.hpp"
#include "rpup/paraunitary.hpp"
#include "rpup/rng.hpp"

namespace rpup::tools {
namespace {

// One compressive measurement: feed k+1 blocks through the lattice at the
// maximal factor q = k+1 and keep the single retained block.
std::vector<double> measure(const ParaunitarySpec& spec,
                            const DecimationSchedule& schedule,
                            const std::vector<double>& signal) {
  return forward_decimated(spec, signal, schedule).retained;
}

std::vector<double> backproject(const ParaunitarySpec& spec,
                                const DecimationSchedule& schedule,
                                const std::vector<double>& retained) {
  return adjoint_decimated(spec, retained, schedule);
}

// Distinct support indices drawn without replacement.
std::vector<std::size_t> draw_support(RandomStream& stream, std::size_t length,
                                      std::size_t count) {
  std::vector<std::size_t> support;
  support.reserve(count);
  while (support.size() < count) {
    const std::size_t candidate =
        static_cast<std::size_t>(stream.next_bits() % length);
    if (std::find(support.begin(), support.end(), candidate) == support.end())
      support.push_back(candidate);
  }
  return support;
}

bool run_trial(const SparseDemoConfig& config, std::uint64_t op_seed,
               std::uint64_t signal_seed) {
  const std::size_t length = (config.k_order + 1) * config.m;
  const ParaunitarySpec spec{config.m, config.k_order, op_seed, 0};

  DecimationSchedule schedule;
  schedule.append(config.k_order + 1, config.k_order + 1);

  // Ground truth: random support, amplitudes bounded away from zero.
  RandomStream signal_stream(signal_seed);
  const auto support = draw_support(signal_stream, length, config.sparsity);
  std::vector<double> truth(length, 0.0);
  for (const std::size_t idx : support) {
    const double magnitude = 0.5 + signal_stream.uniform_unit();
    truth[idx] = signal_stream.sample_sign() * magnitude;
  }

  const std::vector<double> y = measure(spec, schedule, truth);

  // Column norms of the effective operator, probed through forward applies of
  // unit impulses. The operator keeps orthonormal rows, not columns, so the
  // matching step must score by normalized correlation.
  std::vector<std::vector<double>> columns(length);
  std::vector<double> norms(length);
  {
    std::vector<double> impulse(length, 0.0);
    for (std::size_t j = 0; j < length; ++j) {
      impulse[j] = 1.0;
      columns[j] = measure(spec, schedule, impulse);
      impulse[j] = 0.0;
      double sq = 0.0;
      for (const double v : columns[j]) sq += v * v;
      norms[j] = std::sqrt(sq);
    }
  }

  // Orthogonal matching pursuit, correlating through the adjoint.
  std::vector<std::size_t> selected;
  Eigen::VectorXd target(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i)
    target(static_cast<Eigen::Index>(i)) = y[i];
  Eigen::VectorXd residual = target;

  for (std::size_t iter = 0; iter < config.sparsity; ++iter) {
    std::vector<double> r(residual.size());
    for (Eigen::Index i = 0; i < residual.size(); ++i)
      r[static_cast<std::size_t>(i)] = residual(i);
    const std::vector<double> correlation = backproject(spec, schedule, r);

    std::size_t best = length;
    double best_score = -1.0;
    for (std::size_t j = 0; j < length; ++j) {
      if (norms[j] < 1e-12) continue;
      if (std::find(selected.begin(), selected.end(), j) != selected.end())
        continue;
      const double score = std::abs(correlation[j]) / norms[j];
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    if (best == length) return false;
    selected.push_back(best);

    Eigen::MatrixXd basis(static_cast<Eigen::Index>(y.size()),
                          static_cast<Eigen::Index>(selected.size()));
    for (std::size_t c = 0; c < selected.size(); ++c)
      for (std::size_t i = 0; i < y.size(); ++i)
        basis(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
            columns[selected[c]][i];
    const Eigen::VectorXd weights = basis.colPivHouseholderQr().solve(target);
    residual = target - basis * weights;
  }

  std::vector<std::size_t> a = selected;
  std::vector<std::size_t> b = support;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

SparseDemoResult run_sparse_demo(const SparseDemoConfig& config) {
  if (config.m == 0 || config.m % 2 != 0)
    throw ValidationError("sparse demo requires a positive even block size");
  if (config.trials == 0)
    throw ValidationError("sparse demo requires at least one trial");
  if (config.sparsity >= config.m)
    throw ValidationError(
        "sparsity must be below the measurement count for recovery");

  SparseDemoResult result;
  result.trials = config.trials;
  for (std::size_t t = 0; t < config.trials; ++t) {
    const std::uint64_t op_seed = derive_child_seed(config.seed, 2 * t);
    const std::uint64_t signal_seed = derive_child_seed(config.seed, 2 * t + 1);
    if (config.sparsity == 0 || run_trial(config, op_seed, signal_seed))
      ++result.exact_recoveries;
  }
  result.rate = static_cast<double>(result.exact_recoveries) /
                static_cast<double>(result.trials);
  return result;
}

}  // namespace rpup::tools
