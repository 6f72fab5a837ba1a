#pragma once

// Independent reference implementations and frozen expected values used to
// cross-check the library. Everything here favors clarity over speed.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "rpup/decimation.hpp"
#include "rpup/matrix.hpp"
#include "rpup/paraunitary.hpp"
#include "rpup/rng.hpp"

namespace oracle {

// chi-square 0.99 quantile at 24 degrees of freedom (25 equal-probability bins)
inline constexpr double kChi2Dof24Q99 = 42.979820;

inline double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Rejection sampler for the plane-rotation angle density, uniform envelope:
// density is proportional to cos^(d-1) which is bounded by 1.
inline double rejection_angle(rpup::RandomStream& stream, std::size_t d) {
  for (;;) {
    const double theta = std::numbers::pi * (stream.uniform_unit() - 0.5);
    const double accept = std::pow(std::cos(theta), double(d - 1));
    if (stream.uniform_unit() < accept) return theta;
  }
}

inline double angle_density(std::size_t d, double theta) {
  const double log_norm =
      std::lgamma(0.5 * double(d + 1)) - 0.5 * std::log(std::numbers::pi) -
      std::lgamma(0.5 * double(d));
  return std::exp(log_norm + double(d - 1) * std::log(std::cos(theta)));
}

// Equal-probability bin edges for the angle density, from a trapezoid CDF on
// a fine grid. Returns edges (bins+1 values) and the exact grid probability
// of each bin.
struct AngleBins {
  std::vector<double> edges;
  std::vector<double> probs;
};

inline AngleBins angle_equal_probability_bins(std::size_t d, std::size_t bins) {
  constexpr std::size_t kGrid = 1 << 16;
  const double lo = -0.5 * std::numbers::pi, hi = 0.5 * std::numbers::pi;
  const double step = (hi - lo) / double(kGrid);
  std::vector<double> cdf(kGrid + 1, 0.0);
  double prev = angle_density(d, lo + 1e-14);
  for (std::size_t i = 1; i <= kGrid; ++i) {
    const double x = lo + double(i) * step;
    const double cur = angle_density(d, std::min(x, hi - 1e-14));
    cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * step;
    prev = cur;
  }
  const double total = cdf[kGrid];

  AngleBins out;
  out.edges.push_back(lo);
  std::size_t gi = 0;
  for (std::size_t b = 1; b < bins; ++b) {
    const double target = total * double(b) / double(bins);
    while (gi < kGrid && cdf[gi + 1] < target) ++gi;
    // linear interpolation inside grid cell gi
    const double c0 = cdf[gi], c1 = cdf[gi + 1];
    const double frac = (c1 > c0) ? (target - c0) / (c1 - c0) : 0.0;
    out.edges.push_back(lo + (double(gi) + frac) * step);
  }
  out.edges.push_back(hi);
  for (std::size_t b = 0; b < bins; ++b) {
    auto cdf_at = [&](double x) {
      const double pos = (x - lo) / step;
      const std::size_t cell = std::min(std::size_t(pos), kGrid - 1);
      const double frac = pos - double(cell);
      return (cdf[cell] + frac * (cdf[cell + 1] - cdf[cell])) / total;
    };
    out.probs.push_back(cdf_at(out.edges[b + 1]) - cdf_at(out.edges[b]));
  }
  return out;
}

inline double chi_square_statistic(std::span<const double> samples,
                                   const AngleBins& bins) {
  std::vector<std::size_t> counts(bins.probs.size(), 0);
  for (double x : samples) {
    std::size_t b = 0;
    while (b + 1 < bins.probs.size() && x >= bins.edges[b + 1]) ++b;
    ++counts[b];
  }
  const double n = double(samples.size());
  double stat = 0.0;
  for (std::size_t b = 0; b < bins.probs.size(); ++b) {
    const double expected = n * bins.probs[b];
    const double diff = double(counts[b]) - expected;
    stat += diff * diff / expected;
  }
  return stat;
}

// y_t = sum_i H_i x_{t-i} over the whole stream, x_t = 0 outside the input
inline std::vector<double> block_convolution(const rpup::PolyphaseCoeffs& coeffs,
                                             std::span<const double> input,
                                             std::size_t out_blocks) {
  const std::size_t m = coeffs.m;
  const std::size_t in_blocks = input.size() / m;
  std::vector<double> out(out_blocks * m, 0.0);
  for (std::size_t t = 0; t < out_blocks; ++t)
    for (std::size_t i = 0; i < coeffs.h.size(); ++i) {
      if (i > t || t - i >= in_blocks) continue;
      const auto& h = coeffs.h[i];
      for (std::size_t r = 0; r < m; ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < m; ++c) acc += h(r, c) * input[(t - i) * m + c];
        out[t * m + r] += acc;
      }
    }
  return out;
}

// Full critically decimated run, then discard: the reference for the
// demand-driven path.
inline std::vector<double> discard_oracle(const rpup::ParaunitarySpec& spec,
                                          std::span<const double> input,
                                          const rpup::DecimationSchedule& schedule) {
  rpup::Lattice lattice(spec);
  const std::size_t m = spec.m;
  const std::size_t blocks = input.size() / m;
  const auto times = schedule.retained_times();
  std::vector<double> out;
  std::vector<double> block(m);
  std::size_t next = 0;
  for (std::size_t t = 0; t < blocks; ++t) {
    std::copy(input.begin() + long(t * m), input.begin() + long((t + 1) * m), block.begin());
    lattice.forward_block(block);
    if (next < times.size() && times[next] == t) {
      out.insert(out.end(), block.begin(), block.end());
      ++next;
    }
  }
  return out;
}

}  // namespace oracle
