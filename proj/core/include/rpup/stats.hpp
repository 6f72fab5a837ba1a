#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rpup/matrix.hpp"
#include "rpup/rng.hpp"

namespace rpup {

struct SampleSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double variance = 0.0;         // unbiased
  double skewness = 0.0;         // adjusted Fisher-Pearson
  double excess_kurtosis = 0.0;  // bias-adjusted
};

// count >= 2 required
SampleSummary entry_moments(std::span<const double> samples);

struct KsResult {
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

// asymptotic critical coefficient c(alpha) = sqrt(-ln(alpha/2)/2)
double ks_critical(double alpha);

// one-sample KS against a zero-mean normal with standard deviation sigma;
// threshold c(alpha)/sqrt(n)
KsResult ks_normal(std::span<const double> samples, double sigma, double alpha);

// two-sample KS; threshold c(alpha)*sqrt((n+m)/(n*m))
KsResult two_sample_ks(std::span<const double> a, std::span<const double> b,
                       double alpha);

// Reference Haar sampler: QR of a standard-normal matrix with the triangular
// factor's diagonal signs absorbed into Q. Without the sign step the result
// is not rotation invariant.
Matrix haar_qr(std::size_t m, RandomStream& stream);

struct CorrelationReport {
  double max_abs_correlation = 0.0;
  std::size_t pairs_tested = 0;
  std::size_t degenerate_pairs = 0;  // zero-variance positions, excluded from max
};

// Sample correlation between entry positions across an ensemble of equally
// sized matrices, over pair_count randomly chosen distinct position pairs.
CorrelationReport correlation_impulse(std::span<const Matrix> ensemble,
                                      std::size_t pair_count, RandomStream& stream);

// Report row of a test battery; serialized as CSV "test,statistic,threshold,result".
struct StatsRow {
  std::string name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

std::string to_csv(std::span<const StatsRow> rows);

}  // namespace rpup
