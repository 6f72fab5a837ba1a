#include "rpup/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rpup/errors.hpp"

namespace rpup {

SampleSummary entry_moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw ValidationError("entry_moments: need at least 2 samples");
  const double dn = double(n);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= dn;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : samples) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  m2 /= dn;
  m3 /= dn;
  m4 /= dn;

  SampleSummary s;
  s.count = n;
  s.mean = mean;
  s.variance = m2 * dn / (dn - 1.0);
  if (m2 > 0.0) {
    const double g1 = m3 / std::pow(m2, 1.5);
    const double g2 = m4 / (m2 * m2) - 3.0;
    s.skewness = n > 2 ? g1 * std::sqrt(dn * (dn - 1.0)) / (dn - 2.0) : g1;
    s.excess_kurtosis =
        n > 3 ? ((dn - 1.0) / ((dn - 2.0) * (dn - 3.0))) * ((dn + 1.0) * g2 + 6.0) : g2;
  }
  return s;
}

double ks_critical(double alpha) {
  if (alpha <= 0.0 || alpha >= 1.0) throw ValidationError("ks: alpha must be in (0,1)");
  return std::sqrt(-0.5 * std::log(alpha / 2.0));
}

KsResult ks_normal(std::span<const double> samples, double sigma, double alpha) {
  if (samples.empty()) throw ValidationError("ks_normal: empty sample");
  if (sigma <= 0.0) throw ValidationError("ks_normal: sigma must be positive");
  std::vector<double> x(samples.begin(), samples.end());
  std::sort(x.begin(), x.end());
  const double n = double(x.size());
  const double inv_denom = 1.0 / (sigma * std::sqrt(2.0));
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double cdf = 0.5 * std::erfc(-x[i] * inv_denom);
    d = std::max(d, cdf - double(i) / n);
    d = std::max(d, double(i + 1) / n - cdf);
  }
  KsResult r;
  r.statistic = d;
  r.threshold = ks_critical(alpha) / std::sqrt(n);
  r.pass = d <= r.threshold;
  return r;
}

KsResult two_sample_ks(std::span<const double> a, std::span<const double> b,
                       double alpha) {
  if (a.empty() || b.empty()) throw ValidationError("two_sample_ks: empty sample");
  std::vector<double> xa(a.begin(), a.end()), xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());
  const double na = double(xa.size()), nb = double(xb.size());
  std::size_t ia = 0, ib = 0;
  double d = 0.0;
  while (ia < xa.size() && ib < xb.size()) {
    const double v = std::min(xa[ia], xb[ib]);
    while (ia < xa.size() && xa[ia] <= v) ++ia;
    while (ib < xb.size() && xb[ib] <= v) ++ib;
    d = std::max(d, std::abs(double(ia) / na - double(ib) / nb));
  }
  KsResult r;
  r.statistic = d;
  r.threshold = ks_critical(alpha) * std::sqrt((na + nb) / (na * nb));
  r.pass = d <= r.threshold;
  return r;
}

Matrix haar_qr(std::size_t m, RandomStream& stream) {
  if (m < 1) throw ValidationError("haar_qr: m must be >= 1");
  Eigen::MatrixXd g(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) g(r, c) = stream.normal();
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
  for (std::size_t j = 0; j < m; ++j)
    if (r_mat(j, j) < 0.0) q.col(j) = -q.col(j);
  Matrix out(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c) out(r, c) = q(r, c);
  return out;
}

CorrelationReport correlation_impulse(std::span<const Matrix> ensemble,
                                      std::size_t pair_count, RandomStream& stream) {
  if (ensemble.size() < 2)
    throw ValidationError("correlation_impulse: need an ensemble of at least 2 matrices");
  const std::size_t cells = ensemble[0].rows() * ensemble[0].cols();
  if (cells < 2) throw ValidationError("correlation_impulse: matrices too small");
  const std::size_t n = ensemble.size();

  CorrelationReport report;
  std::vector<double> va(n), vb(n);
  for (std::size_t p = 0; p < pair_count; ++p) {
    std::size_t p1 = std::size_t(stream.next_bits() % cells);
    std::size_t p2;
    do {
      p2 = std::size_t(stream.next_bits() % cells);
    } while (p2 == p1);

    double ma = 0.0, mb = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      va[e] = ensemble[e].data()[p1];
      vb[e] = ensemble[e].data()[p2];
      ma += va[e];
      mb += vb[e];
    }
    ma /= double(n);
    mb /= double(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
      saa += (va[e] - ma) * (va[e] - ma);
      sbb += (vb[e] - mb) * (vb[e] - mb);
      sab += (va[e] - ma) * (vb[e] - mb);
    }
    ++report.pairs_tested;
    if (saa <= 0.0 || sbb <= 0.0) {
      ++report.degenerate_pairs;
      continue;
    }
    const double rho = sab / std::sqrt(saa * sbb);
    report.max_abs_correlation = std::max(report.max_abs_correlation, std::abs(rho));
  }
  return report;
}

std::string to_csv(std::span<const StatsRow> rows) {
  std::string out = "test,statistic,threshold,result\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.9g,%.9g,%s\n", row.name.c_str(),
                  row.statistic, row.threshold, row.pass ? "pass" : "fail");
    out += buf;
  }
  return out;
}

}  // namespace rpup
