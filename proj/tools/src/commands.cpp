#include "commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

#include "rpup/decimation.hpp"
#include "rpup/errors.hpp"
#include "rpup/givens.hpp"
#include "rpup/paraunitary.hpp"
#include "rpup/rng.hpp"
#include "rpup/signal_file.hpp"
#include "rpup/stats.hpp"
#include "sparse_demo.hpp"

namespace rpup::tools {
namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

// Block size actually used by a file-driven op: the header value, which an
// explicit --m must agree with.
std::size_t resolve_block_size(std::size_t flag_m, const SignalFile& file) {
  const std::size_t from_file = file.block_size;
  require(flag_m == 0 || flag_m == from_file,
          "--m disagrees with the input file block size");
  require(from_file > 0, "input file has zero block size");
  require(file.samples.size() % from_file == 0,
          "input length is not a whole number of blocks");
  return from_file;
}

std::string load_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open schedule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

DecimationSchedule schedule_covering(const RunConfig& config,
                                     std::size_t total_blocks) {
  if (!config.schedule_path.empty())
    return DecimationSchedule::from_csv(load_text(config.schedule_path));
  require(config.q >= 1, "either --schedule or --q >= 1 is required");
  DecimationSchedule schedule;
  schedule.append(config.q, total_blocks);
  return schedule;
}

void write_blocks(const std::string& path, std::size_t block_size,
                  std::vector<double> samples) {
  require(block_size >= 1 && block_size <= 0xffff,
          "output block size must fit in 16 bits");
  SignalFile out;
  out.block_size = static_cast<std::uint16_t>(block_size);
  out.samples = std::move(samples);
  write_signal_file(path, out);
}

// ---- stats battery ---------------------------------------------------------
// The default battery covers the statistical claims of the transform family:
// entry gaussianity at M = 64, entry decorrelation at M = 16, and agreement
// with the sign-corrected QR reference at M = 32. Thresholds follow the
// acceptance gates; rows are deterministic in the seed.

std::vector<double> pooled_entries(std::uint64_t domain, std::size_t m,
                                   std::size_t count) {
  std::vector<double> entries;
  entries.reserve(count * m * m);
  for (std::size_t i = 0; i < count; ++i) {
    const Matrix u = materialize({m, derive_child_seed(domain, i), 0});
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) entries.push_back(u(r, c));
  }
  return entries;
}

std::vector<StatsRow> run_battery(std::uint64_t seed, double alpha) {
  std::vector<StatsRow> rows;

  {
    const std::size_t m = 64;
    const auto entries = pooled_entries(derive_child_seed(seed, 21), m, 200);
    const KsResult ks = ks_normal(entries, 1.0 / std::sqrt(double(m)), alpha);
    rows.push_back({"entry_gaussianity_ks", ks.statistic, ks.threshold, ks.pass});

    const SampleSummary moments = entry_moments(entries);
    const double variance_drift = std::abs(moments.variance * double(m) - 1.0);
    rows.push_back({"entry_variance_drift", variance_drift, 0.05,
                    variance_drift <= 0.05});
    const double kurt = std::abs(moments.excess_kurtosis);
    rows.push_back({"entry_excess_kurtosis", kurt, 0.15, kurt <= 0.15});
  }

  {
    const std::size_t m = 16;
    const std::uint64_t domain = derive_child_seed(seed, 22);
    std::vector<Matrix> ensemble;
    ensemble.reserve(500);
    for (std::size_t i = 0; i < 500; ++i)
      ensemble.push_back(materialize({m, derive_child_seed(domain, i), 0}));
    RandomStream pair_stream(derive_child_seed(seed, 23));
    const CorrelationReport report =
        correlation_impulse(ensemble, 200, pair_stream);
    rows.push_back({"pairwise_decorrelation", report.max_abs_correlation, 0.18,
                    report.max_abs_correlation <= 0.18});
  }

  {
    const std::size_t m = 32;
    const auto angle_entries =
        pooled_entries(derive_child_seed(seed, 24), m, 100);
    std::vector<double> qr_entries;
    qr_entries.reserve(100 * m * m);
    RandomStream qr_stream(derive_child_seed(seed, 25));
    for (std::size_t i = 0; i < 100; ++i) {
      const Matrix q = haar_qr(m, qr_stream);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) qr_entries.push_back(q(r, c));
    }
    const KsResult ks = two_sample_ks(angle_entries, qr_entries, alpha);
    rows.push_back(
        {"rotation_vs_factorized_ks", ks.statistic, ks.threshold, ks.pass});
  }

  return rows;
}

}  // namespace

std::uint64_t parse_seed_hex(const std::string& text) {
  std::string_view view = text;
  if (view.size() >= 2 && view[0] == '0' && (view[1] == 'x' || view[1] == 'X'))
    view.remove_prefix(2);
  require(!view.empty() && view.size() <= 16,
          "seed must be a 64-bit hexadecimal string");
  std::uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(view.data(), view.data() + view.size(), value, 16);
  require(ec == std::errc{} && ptr == view.data() + view.size(),
          "seed must be a 64-bit hexadecimal string");
  return value;
}

int cmd_synth(const RunConfig& config) {
  require(config.m >= 1, "--m is required for synth");
  require(config.blocks >= 1, "--blocks must be at least 1");
  require(!config.out_path.empty(), "--out is required");
  RandomStream stream(config.seed);
  std::vector<double> samples(config.m * config.blocks);
  for (double& s : samples) s = stream.normal();
  write_blocks(config.out_path, config.m, std::move(samples));
  return 0;
}

int cmd_apply(const std::string& op, const RunConfig& config) {
  require(!config.in_path.empty(), "--in is required");
  require(!config.out_path.empty(), "--out is required");
  const SignalFile input = read_signal_file(config.in_path);

  if (op == "unitary" || op == "unitary-inverse") {
    const std::size_t m = resolve_block_size(config.m, input);
    const UnitarySpec spec{m, config.seed, config.subsets};
    std::vector<double> samples = input.samples;
    for (std::size_t b = 0; b * m < samples.size(); ++b) {
      const std::span<double> block(samples.data() + b * m, m);
      if (op == "unitary")
        apply_unitary(spec, block);
      else
        apply_unitary_inverse(spec, block);
    }
    write_blocks(config.out_path, m, std::move(samples));
    return 0;
  }

  if (op == "project") {
    const std::size_t m = resolve_block_size(config.m, input);
    require(config.n >= 1 && config.n <= m, "--n must satisfy 1 <= n <= m");
    const ProjectionSpec spec{m, config.n, config.seed, config.subsets};
    const std::size_t blocks = input.samples.size() / m;
    std::vector<double> samples(blocks * config.n);
    for (std::size_t b = 0; b < blocks; ++b)
      project(spec, {input.samples.data() + b * m, m},
              {samples.data() + b * config.n, config.n});
    write_blocks(config.out_path, config.n, std::move(samples));
    return 0;
  }

  if (op == "project-transpose") {
    const std::size_t n = resolve_block_size(config.n, input);
    require(config.m >= n, "--m must be at least the input block size");
    const ProjectionSpec spec{config.m, n, config.seed, config.subsets};
    const std::size_t blocks = input.samples.size() / n;
    std::vector<double> samples(blocks * config.m);
    for (std::size_t b = 0; b < blocks; ++b)
      project_transpose(spec, {input.samples.data() + b * n, n},
                        {samples.data() + b * config.m, config.m});
    write_blocks(config.out_path, config.m, std::move(samples));
    return 0;
  }

  if (op == "paraunitary" || op == "paraunitary-inverse") {
    const std::size_t m = resolve_block_size(config.m, input);
    const ParaunitarySpec spec{m, config.k_order, config.seed, config.subsets};
    Lattice lattice(spec);
    std::vector<double> samples = input.samples;
    for (std::size_t b = 0; b * m < samples.size(); ++b) {
      const std::span<double> block(samples.data() + b * m, m);
      if (op == "paraunitary")
        lattice.forward_block(block);
      else
        lattice.inverse_block(block);
    }
    if (op == "paraunitary") {
      const std::vector<double> tail = lattice.flush();
      samples.insert(samples.end(), tail.begin(), tail.end());
    }
    write_blocks(config.out_path, m, std::move(samples));
    return 0;
  }

  if (op == "decimate") {
    const std::size_t m = resolve_block_size(config.m, input);
    const ParaunitarySpec spec{m, config.k_order, config.seed, config.subsets};
    const std::size_t blocks = input.samples.size() / m;
    const DecimationSchedule schedule = schedule_covering(config, blocks);
    DecimatedResult run = forward_decimated(spec, input.samples, schedule);
    write_blocks(config.out_path, m, std::move(run.retained));
    return 0;
  }

  if (op == "decimate-adjoint") {
    const std::size_t m = resolve_block_size(config.m, input);
    const ParaunitarySpec spec{m, config.k_order, config.seed, config.subsets};
    const std::size_t retained = input.samples.size() / m;
    DecimationSchedule schedule;
    if (!config.schedule_path.empty()) {
      schedule = DecimationSchedule::from_csv(load_text(config.schedule_path));
      require(schedule.retained_count() == retained,
              "schedule retains a different block count than the input holds");
    } else {
      require(config.q >= 1, "either --schedule or --q >= 1 is required");
      schedule.append(config.q, retained * config.q);
    }
    write_blocks(config.out_path, m,
                 adjoint_decimated(spec, input.samples, schedule));
    return 0;
  }

  throw ValidationError("unknown apply operation: " + op);
}

int cmd_stats(const RunConfig& config, std::ostream& out) {
  const std::vector<StatsRow> rows = run_battery(config.seed, config.alpha);
  out << to_csv(rows);
  const bool all_pass =
      std::all_of(rows.begin(), rows.end(), [](const StatsRow& r) { return r.pass; });
  return all_pass ? 0 : 1;
}

int cmd_bench(const RunConfig& config, std::ostream& out) {
  require(config.m >= 2 && config.m % 2 == 0,
          "--m must be even and at least 2");
  require(config.blocks >= 1, "--blocks must be at least 1");
  const ParaunitarySpec spec{config.m, config.k_order, config.seed,
                             config.subsets};

  RandomStream stream(derive_child_seed(config.seed, 41));
  std::vector<double> signal(config.m * config.blocks);
  for (double& s : signal) s = stream.normal();

  std::vector<std::size_t> factors{1, 2, config.k_order + 1};
  std::sort(factors.begin(), factors.end());
  factors.erase(std::unique(factors.begin(), factors.end()), factors.end());

  out << "q,blocks,retained,executed_stage_applies,baseline_stage_applies,"
         "savings_ratio,claimed_ratio,samples_per_second\n";
  char line[256];
  for (const std::size_t q : factors) {
    DecimationSchedule schedule;
    schedule.append(q, config.blocks);

    const auto start = std::chrono::steady_clock::now();
    const DecimatedResult run = forward_decimated(spec, signal, schedule);
    const auto stop = std::chrono::steady_clock::now();
    const double seconds =
        std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
    const double throughput = double(signal.size()) / seconds;

    const WorkCount& work = run.work;
    std::string claimed;
    if (q == config.k_order + 1 && config.k_order >= 1) {
      const double k = double(config.k_order);
      std::snprintf(line, sizeof line, "%.6g", k - 1.0 / (2.0 * k));
      claimed = line;
    }
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%zu,%zu,%.6g,%s,%.6g\n", q,
                  config.blocks, work.retained_blocks,
                  work.executed_stage_applies, work.baseline_stage_applies,
                  work.savings_ratio(), claimed.c_str(), throughput);
    out << line;
  }
  return 0;
}

int cmd_cs_demo(const RunConfig& config, std::ostream& out) {
  require(config.sparsity >= 1, "--sparsity must be at least 1");
  out << "m,k_order,sparsity,trials,exact_recoveries,rate\n";
  char line[128];
  for (std::size_t s = 1; s <= config.sparsity; ++s) {
    SparseDemoConfig demo;
    demo.m = config.m;
    demo.k_order = config.k_order;
    demo.sparsity = s;
    demo.trials = config.trials;
    demo.seed = config.seed;
    const SparseDemoResult result = run_sparse_demo(demo);
    std::snprintf(line, sizeof line, "%zu,%zu,%zu,%zu,%zu,%.6g\n", config.m,
                  config.k_order, s, result.trials, result.exact_recoveries,
                  result.rate);
    out << line;
  }
  return 0;
}

}  // namespace rpup::tools
