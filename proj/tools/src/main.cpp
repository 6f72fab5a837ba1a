#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rpup/errors.hpp"

namespace {

// stats/bench/cs-demo write CSV to --out when given, stdout otherwise
int run_csv_command(int (*body)(const rpup::tools::RunConfig&, std::ostream&),
                    const rpup::tools::RunConfig& config) {
  if (config.out_path.empty()) return body(config, std::cout);
  std::ofstream file(config.out_path, std::ios::binary);
  if (!file) throw rpup::IoError("cannot open output file: " + config.out_path);
  return body(config, file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Seed-driven random orthogonal transforms, paraunitary filter banks "
      "and adaptively decimated sampling operators"};
  app.require_subcommand(1);

  rpup::tools::RunConfig config;
  std::string seed_hex = "0";
  std::string op;

  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed_hex, "64-bit hexadecimal seed");
    sub->add_option("--subsets", config.subsets,
                    "angle subset count, 0 selects the default M");
  };

  CLI::App* synth = app.add_subcommand("synth", "Write gaussian noise blocks");
  add_seed(synth);
  synth->add_option("--m", config.m, "block size")->required();
  synth->add_option("--blocks", config.blocks, "block count (default 64)");
  synth->add_option("--out", config.out_path, "output signal file")->required();

  CLI::App* apply =
      app.add_subcommand("apply", "Run a transform over a signal file");
  add_seed(apply);
  apply
      ->add_option("op", op,
                   "unitary | unitary-inverse | project | project-transpose | "
                   "paraunitary | paraunitary-inverse | decimate | "
                   "decimate-adjoint")
      ->required();
  apply->add_option("--m", config.m, "block size (checked against the file)");
  apply->add_option("--n", config.n, "projection row count");
  apply->add_option("--k-order", config.k_order, "paraunitary order K");
  apply->add_option("--q", config.q, "constant compression factor");
  apply->add_option("--schedule", config.schedule_path,
                    "CSV schedule file (window_index,q,blocks)");
  apply->add_option("--in", config.in_path, "input signal file")->required();
  apply->add_option("--out", config.out_path, "output signal file")->required();

  CLI::App* stats =
      app.add_subcommand("stats", "Distribution test battery, CSV report");
  add_seed(stats);
  stats->add_option("--alpha", config.alpha, "test level (default 0.01)");
  stats->add_option("--out", config.out_path, "CSV file (default stdout)");

  CLI::App* bench = app.add_subcommand(
      "bench", "Throughput and pruning work counts across q in {1,2,K+1}");
  add_seed(bench);
  bench->add_option("--m", config.m, "block size (default 8)");
  bench->add_option("--k-order", config.k_order, "paraunitary order (default 4)");
  bench->add_option("--blocks", config.blocks, "stream length (default 4096)");
  bench->add_option("--out", config.out_path, "CSV file (default stdout)");

  CLI::App* demo = app.add_subcommand(
      "cs-demo", "Sparse recovery through the decimated operator");
  add_seed(demo);
  demo->add_option("--m", config.m, "block size (default 16)");
  demo->add_option("--k-order", config.k_order, "paraunitary order (default 3)");
  demo->add_option("--sparsity", config.sparsity,
                   "largest sparsity swept (default 3)");
  demo->add_option("--trials", config.trials, "trials per sparsity (default 100)");
  demo->add_option("--out", config.out_path, "CSV file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    config.seed = rpup::tools::parse_seed_hex(seed_hex);
    if (synth->parsed()) return rpup::tools::cmd_synth(config);
    if (apply->parsed()) return rpup::tools::cmd_apply(op, config);
    if (stats->parsed()) return run_csv_command(rpup::tools::cmd_stats, config);
    if (bench->parsed()) {
      if (!bench->count("--m")) config.m = 8;
      if (!bench->count("--k-order")) config.k_order = 4;
      if (!bench->count("--blocks")) config.blocks = 4096;
      return run_csv_command(rpup::tools::cmd_bench, config);
    }
    if (demo->parsed()) {
      if (!demo->count("--m")) config.m = 16;
      if (!demo->count("--k-order")) config.k_order = 3;
      return run_csv_command(rpup::tools::cmd_cs_demo, config);
    }
  } catch (const rpup::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const rpup::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
