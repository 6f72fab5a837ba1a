#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>

namespace rpup::tools {

// Shared flag bag for every subcommand. Zero means "not set" for sizes so
// commands can fall back to values recorded in the input file header.
struct RunConfig {
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t k_order = 0;
  std::size_t subsets = 0;
  std::size_t q = 0;
  std::size_t trials = 100;
  std::size_t sparsity = 3;
  std::size_t blocks = 64;
  double alpha = 0.01;
  std::string schedule_path;
  std::string in_path;
  std::string out_path;
};

// Seeds travel as 64-bit hex strings on the command line.
std::uint64_t parse_seed_hex(const std::string& text);

int cmd_synth(const RunConfig& config);
int cmd_apply(const std::string& op, const RunConfig& config);
int cmd_stats(const RunConfig& config, std::ostream& out);
int cmd_bench(const RunConfig& config, std::ostream& out);
int cmd_cs_demo(const RunConfig& config, std::ostream& out);

}  // namespace rpup::tools
