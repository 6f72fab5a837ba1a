#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "doctest.h"
#include "rpup/decimation.hpp"
#include "rpup/errors.hpp"
#include "rpup/givens.hpp"
#include "rpup/signal_file.hpp"

#ifdef __unix__
#include <sys/wait.h>
#endif

using namespace rpup;
using tools::RunConfig;

namespace {

// Scratch directory, removed on scope exit.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() /
           ("rpup_cli_" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (std::getline(in, f, ',')) out.push_back(f);
  return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("seed strings parse as 64-bit hex") {
  CHECK(tools::parse_seed_hex("0x1f") == 0x1full);
  CHECK(tools::parse_seed_hex("FF") == 0xffull);
  CHECK(tools::parse_seed_hex("ffffffffffffffff") == ~0ull);
  CHECK_THROWS_AS(tools::parse_seed_hex(""), ValidationError);
  CHECK_THROWS_AS(tools::parse_seed_hex("0x"), ValidationError);
  CHECK_THROWS_AS(tools::parse_seed_hex("xyz"), ValidationError);
  CHECK_THROWS_AS(tools::parse_seed_hex("12345678901234567"), ValidationError);
}

TEST_CASE("synth, transform, inverse round trip through files") {
  TempDir dir;
  RunConfig cfg;
  cfg.seed = 0xabc;
  cfg.m = 8;
  cfg.blocks = 10;
  cfg.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(cfg) == 0);

  RunConfig fwd;
  fwd.seed = 0x77;
  fwd.in_path = dir.file("sig.rpup");
  fwd.out_path = dir.file("fwd.rpup");
  REQUIRE(tools::cmd_apply("unitary", fwd) == 0);

  RunConfig back;
  back.seed = 0x77;
  back.in_path = dir.file("fwd.rpup");
  back.out_path = dir.file("back.rpup");
  REQUIRE(tools::cmd_apply("unitary-inverse", back) == 0);

  const SignalFile a = read_signal_file(dir.file("sig.rpup"));
  const SignalFile c = read_signal_file(dir.file("back.rpup"));
  REQUIRE(a.samples.size() == c.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == doctest::Approx(c.samples[i]).epsilon(1e-12));
}

TEST_CASE("project with n = m reproduces the unitary path exactly") {
  TempDir dir;
  RunConfig cfg;
  cfg.seed = 0x5;
  cfg.m = 6;
  cfg.blocks = 4;
  cfg.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(cfg) == 0);

  RunConfig u;
  u.seed = 0x31;
  u.in_path = dir.file("sig.rpup");
  u.out_path = dir.file("u.rpup");
  REQUIRE(tools::cmd_apply("unitary", u) == 0);

  RunConfig p = u;
  p.n = 6;
  p.out_path = dir.file("p.rpup");
  REQUIRE(tools::cmd_apply("project", p) == 0);

  const SignalFile a = read_signal_file(dir.file("u.rpup"));
  const SignalFile b = read_signal_file(dir.file("p.rpup"));
  CHECK(a.block_size == b.block_size);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i)
    CHECK(a.samples[i] == b.samples[i]);
}

TEST_CASE("paraunitary apply emits the flush tail and inverse delays by k") {
  TempDir dir;
  const std::size_t m = 8, blocks = 12, k = 3;
  RunConfig cfg;
  cfg.seed = 0x9;
  cfg.m = m;
  cfg.blocks = blocks;
  cfg.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(cfg) == 0);

  RunConfig fwd;
  fwd.seed = 0xfab;
  fwd.k_order = k;
  fwd.in_path = dir.file("sig.rpup");
  fwd.out_path = dir.file("fwd.rpup");
  REQUIRE(tools::cmd_apply("paraunitary", fwd) == 0);
  const SignalFile forward = read_signal_file(dir.file("fwd.rpup"));
  CHECK(forward.block_count() == blocks + k);  // flush appended

  RunConfig inv = fwd;
  inv.in_path = dir.file("fwd.rpup");
  inv.out_path = dir.file("inv.rpup");
  REQUIRE(tools::cmd_apply("paraunitary-inverse", inv) == 0);

  const SignalFile original = read_signal_file(dir.file("sig.rpup"));
  const SignalFile restored = read_signal_file(dir.file("inv.rpup"));
  REQUIRE(restored.samples.size() == (blocks + k) * m);
  for (std::size_t i = 0; i < blocks * m; ++i)
    CHECK(original.samples[i] ==
          doctest::Approx(restored.samples[k * m + i]).epsilon(1e-12));
}

TEST_CASE("decimate and adjoint match the library path") {
  TempDir dir;
  RunConfig synth;
  synth.seed = 0x44;
  synth.m = 6;
  synth.blocks = 18;
  synth.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(synth) == 0);
  const SignalFile input = read_signal_file(dir.file("sig.rpup"));

  RunConfig dec;
  dec.seed = 0x123;
  dec.k_order = 2;
  dec.q = 3;
  dec.in_path = dir.file("sig.rpup");
  dec.out_path = dir.file("dec.rpup");
  REQUIRE(tools::cmd_apply("decimate", dec) == 0);

  const ParaunitarySpec spec{6, 2, 0x123, 0};
  DecimationSchedule schedule;
  schedule.append(3, 18);
  const DecimatedResult oracle = forward_decimated(spec, input.samples, schedule);
  const SignalFile retained = read_signal_file(dir.file("dec.rpup"));
  REQUIRE(retained.samples.size() == oracle.retained.size());
  for (std::size_t i = 0; i < oracle.retained.size(); ++i)
    CHECK(retained.samples[i] == oracle.retained[i]);

  RunConfig adj = dec;
  adj.in_path = dir.file("dec.rpup");
  adj.out_path = dir.file("adj.rpup");
  REQUIRE(tools::cmd_apply("decimate-adjoint", adj) == 0);
  const std::vector<double> adj_oracle =
      adjoint_decimated(spec, oracle.retained, schedule);
  const SignalFile estimate = read_signal_file(dir.file("adj.rpup"));
  REQUIRE(estimate.samples.size() == adj_oracle.size());
  for (std::size_t i = 0; i < adj_oracle.size(); ++i)
    CHECK(estimate.samples[i] == adj_oracle[i]);
}

TEST_CASE("decimate accepts a schedule file") {
  TempDir dir;
  RunConfig synth;
  synth.seed = 0x7;
  synth.m = 4;
  synth.blocks = 20;
  synth.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(synth) == 0);
  {
    std::ofstream csv(dir.file("sched.csv"));
    csv << "window_index,q,blocks\n0,2,8\n1,3,12\n";
  }

  RunConfig dec;
  dec.seed = 0xfee;
  dec.k_order = 1;
  dec.schedule_path = dir.file("sched.csv");
  dec.in_path = dir.file("sig.rpup");
  dec.out_path = dir.file("dec.rpup");
  REQUIRE(tools::cmd_apply("decimate", dec) == 0);

  const SignalFile input = read_signal_file(dir.file("sig.rpup"));
  DecimationSchedule schedule;
  schedule.append(2, 8);
  schedule.append(3, 12);
  const DecimatedResult oracle =
      forward_decimated({4, 1, 0xfee, 0}, input.samples, schedule);
  const SignalFile retained = read_signal_file(dir.file("dec.rpup"));
  REQUIRE(retained.samples.size() == oracle.retained.size());
  for (std::size_t i = 0; i < oracle.retained.size(); ++i)
    CHECK(retained.samples[i] == oracle.retained[i]);
}

TEST_CASE("apply rejects bad configs with the documented exceptions") {
  TempDir dir;
  RunConfig synth;
  synth.seed = 1;
  synth.m = 4;
  synth.blocks = 2;
  synth.out_path = dir.file("sig.rpup");
  REQUIRE(tools::cmd_synth(synth) == 0);

  RunConfig bad;
  bad.in_path = dir.file("absent.rpup");
  bad.out_path = dir.file("o.rpup");
  CHECK_THROWS_AS(tools::cmd_apply("unitary", bad), IoError);

  RunConfig badn;
  badn.in_path = dir.file("sig.rpup");
  badn.out_path = dir.file("o.rpup");
  badn.n = 9;
  CHECK_THROWS_AS(tools::cmd_apply("project", badn), ValidationError);

  RunConfig mism;
  mism.in_path = dir.file("sig.rpup");
  mism.out_path = dir.file("o.rpup");
  mism.m = 8;
  CHECK_THROWS_AS(tools::cmd_apply("unitary", mism), ValidationError);

  RunConfig unk;
  unk.in_path = dir.file("sig.rpup");
  unk.out_path = dir.file("o.rpup");
  CHECK_THROWS_AS(tools::cmd_apply("rotate-left", unk), ValidationError);
}

TEST_CASE("stats battery is deterministic and reports the known red line") {
  RunConfig cfg;
  cfg.seed = 0;
  cfg.alpha = 0.01;
  std::ostringstream first, second;
  const int rc1 = tools::cmd_stats(cfg, first);
  const int rc2 = tools::cmd_stats(cfg, second);
  CHECK(first.str() == second.str());

  const auto lines = csv_lines(first.str());
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "test,statistic,threshold,result");
  std::size_t fails = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = fields(lines[i]);
    REQUIRE(f.size() == 4);
    if (f[3] == "fail") {
      ++fails;
      // the gaussianity KS line is a measured property of the transform
      // family, not a defect; everything else must pass
      CHECK(f[0] == "entry_gaussianity_ks");
    }
  }
  CHECK(fails == 1);
  CHECK(rc1 == 1);
  CHECK(rc2 == 1);
}

TEST_CASE("bench reports work counts for q = 1, 2, K+1") {
  RunConfig cfg;
  cfg.seed = 3;
  cfg.m = 8;
  cfg.k_order = 4;
  cfg.blocks = 200;
  std::ostringstream out;
  REQUIRE(tools::cmd_bench(cfg, out) == 0);
  const auto lines = csv_lines(out.str());
  REQUIRE(lines.size() == 4);
  const auto header = fields(lines[0]);
  REQUIRE(header.size() == 8);
  CHECK(header[0] == "q");
  CHECK(header[6] == "claimed_ratio");

  const auto row1 = fields(lines[1]);
  CHECK(row1[0] == "1");
  CHECK(row1[5] == "1");  // no pruning at q = 1

  const auto row3 = fields(lines[3]);
  CHECK(row3[0] == "5");
  CHECK(row3[6] == "3.875");  // published claim for K = 4
  CHECK(std::stoull(row3[3]) < std::stoull(row3[4]));  // executed < baseline
}

TEST_CASE("recovery rate sweep is non-increasing in sparsity") {
  RunConfig cfg;
  cfg.seed = 0x2026;
  cfg.m = 16;
  cfg.k_order = 3;
  cfg.sparsity = 6;
  cfg.trials = 40;
  std::ostringstream out;
  REQUIRE(tools::cmd_cs_demo(cfg, out) == 0);
  const auto lines = csv_lines(out.str());
  REQUIRE(lines.size() == 7);
  double prev = 2.0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = fields(lines[i]);
    REQUIRE(f.size() == 6);
    const double rate = std::stod(f[5]);
    CHECK(rate <= prev);
    prev = rate;
  }
  const auto first = fields(lines[1]);
  CHECK(std::stod(first[5]) == 1.0);  // 1-sparse recovery is exact
}

#ifdef __unix__
TEST_CASE("installed binary honors the exit-code contract") {
  const char* bin = std::getenv("RPUP_BIN");
  if (!bin) {
    MESSAGE("RPUP_BIN not set; skipping subprocess checks");
    return;
  }
  TempDir dir;
  const std::string base = std::string(bin);
  const std::string quiet = " > /dev/null 2>&1";

  auto run = [&](const std::string& args) {
    const int status = std::system((base + " " + args + quiet).c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };

  CHECK(run("synth --m 4 --blocks 3 --seed 1 --out " + dir.file("s.rpup")) == 0);
  CHECK(run("apply unitary --seed 2 --in " + dir.file("s.rpup") + " --out " +
            dir.file("u.rpup")) == 0);
  CHECK(run("apply unitary --seed 2 --in " + dir.file("absent.rpup") +
            " --out " + dir.file("x.rpup")) == 2);
  CHECK(run("apply project --n 99 --seed 2 --in " + dir.file("s.rpup") +
            " --out " + dir.file("x.rpup")) == 1);
  CHECK(run("apply unitary --in " + dir.file("s.rpup")) == 1);  // missing --out
  CHECK(run("--definitely-not-a-flag") == 1);
}
#endif

}  // TEST_SUITE
