#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rpup/matrix.hpp"
#include "rpup/paraunitary.hpp"

namespace rpup {

// A window is a run of consecutive block times sharing one compression
// factor q. Inside a window the block times form groups of q; the last block
// of each complete group is retained, a trailing partial group retains
// nothing. q > k+1 is allowed (retained blocks then see disjoint inputs).
struct ScheduleWindow {
  std::size_t q = 1;
  std::size_t blocks = 0;
};

class DecimationSchedule {
public:
  DecimationSchedule() = default;

  void append(std::size_t q, std::size_t blocks);

  const std::vector<ScheduleWindow>& windows() const noexcept { return windows_; }
  std::size_t total_blocks() const noexcept;
  std::size_t retained_count() const noexcept;

  // Global block times that are retained, ascending.
  std::vector<std::size_t> retained_times() const;

  // Lines "window_index,q,blocks". A non-numeric first line is treated as a
  // header and skipped.
  static DecimationSchedule from_csv(std::string_view text);
  std::string to_csv() const;

private:
  std::vector<ScheduleWindow> windows_;
};

struct WorkCount {
  std::size_t executed_stage_applies = 0;
  std::size_t executed_rotations = 0;
  std::size_t baseline_stage_applies = 0;  // the critically decimated run
  std::size_t baseline_rotations = 0;
  std::size_t consumed_blocks = 0;
  std::size_t retained_blocks = 0;
  // fresh node evaluations by (stage, delta = retained time - node time),
  // flattened stage * (k+1) + delta; shows which flow-graph blocks ever ran
  std::size_t pattern_order = 0;  // k+1
  std::vector<std::size_t> node_pattern;

  double savings_ratio() const noexcept {
    if (executed_stage_applies == 0)
      return baseline_stage_applies == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    return double(baseline_stage_applies) / double(executed_stage_applies);
  }
};

// Streaming under-decimated operator. Evaluation is demand driven: a lattice
// node (stage, block time) is computed only when a retained output depends on
// it, with node values memoized across outputs in a ring of the last k+1
// block times.
class DecimatedStream {
public:
  explicit DecimatedStream(const ParaunitarySpec& spec);

  // Supply schedule windows ahead of the stream.
  void queue_window(std::size_t q, std::size_t blocks);
  void queue_schedule(const DecimationSchedule& schedule);

  // Change the factor on the fly: the current group still completes at the
  // old q; the new q takes effect at that boundary and stays until changed.
  void set_compression(std::size_t q);

  // Feed one block. Returns true and fills `out` when this block time is
  // retained. Throws when the queued schedule is exhausted and no on-the-fly
  // factor is active.
  bool push_block(std::span<const double> x, std::span<double> out);

  const WorkCount& work() const noexcept { return work_; }
  const ParaunitarySpec& spec() const noexcept { return spec_; }

  // Schedule as actually consumed so far (windows sealed at current time).
  DecimationSchedule consumed_schedule() const;

private:
  static constexpr std::size_t kOpen = std::numeric_limits<std::size_t>::max();

  void advance_window();
  void seal_current_window();
  std::span<const double> node(std::size_t stage, std::size_t tau);
  void evaluate_retained(std::size_t t, std::span<double> out);

  ParaunitarySpec spec_;
  std::size_t ring_;  // k+1

  // schedule consumption
  std::vector<ScheduleWindow> pending_;
  std::size_t pending_next_ = 0;
  std::size_t q_cur_ = 1;
  std::size_t window_remaining_ = 0;  // blocks left in current window, kOpen = unbounded
  std::size_t group_pos_ = 0;
  bool window_active_ = false;
  std::vector<ScheduleWindow> consumed_;
  std::size_t consumed_in_window_ = 0;

  std::size_t t_ = 0;
  std::vector<double> inputs_;            // ring of k+1 input blocks
  std::vector<std::size_t> input_tags_;
  std::vector<double> memo_;              // (k+1) stages x (k+1) slots x m
  std::vector<std::size_t> memo_tags_;
  std::vector<double> zero_block_;
  std::size_t eval_t_ = 0;  // retained time currently being evaluated

  WorkCount work_;
};

struct DecimatedResult {
  std::vector<double> retained;  // retained blocks, concatenated
  WorkCount work;
};

// Runs the whole input (length a multiple of spec.m) against the schedule.
// The schedule must cover every input block.
DecimatedResult forward_decimated(const ParaunitarySpec& spec,
                                  std::span<const double> input,
                                  const DecimationSchedule& schedule);

inline const WorkCount& work_report(const DecimatedResult& run) noexcept { return run.work; }
inline const WorkCount& work_report(const DecimatedStream& run) noexcept { return run.work(); }

// Transpose operator: zero-fills the dropped block times, runs the reverse
// lattice and realigns for its k-block delay. Output covers the schedule's
// full span.
std::vector<double> adjoint_decimated(const ParaunitarySpec& spec,
                                      std::span<const double> retained,
                                      const DecimationSchedule& schedule);

// Blocks [H_{qi} ... H_{qi+q-1}] for i = 0..floor(K/q), zero-padded past K.
std::vector<Matrix> downsampled_coefficients(const PolyphaseCoeffs& coeffs,
                                             std::size_t q);

// The maximally decimated case: the m x (k+1)m matrix [H_0 ... H_K]; its rows
// are orthonormal.
Matrix sampling_matrix(const PolyphaseCoeffs& coeffs);

}  // namespace rpup
