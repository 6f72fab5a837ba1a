#include "rpup/decimation.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>

#include "rpup/errors.hpp"

namespace rpup {

void DecimationSchedule::append(std::size_t q, std::size_t blocks) {
  if (q < 1) throw ValidationError("schedule: q must be >= 1");
  if (blocks < 1) throw ValidationError("schedule: window must cover >= 1 block");
  windows_.push_back({q, blocks});
}

std::size_t DecimationSchedule::total_blocks() const noexcept {
  std::size_t n = 0;
  for (const auto& w : windows_) n += w.blocks;
  return n;
}

std::size_t DecimationSchedule::retained_count() const noexcept {
  std::size_t n = 0;
  for (const auto& w : windows_) n += w.blocks / w.q;
  return n;
}

std::vector<std::size_t> DecimationSchedule::retained_times() const {
  std::vector<std::size_t> times;
  std::size_t base = 0;
  for (const auto& w : windows_) {
    for (std::size_t g = 1; g * w.q <= w.blocks; ++g)
      times.push_back(base + g * w.q - 1);
    base += w.blocks;
  }
  return times;
}

DecimationSchedule DecimationSchedule::from_csv(std::string_view text) {
  DecimationSchedule s;
  std::size_t line_no = 0, expect_index = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    if (line_no == 1 && (line[0] < '0' || line[0] > '9')) continue;  // header

    std::size_t fields[3];
    std::size_t field = 0, start = 0;
    for (std::size_t c = 0; c <= line.size() && field < 3; ++c) {
      if (c == line.size() || line[c] == ',') {
        std::string_view tok = line.substr(start, c - start);
        while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
        while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), fields[field]);
        if (ec != std::errc() || p != tok.data() + tok.size())
          throw ValidationError("schedule csv: bad number at line " + std::to_string(line_no));
        ++field;
        start = c + 1;
      }
    }
    if (field != 3 || start <= line.size())
      throw ValidationError("schedule csv: expected window_index,q,blocks at line " +
                            std::to_string(line_no));
    if (fields[0] != expect_index)
      throw ValidationError("schedule csv: window index out of order at line " +
                            std::to_string(line_no));
    ++expect_index;
    s.append(fields[1], fields[2]);
  }
  return s;
}

std::string DecimationSchedule::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < windows_.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += std::to_string(windows_[i].q);
    out += ',';
    out += std::to_string(windows_[i].blocks);
    out += '\n';
  }
  return out;
}

DecimatedStream::DecimatedStream(const ParaunitarySpec& spec)
    : spec_(spec), ring_(spec.k + 1) {
  if (spec.m == 0 || spec.m % 2 != 0)
    throw ValidationError("paraunitary channel count must be even and positive");
  inputs_.assign(ring_ * spec_.m, 0.0);
  input_tags_.assign(ring_, kOpen);
  memo_.assign(ring_ * ring_ * spec_.m, 0.0);
  memo_tags_.assign(ring_ * ring_, kOpen);
  zero_block_.assign(spec_.m, 0.0);
  work_.pattern_order = ring_;
  work_.node_pattern.assign(ring_ * ring_, 0);
}

void DecimatedStream::queue_window(std::size_t q, std::size_t blocks) {
  if (q < 1) throw ValidationError("schedule: q must be >= 1");
  if (blocks < 1) throw ValidationError("schedule: window must cover >= 1 block");
  pending_.push_back({q, blocks});
}

void DecimatedStream::queue_schedule(const DecimationSchedule& schedule) {
  for (const auto& w : schedule.windows()) queue_window(w.q, w.blocks);
}

void DecimatedStream::seal_current_window() {
  if (consumed_in_window_ > 0) {
    consumed_.push_back({q_cur_, consumed_in_window_});
    consumed_in_window_ = 0;
  }
  window_active_ = false;
}

void DecimatedStream::set_compression(std::size_t q) {
  if (q < 1) throw ValidationError("set_compression: q must be >= 1");
  pending_.resize(pending_next_);  // not-yet-started windows are superseded
  if (window_active_) {
    if (q == q_cur_ && window_remaining_ == kOpen && pending_next_ == pending_.size()) return;
    // let the current group finish at the old factor
    window_remaining_ = (group_pos_ == 0) ? 0 : q_cur_ - group_pos_;
    if (window_remaining_ == 0) seal_current_window();
  }
  pending_.push_back({q, kOpen});
}

void DecimatedStream::advance_window() {
  while (!window_active_ || window_remaining_ == 0) {
    if (window_active_) seal_current_window();
    if (pending_next_ >= pending_.size())
      throw ValidationError("decimation schedule exhausted before end of input");
    const ScheduleWindow w = pending_[pending_next_++];
    q_cur_ = w.q;
    window_remaining_ = w.blocks;
    group_pos_ = 0;
    window_active_ = true;
  }
}

std::span<const double> DecimatedStream::node(std::size_t stage, std::size_t tau) {
  const std::size_t slot = tau % ring_;
  const std::size_t idx = stage * ring_ + slot;
  double* dst = memo_.data() + idx * spec_.m;
  if (memo_tags_[idx] == tau) return {dst, spec_.m};  // memoized from an earlier output

  const std::size_t h = spec_.m / 2;
  if (stage == 0) {
    const double* in = inputs_.data() + slot * spec_.m;
    std::memcpy(dst, in, spec_.m * sizeof(double));
  } else {
    std::span<const double> top = node(stage - 1, tau);  // already computed this sweep
    std::memcpy(dst, top.data(), h * sizeof(double));
    if (tau == 0) {
      std::memcpy(dst + h, zero_block_.data(), h * sizeof(double));
    } else {
      std::span<const double> prev = node(stage - 1, tau - 1);
      std::memcpy(dst + h, prev.data() + h, h * sizeof(double));
    }
  }
  apply_unitary(spec_.stage(stage), {dst, spec_.m});
  memo_tags_[idx] = tau;
  work_.executed_stage_applies += 1;
  work_.executed_rotations += rotation_count(spec_.m);
  work_.node_pattern[stage * ring_ + (eval_t_ - tau)] += 1;
  return {dst, spec_.m};
}

void DecimatedStream::evaluate_retained(std::size_t t, std::span<double> out) {
  eval_t_ = t;
  for (std::size_t delta = spec_.k + 1; delta-- > 0;) {
    if (delta > t) continue;
    const std::size_t tau = t - delta;
    for (std::size_t stage = 0; stage + delta <= spec_.k; ++stage) node(stage, tau);
  }
  const std::size_t idx = spec_.k * ring_ + t % ring_;
  std::memcpy(out.data(), memo_.data() + idx * spec_.m, spec_.m * sizeof(double));
}

bool DecimatedStream::push_block(std::span<const double> x, std::span<double> out) {
  if (x.size() != spec_.m) throw ValidationError("push_block: block length != m");
  if (out.size() != spec_.m) throw ValidationError("push_block: output length != m");
  advance_window();

  const std::size_t slot = t_ % ring_;
  std::memcpy(inputs_.data() + slot * spec_.m, x.data(), spec_.m * sizeof(double));
  input_tags_[slot] = t_;

  work_.consumed_blocks += 1;
  work_.baseline_stage_applies += spec_.k + 1;
  work_.baseline_rotations += (spec_.k + 1) * rotation_count(spec_.m);

  const bool retained = (group_pos_ == q_cur_ - 1);
  if (retained) {
    evaluate_retained(t_, out);
    work_.retained_blocks += 1;
  }

  ++t_;
  ++consumed_in_window_;
  if (++group_pos_ == q_cur_) group_pos_ = 0;
  if (window_remaining_ != kOpen) --window_remaining_;
  return retained;
}

DecimationSchedule DecimatedStream::consumed_schedule() const {
  DecimationSchedule s;
  for (const auto& w : consumed_) s.append(w.q, w.blocks);
  if (window_active_ && consumed_in_window_ > 0) s.append(q_cur_, consumed_in_window_);
  return s;
}

DecimatedResult forward_decimated(const ParaunitarySpec& spec,
                                  std::span<const double> input,
                                  const DecimationSchedule& schedule) {
  if (spec.m == 0 || input.size() % spec.m != 0)
    throw ValidationError("forward_decimated: input is not a whole number of blocks");
  DecimatedStream stream(spec);
  stream.queue_schedule(schedule);
  const std::size_t blocks = input.size() / spec.m;
  DecimatedResult result;
  result.retained.reserve(schedule.retained_count() * spec.m);
  std::vector<double> out(spec.m);
  for (std::size_t b = 0; b < blocks; ++b) {
    if (stream.push_block(input.subspan(b * spec.m, spec.m), out))
      result.retained.insert(result.retained.end(), out.begin(), out.end());
  }
  result.work = stream.work();
  return result;
}

std::vector<double> adjoint_decimated(const ParaunitarySpec& spec,
                                      std::span<const double> retained,
                                      const DecimationSchedule& schedule) {
  const auto times = schedule.retained_times();
  if (retained.size() != times.size() * spec.m)
    throw ValidationError("adjoint_decimated: retained blocks inconsistent with schedule");
  const std::size_t total = schedule.total_blocks();

  std::vector<double> full(total * spec.m, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i)
    std::copy_n(retained.data() + i * spec.m, spec.m, full.data() + times[i] * spec.m);

  // reverse lattice output lags by k blocks; feed k extra zero blocks
  Lattice lattice(spec);
  std::vector<double> estimate(total * spec.m, 0.0);
  std::vector<double> block(spec.m);
  for (std::size_t tau = 0; tau < total + spec.k; ++tau) {
    if (tau < total)
      std::copy_n(full.data() + tau * spec.m, spec.m, block.data());
    else
      std::fill(block.begin(), block.end(), 0.0);
    lattice.inverse_block(block);
    if (tau >= spec.k)
      std::copy_n(block.data(), spec.m, estimate.data() + (tau - spec.k) * spec.m);
  }
  return estimate;
}

std::vector<Matrix> downsampled_coefficients(const PolyphaseCoeffs& coeffs,
                                             std::size_t q) {
  if (q < 1) throw ValidationError("downsampled_coefficients: q must be >= 1");
  const std::size_t m = coeffs.m;
  const std::size_t k = coeffs.order();
  std::vector<Matrix> blocks;
  for (std::size_t i = 0; i <= k / q; ++i) {
    Matrix b(m, q * m);
    for (std::size_t j = 0; j < q; ++j) {
      const std::size_t n = q * i + j;
      if (n > k) continue;  // zero past the filter order
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < m; ++c) b(r, j * m + c) = coeffs.h[n](r, c);
    }
    blocks.push_back(std::move(b));
  }
  return blocks;
}

Matrix sampling_matrix(const PolyphaseCoeffs& coeffs) {
  const std::size_t m = coeffs.m;
  Matrix b(m, coeffs.h.size() * m);
  for (std::size_t i = 0; i < coeffs.h.size(); ++i)
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) b(r, i * m + c) = coeffs.h[i](r, c);
  return b;
}

}  // namespace rpup
