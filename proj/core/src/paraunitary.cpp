#include "rpup/paraunitary.hpp"

#include <algorithm>

#include "rpup/errors.hpp"

namespace rpup {

Lattice::Lattice(const ParaunitarySpec& spec) : spec_(spec) {
  if (spec.m == 0 || spec.m % 2 != 0)
    throw ValidationError("paraunitary channel count must be even and positive");
  registers_.assign(spec.k * spec.m / 2, 0.0);
}

void Lattice::require_direction(Direction d) {
  if (direction_ == Direction::idle) direction_ = d;
  if (direction_ != d)
    throw ValidationError("lattice state is direction-exclusive; reset() before switching");
}

void Lattice::forward_block(std::span<double> x) {
  if (x.size() != spec_.m) throw ValidationError("forward_block: block length != m");
  require_direction(Direction::forward);
  const std::size_t h = spec_.m / 2;
  apply_unitary(spec_.stage(0), x);
  for (std::size_t i = 1; i <= spec_.k; ++i) {
    double* reg = registers_.data() + (i - 1) * h;
    // delay the bottom half: it enters register i-1, the previous content
    // continues down the cascade
    for (std::size_t c = 0; c < h; ++c) std::swap(x[h + c], reg[c]);
    apply_unitary(spec_.stage(i), x);
  }
  ++blocks_;
}

void Lattice::inverse_block(std::span<double> y) {
  if (y.size() != spec_.m) throw ValidationError("inverse_block: block length != m");
  require_direction(Direction::inverse);
  const std::size_t h = spec_.m / 2;
  apply_unitary_inverse(spec_.stage(spec_.k), y);
  for (std::size_t i = 1; i <= spec_.k; ++i) {
    double* reg = registers_.data() + (i - 1) * h;
    for (std::size_t c = 0; c < h; ++c) std::swap(y[c], reg[c]);
    apply_unitary_inverse(spec_.stage(spec_.k - i), y);
  }
  ++blocks_;
}

std::vector<double> Lattice::flush() {
  std::vector<double> out(spec_.k * spec_.m, 0.0);
  for (std::size_t b = 0; b < spec_.k; ++b) {
    std::span<double> block(out.data() + b * spec_.m, spec_.m);
    if (direction_ == Direction::inverse)
      inverse_block(block);
    else
      forward_block(block);
  }
  return out;
}

void Lattice::reset() {
  std::fill(registers_.begin(), registers_.end(), 0.0);
  blocks_ = 0;
  direction_ = Direction::idle;
}

void Lattice::set_order(std::size_t new_k) {
  registers_.resize(new_k * spec_.m / 2, 0.0);
  spec_.k = new_k;
}

PolyphaseCoeffs coefficients(const ParaunitarySpec& spec) {
  if (spec.m == 0 || spec.m % 2 != 0)
    throw ValidationError("paraunitary channel count must be even and positive");
  const std::size_t m = spec.m, half = m / 2;
  PolyphaseCoeffs out;
  out.m = m;
  out.h.push_back(materialize(spec.stage(0)));
  for (std::size_t n = 1; n <= spec.k; ++n) {
    const Matrix u = materialize(spec.stage(n));
    // split the new stage by which half of its input is delayed:
    // u_top keeps the columns fed by undelayed channels, u_bot the delayed ones
    Matrix u_top(m, m), u_bot(m, m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c)
        (c < half ? u_top : u_bot)(r, c) = u(r, c);
    std::vector<Matrix> next(out.h.size() + 1);
    next[0] = u_top * out.h[0];
    for (std::size_t k = 1; k < out.h.size(); ++k)
      next[k] = u_top * out.h[k] + u_bot * out.h[k - 1];
    next[out.h.size()] = u_bot * out.h.back();
    out.h = std::move(next);
  }
  return out;
}

PolyphaseCoeffs paraconjugate(const PolyphaseCoeffs& coeffs) {
  PolyphaseCoeffs g;
  g.m = coeffs.m;
  g.h.resize(coeffs.h.size());
  for (std::size_t i = 0; i < coeffs.h.size(); ++i)
    g.h[i] = coeffs.h[coeffs.h.size() - 1 - i].transposed();
  return g;
}

}  // namespace rpup
