#include "rpup/givens.hpp"

#include <cmath>
#include <vector>

#include "rpup/errors.hpp"
#include "rpup/rng.hpp"

namespace rpup {
namespace {

// y_i = c x_i - s x_j ; y_j = s x_i + c x_j
inline void rotate(double& xi, double& xj, double c, double s) noexcept {
  const double ti = c * xi - s * xj;
  xj = s * xi + c * xj;
  xi = ti;
}

struct PlanWalker {
  std::size_t m, i, j;

  std::size_t d() const noexcept { return j - i; }
  void advance() noexcept {
    if (++j == m) {
      ++i;
      j = i + 1;
    }
  }
  void retreat() noexcept {
    if (j == i + 1) {
      --i;
      j = m - 1;
    } else {
      --j;
    }
  }
};

PlanWalker walker_at(std::size_t m, std::size_t flat) {
  std::size_t i = 0, remaining = flat;
  while (remaining >= m - 1 - i) {
    remaining -= m - 1 - i;
    ++i;
  }
  return {m, i, i + 1 + remaining};
}

std::pmr::vector<std::uint64_t> subset_seeds(const SeedHierarchy& h,
                                             std::pmr::memory_resource* mem) {
  std::pmr::vector<std::uint64_t> seeds(mem);
  seeds.reserve(h.num_subsets);
  for (std::size_t k = 0; k < h.num_subsets; ++k) seeds.push_back(h.subset_seed(k));
  return seeds;
}

// Streams the first `executed` planned rotations through `x`.
void run_forward(const SeedHierarchy& h, std::size_t m, std::size_t executed,
                 std::span<double> x, std::pmr::memory_resource* mem) {
  const auto seeds = subset_seeds(h, mem);
  for (std::size_t k = 0; k < h.num_subsets; ++k) {
    const std::size_t begin = h.subset_begin(k);
    std::size_t end = h.subset_end(k);
    if (end > executed) end = executed;
    if (begin >= end) break;
    RandomStream stream(seeds[k]);
    PlanWalker w = walker_at(m, begin);
    for (std::size_t t = begin; t < end; ++t) {
      const double theta = stream.sample_angle(w.d());
      rotate(x[w.i], x[w.j], std::cos(theta), std::sin(theta));
      w.advance();
    }
  }
}

// Streams the same rotations backwards with negated angles. One subset of
// angles is buffered at a time; that buffer is the "random subgroup" vector
// of the storage contract.
void run_reverse(const SeedHierarchy& h, std::size_t m, std::size_t executed,
                 std::span<double> x, std::pmr::memory_resource* mem) {
  if (executed == 0) return;
  const auto seeds = subset_seeds(h, mem);
  std::pmr::vector<double> buffer(mem);
  buffer.reserve(h.subset_size);
  const std::size_t last = (executed - 1) / h.subset_size;
  for (std::size_t k = last + 1; k-- > 0;) {
    const std::size_t begin = h.subset_begin(k);
    std::size_t end = h.subset_end(k);
    if (end > executed) end = executed;
    if (begin >= end) continue;
    buffer.clear();
    RandomStream stream(seeds[k]);
    PlanWalker w = walker_at(m, begin);
    for (std::size_t t = begin; t < end; ++t) {
      buffer.push_back(stream.sample_angle(w.d()));
      w.advance();
    }
    w.retreat();  // now at plane of flat index end-1
    for (std::size_t t = end; t-- > begin;) {
      const double theta = buffer[t - begin];
      rotate(x[w.i], x[w.j], std::cos(theta), -std::sin(theta));
      if (t > begin) w.retreat();
    }
  }
}

void apply_signs(std::uint64_t sign_seed, std::span<double> x, std::size_t count) {
  RandomStream stream(sign_seed);
  for (std::size_t i = 0; i < count; ++i) x[i] *= stream.sample_sign();
}

}  // namespace

std::pair<std::size_t, std::size_t> plane_of_flat(std::size_t m, std::size_t flat) {
  if (flat >= rotation_count(m)) throw ValidationError("plane index out of range");
  const PlanWalker w = walker_at(m, flat);
  return {w.i, w.j};
}

void apply_unitary(const UnitarySpec& spec, std::span<double> x,
                   std::pmr::memory_resource* mem) {
  if (x.size() != spec.m) throw ValidationError("apply_unitary: block length != m");
  const auto h = SeedHierarchy::for_transform(spec.seed, spec.m, spec.subsets);
  run_forward(h, spec.m, h.total_angles, x, mem);
  apply_signs(h.sign_domain(), x, spec.m);
}

void apply_unitary_inverse(const UnitarySpec& spec, std::span<double> y,
                           std::pmr::memory_resource* mem) {
  if (y.size() != spec.m) throw ValidationError("apply_unitary_inverse: block length != m");
  const auto h = SeedHierarchy::for_transform(spec.seed, spec.m, spec.subsets);
  apply_signs(h.sign_domain(), y, spec.m);
  run_reverse(h, spec.m, h.total_angles, y, mem);
}

Matrix materialize(const UnitarySpec& spec) {
  const auto h = SeedHierarchy::for_transform(spec.seed, spec.m, spec.subsets);
  Matrix u = Matrix::identity(spec.m);
  for (std::size_t k = 0; k < h.num_subsets; ++k) {
    const std::size_t begin = h.subset_begin(k);
    const std::size_t end = h.subset_end(k);
    if (begin >= end) break;
    RandomStream stream(h.subset_seed(k));
    PlanWalker w = walker_at(spec.m, begin);
    for (std::size_t t = begin; t < end; ++t) {
      const double theta = stream.sample_angle(w.d());
      const double c = std::cos(theta), s = std::sin(theta);
      auto ri = u.row(w.i), rj = u.row(w.j);
      for (std::size_t col = 0; col < spec.m; ++col) rotate(ri[col], rj[col], c, s);
      w.advance();
    }
  }
  RandomStream signs(h.sign_domain());
  for (std::size_t r = 0; r < spec.m; ++r) {
    const double s = signs.sample_sign();
    for (double& v : u.row(r)) v *= s;
  }
  return u;
}

void project(const ProjectionSpec& spec, std::span<const double> x,
             std::span<double> out, std::pmr::memory_resource* mem) {
  if (spec.n < 1 || spec.n > spec.m) throw ValidationError("project: need 1 <= n <= m");
  if (x.size() != spec.m) throw ValidationError("project: input length != m");
  if (out.size() != spec.n) throw ValidationError("project: output length != n");
  const auto h = SeedHierarchy::for_transform(spec.seed, spec.m, spec.subsets);
  std::pmr::vector<double> work(mem);
  work.reserve(spec.m);
  work.assign(x.begin(), x.end());
  run_forward(h, spec.m, executed_rotation_count(spec.m, spec.n), work, mem);
  apply_signs(h.sign_domain(), work, spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) out[i] = work[i];
}

void project_transpose(const ProjectionSpec& spec, std::span<const double> y,
                       std::span<double> out, std::pmr::memory_resource* mem) {
  if (spec.n < 1 || spec.n > spec.m) throw ValidationError("project_transpose: need 1 <= n <= m");
  if (y.size() != spec.n) throw ValidationError("project_transpose: input length != n");
  if (out.size() != spec.m) throw ValidationError("project_transpose: output length != m");
  const auto h = SeedHierarchy::for_transform(spec.seed, spec.m, spec.subsets);
  for (std::size_t i = 0; i < spec.n; ++i) out[i] = y[i];
  for (std::size_t i = spec.n; i < spec.m; ++i) out[i] = 0.0;
  apply_signs(h.sign_domain(), out, spec.n);
  run_reverse(h, spec.m, executed_rotation_count(spec.m, spec.n), out, mem);
}

}  // namespace rpup
