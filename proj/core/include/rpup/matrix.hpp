#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace rpup {

// Dense row-major matrix. Deliberately minimal: the streaming paths never
// touch it; it exists for coefficient extraction, oracles and reports.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return a_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return a_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {a_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept {
    return {a_.data() + r * cols_, cols_};
  }

  double* data() noexcept { return a_.data(); }
  const double* data() const noexcept { return a_.data(); }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows_, a.cols_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) out.a_[i] = a.a_[i] + b.a_[i];
    return out;
  }

  bool operator==(const Matrix&) const = default;

private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// y = A x
inline void matvec(const Matrix& a, std::span<const double> x, std::span<double> y) {
  for (std::size_t r = 0; r < a.rows(); ++r) {
    double acc = 0.0;
    const auto row = a.row(r);
    for (std::size_t c = 0; c < a.cols(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double m = 0.0;
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      const double d = a(r, c) - b(r, c);
      const double ad = d < 0 ? -d : d;
      if (ad > m) m = ad;
    }
  return m;
}

}  // namespace rpup
