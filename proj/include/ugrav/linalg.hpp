#ifndef UGRAV_LINALG_HPP
#define UGRAV_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "ugrav/errors.hpp"

namespace ugrav {

using Vec = std::vector<double>;

/// Dense row-major square matrix of doubles.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static Matrix ones(std::size_t n) { return Matrix(n, n, 1.0); }

    friend bool operator==(const Matrix&, const Matrix&) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Vec row_sums(const Matrix& m) {
    Vec out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j);
    return out;
}

inline Vec col_sums(const Matrix& m) {
    Vec out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += m(i, j);
    return out;
}

inline double sum(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

inline double sup_distance(const Vec& a, const Vec& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline double sup_norm(const Vec& v) {
    double d = 0.0;
    for (double x : v) d = std::max(d, std::abs(x));
    return d;
}

inline bool all_finite_positive(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x) || x <= 0.0) return false;
    return true;
}

}  // namespace ugrav

#endif  // UGRAV_LINALG_HPP
