#pragma once

#include <cstddef>
#include <vector>

namespace sysrisk {

/// Dense row-major matrix. Asset counts here are single digits, so a
/// flat vector with index arithmetic is all that is needed.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<double>& data() const { return data_; }

    double trace() const {
        double t = 0.0;
        for (std::size_t i = 0; i < rows_ && i < cols_; ++i) t += (*this)(i, i);
        return t;
    }

    /// this * other
    Matrix multiply(const Matrix& other) const {
        Matrix out(rows_, other.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                const double a = (*this)(i, k);
                if (a == 0.0) continue;
                for (std::size_t j = 0; j < other.cols_; ++j) {
                    out(i, j) += a * other(k, j);
                }
            }
        }
        return out;
    }

    /// this * this^T
    Matrix multiply_own_transpose() const {
        Matrix out(rows_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = i; j < rows_; ++j) {
                double sum = 0.0;
                for (std::size_t k = 0; k < cols_; ++k) {
                    sum += (*this)(i, k) * (*this)(j, k);
                }
                out(i, j) = sum;
                out(j, i) = sum;
            }
        }
        return out;
    }

    Matrix transposed() const {
        Matrix out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

} // namespace sysrisk
