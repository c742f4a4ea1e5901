#pragma once

// Minimal dense row-major matrix of doubles. Header-only so the hot matmul
// loops inline into the forward/backward passes.

#include <cstddef>
#include <string>
#include <vector>

#include "shs/error.hpp"

namespace shs {

class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, 0.0) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    double operator()(int r, int c) const {
        return data_[static_cast<std::size_t>(r) * cols_ + c];
    }

    double* row(int r) { return data_.data() + static_cast<std::size_t>(r) * cols_; }
    const double* row(int r) const { return data_.data() + static_cast<std::size_t>(r) * cols_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    // Reshape to rows x cols of zeros, reusing the existing allocation.
    void reset(int rows, int cols) {
        rows_ = rows;
        cols_ = cols;
        data_.assign(static_cast<std::size_t>(rows) * cols, 0.0);
    }

    bool operator==(const Matrix& other) const = default;

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

inline void check_inner(int a, int b, const char* where) {
    if (a != b) {
        throw ShapeError(std::string(where) + ": inner dimensions " + std::to_string(a) +
                         " and " + std::to_string(b) + " do not match");
    }
}

// c = a * b into a caller-owned buffer. Output columns are processed in
// register-blocked strips so each c row is written exactly once; every
// element still accumulates over k in ascending order, so the result is
// bitwise identical to the textbook triple loop.
inline void matmul_into(const Matrix& a, const Matrix& b, Matrix& c) {
    check_inner(a.cols(), b.rows(), "matmul");
    c.reset(a.rows(), b.cols());
    const int inner = a.cols();
    const int width = b.cols();
    constexpr int kStrip = 16;
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        int j = 0;
        for (; j + kStrip <= width; j += kStrip) {
            double acc[kStrip] = {};
            const double* bptr = b.data() + j;
            for (int k = 0; k < inner; ++k, bptr += width) {
                const double aik = arow[k];
                for (int s = 0; s < kStrip; ++s) {
                    acc[s] += aik * bptr[s];
                }
            }
            for (int s = 0; s < kStrip; ++s) {
                crow[j + s] = acc[s];
            }
        }
        for (; j < width; ++j) {
            double acc = 0.0;
            const double* bptr = b.data() + j;
            for (int k = 0; k < inner; ++k, bptr += width) {
                acc += arow[k] * *bptr;
            }
            crow[j] = acc;
        }
    }
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    Matrix c;
    matmul_into(a, b, c);
    return c;
}

// c = a^T * b
inline Matrix matmul_at_b(const Matrix& a, const Matrix& b) {
    check_inner(a.rows(), b.rows(), "matmul_at_b");
    Matrix c(a.cols(), b.cols());
    const int width = b.cols();
    for (int k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (int i = 0; i < a.cols(); ++i) {
            const double aki = arow[i];
            double* crow = c.row(i);
            for (int j = 0; j < width; ++j) {
                crow[j] += aki * brow[j];
            }
        }
    }
    return c;
}

// c = a * b^T
inline Matrix matmul_a_bt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.cols(), "matmul_a_bt");
    Matrix c(a.rows(), b.rows());
    const int inner = a.cols();
    for (int i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (int j = 0; j < b.rows(); ++j) {
            const double* brow = b.row(j);
            double acc = 0.0;
            for (int k = 0; k < inner; ++k) {
                acc += arow[k] * brow[k];
            }
            crow[j] = acc;
        }
    }
    return c;
}

// [left | right] column-wise.
inline Matrix hstack(const Matrix& left, const Matrix& right) {
    if (left.rows() != right.rows()) {
        throw ShapeError("hstack: row counts " + std::to_string(left.rows()) + " and " +
                         std::to_string(right.rows()) + " do not match");
    }
    Matrix out(left.rows(), left.cols() + right.cols());
    for (int i = 0; i < left.rows(); ++i) {
        double* orow = out.row(i);
        const double* lrow = left.row(i);
        const double* rrow = right.row(i);
        for (int j = 0; j < left.cols(); ++j) {
            orow[j] = lrow[j];
        }
        for (int j = 0; j < right.cols(); ++j) {
            orow[left.cols() + j] = rrow[j];
        }
    }
    return out;
}

}  // namespace shs
