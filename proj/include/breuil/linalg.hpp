// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "breuil/gf.hpp"

namespace breuil {

/// Dense matrix over a finite field k. Row-major. Deterministic pivoting
/// (first nonzero entry scanning rows top-down) so downstream outputs are
/// reproducible.
class Mat {
public:
    Mat() = default;
    Mat(const FieldParams* k, std::size_t rows, std::size_t cols)
        : k_(k), rows_(rows), cols_(cols), a_(rows * cols, FieldElem::zero(k)) {}

    static Mat identity(const FieldParams* k, std::size_t n);

    const FieldParams* field() const { return k_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    FieldElem& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const FieldElem& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Mat operator*(const Mat& o) const;
    Mat operator+(const Mat& o) const;
    Mat operator-(const Mat& o) const;
    bool operator==(const Mat& o) const;

    Mat transpose() const;
    bool is_zero() const;

private:
    const FieldParams* k_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<FieldElem> a_;
};

/// In-place reduced row echelon form; returns pivot columns.
std::vector<std::size_t> rref(Mat& m);

std::size_t rank(Mat m);

/// One solution of A x = b (free variables set to zero), or nullopt.
std::optional<std::vector<FieldElem>> solve(const Mat& a, const std::vector<FieldElem>& b);

/// Basis of the right kernel of A, deterministic order.
std::vector<std::vector<FieldElem>> nullspace(const Mat& a);

/// Inverse of a square matrix, or nullopt when singular.
std::optional<Mat> inverse(const Mat& a);

} // namespace breuil
