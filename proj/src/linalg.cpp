// SPDX-License-Identifier: Apache-2.0
#include "breuil/linalg.hpp"

#include "breuil/errors.hpp"

namespace breuil {

Mat Mat::identity(const FieldParams* k, std::size_t n) {
    Mat m(k, n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = FieldElem::one(k);
    return m;
}

Mat Mat::operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw DimensionMismatch("matrix product shape mismatch");
    Mat r(k_, rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t t = 0; t < cols_; ++t) {
            const FieldElem& v = at(i, t);
            if (v.is_zero()) continue;
            for (std::size_t j = 0; j < o.cols_; ++j)
                r.at(i, j) = r.at(i, j) + v * o.at(t, j);
        }
    return r;
}

Mat Mat::operator+(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum shape mismatch");
    Mat r(k_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + o.a_[i];
    return r;
}

Mat Mat::operator-(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference shape mismatch");
    Mat r(k_, rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - o.a_[i];
    return r;
}

bool Mat::operator==(const Mat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (std::size_t i = 0; i < a_.size(); ++i)
        if (!(a_[i] == o.a_[i])) return false;
    return true;
}

Mat Mat::transpose() const {
    Mat r(k_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
}

bool Mat::is_zero() const {
    for (const auto& v : a_)
        if (!v.is_zero()) return false;
    return true;
}

std::vector<std::size_t> rref(Mat& m) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pr = row;
        while (pr < m.rows() && m.at(pr, col).is_zero()) ++pr;
        if (pr == m.rows()) continue;
        if (pr != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(row, j));
        FieldElem inv = m.at(row, col).inverse();
        for (std::size_t j = col; j < m.cols(); ++j) m.at(row, j) = m.at(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || m.at(i, col).is_zero()) continue;
            FieldElem f = m.at(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

std::size_t rank(Mat m) { return rref(m).size(); }

std::optional<std::vector<FieldElem>> solve(const Mat& a, const std::vector<FieldElem>& b) {
    if (b.size() != a.rows()) throw DimensionMismatch("rhs length does not match row count");
    Mat aug(a.field(), a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, a.cols()) = b[i];
    }
    auto pivots = rref(aug);
    if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt; // inconsistent
    std::vector<FieldElem> x(a.cols(), FieldElem::zero(a.field()));
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(r, a.cols());
    return x;
}

std::vector<std::vector<FieldElem>> nullspace(const Mat& a) {
    Mat m = a;
    auto pivots = rref(m);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<FieldElem>> basis;
    for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
        if (is_pivot[free_col]) continue;
        std::vector<FieldElem> v(a.cols(), FieldElem::zero(a.field()));
        v[free_col] = FieldElem::one(a.field());
        for (std::size_t r = 0; r < pivots.size(); ++r)
            v[pivots[r]] = -m.at(r, free_col);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Mat> inverse(const Mat& a) {
    if (a.rows() != a.cols()) throw DimensionMismatch("inverse of a non-square matrix");
    const std::size_t n = a.rows();
    Mat aug(a.field(), n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
        aug.at(i, n + i) = FieldElem::one(a.field());
    }
    auto pivots = rref(aug);
    if (pivots.size() != n || pivots[n - 1] != n - 1) return std::nullopt;
    Mat inv(a.field(), n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv.at(i, j) = aug.at(i, n + j);
    return inv;
}

} // namespace breuil
