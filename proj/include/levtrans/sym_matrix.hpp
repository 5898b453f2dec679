#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rational_fn.hpp"

namespace levtrans {

/// Dense matrix of exact rational functions. Products are ordinary
/// (non-commutative) matrix products; everything is exact.
class SymMatrix {
public:
    SymMatrix() = default;
    SymMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static SymMatrix zero(std::size_t n) { return SymMatrix(n, n); }
    static SymMatrix identity(std::size_t n) {
        SymMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = RationalFn(1);
        return m;
    }
    static SymMatrix diagonal(const std::vector<RationalFn>& d) {
        SymMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    RationalFn& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const RationalFn& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    bool is_zero() const {
        for (const auto& f : data_)
            if (!f.is_zero()) return false;
        return true;
    }

    SymMatrix& operator+=(const SymMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
        return *this;
    }
    SymMatrix& operator-=(const SymMatrix& o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
        return *this;
    }
    friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
    friend SymMatrix operator-(SymMatrix a, const SymMatrix& b) { return a -= b; }
    SymMatrix operator-() const {
        SymMatrix r = *this;
        for (auto& f : r.data_) f = -f;
        return r;
    }
    friend SymMatrix operator*(const RationalFn& s, SymMatrix m) {
        for (auto& f : m.data_) f = s * f;
        return m;
    }
    friend SymMatrix operator*(const SymMatrix& a, const SymMatrix& b) {
        if (a.cols_ != b.rows_) throw PreconditionError("matrix product shape mismatch");
        SymMatrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const RationalFn& aik = a(i, k);
                if (aik.is_zero()) continue;
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    const RationalFn& bkj = b(k, j);
                    if (!bkj.is_zero()) r(i, j) += aik * bkj;
                }
            }
        return r;
    }
    friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    /// dg(M): the diagonal part.
    SymMatrix diagonal_part() const {
        SymMatrix r(rows_, cols_);
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) r(i, i) = (*this)(i, i);
        return r;
    }
    SymMatrix off_diagonal_part() const {
        SymMatrix r = *this;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) r(i, i) = RationalFn();
        return r;
    }
    std::vector<RationalFn> diagonal_entries() const {
        std::vector<RationalFn> d;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) d.push_back((*this)(i, i));
        return d;
    }

    SymMatrix derivative() const {
        SymMatrix r(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = differentiate(data_[k]);
        return r;
    }

    /// Largest leading order over all entries; nullopt when the matrix is zero.
    std::optional<int> leading_order() const {
        std::optional<int> best;
        for (const auto& f : data_) {
            auto e = f.leading_order();
            if (e && (!best || *e > *best)) best = e;
        }
        return best;
    }

    /// Exact inverse by Gauss-Jordan elimination over the field of rational functions.
    SymMatrix inverse() const {
        if (!square()) throw PreconditionError("inverse of a non-square matrix");
        const std::size_t n = rows_;
        SymMatrix a = *this, inv = identity(n);
        for (std::size_t col = 0; col < n; ++col) {
            std::size_t pivot = col;
            while (pivot < n && a(pivot, col).is_zero()) ++pivot;
            if (pivot == n) throw DivisionByZeroDenominator("matrix is singular");
            if (pivot != col)
                for (std::size_t j = 0; j < n; ++j) {
                    std::swap(a(pivot, j), a(col, j));
                    std::swap(inv(pivot, j), inv(col, j));
                }
            const RationalFn scale = RationalFn(1) / a(col, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(col, j) = scale * a(col, j);
                inv(col, j) = scale * inv(col, j);
            }
            for (std::size_t i = 0; i < n; ++i) {
                if (i == col || a(i, col).is_zero()) continue;
                const RationalFn factor = a(i, col);
                for (std::size_t j = 0; j < n; ++j) {
                    a(i, j) -= factor * a(col, j);
                    inv(i, j) -= factor * inv(col, j);
                }
            }
        }
        return inv;
    }

    const std::vector<RationalFn>& entries() const { return data_; }

private:
    void check_same_shape(const SymMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw PreconditionError("matrix shape mismatch");
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<RationalFn> data_;
};

/// Parses a row-major list of rational-function strings.
inline SymMatrix matrix_from_strings(const std::vector<std::vector<std::string>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    SymMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw ParseError("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = parse_rational_fn(rows[i][j]);
    }
    return m;
}

inline std::vector<std::vector<std::string>> matrix_to_strings(const SymMatrix& m) {
    std::vector<std::vector<std::string>> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i].push_back(m(i, j).str());
    return out;
}

} // namespace levtrans
