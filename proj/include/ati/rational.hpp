#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>
#include <vector>

#include "ati/trajectory.hpp"

namespace ati {

using Rational = mpq_class;

/// Accepts "num/den", integers and plain decimals ("-0.25", "3e-2").
Rational parseRational(std::string_view text);
/// Canonical "num/den", or just "num" for integers.
std::string formatRational(const Rational& r);
/// Exact binary value of a finite double.
Rational fromDouble(double v);

/// Dense matrix of exact rationals, row-major.
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols);

    static RationalMatrix identity(int n);
    static RationalMatrix fromDouble(const Matrix& M);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Rational& operator()(int i, int j) { return data_[index(i, j)]; }
    const Rational& operator()(int i, int j) const { return data_[index(i, j)]; }

    RationalMatrix operator*(const RationalMatrix& rhs) const;
    bool operator==(const RationalMatrix& rhs) const;
    bool isZero() const;

    Matrix toDouble() const;

    /// Exact rank by Gaussian elimination.
    int rank() const;
    /// Basis of { y : y' * M = 0 }, one vector per row of the result.
    RationalMatrix leftNullSpace() const;
    /// Reduced row echelon form and its pivot columns.
    RationalMatrix rref(std::vector<int>* pivots = nullptr) const;

private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Rational> data_;
};

using RationalVector = std::vector<Rational>;

} // namespace ati
