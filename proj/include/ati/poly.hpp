#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ati/rational.hpp"

namespace ati {

/// Univariate polynomial in xi with exact rational coefficients, ascending degree.
/// The zero polynomial has no coefficients and degree -1.
class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rational> coeffs);
    Poly(int constant); // NOLINT: integer literals promote naturally
    Poly(const Rational& constant); // NOLINT

    static Poly monomial(const Rational& c, int k);
    /// The indeterminate xi.
    static Poly xi();

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool isZero() const noexcept { return coeffs_.empty(); }
    bool isConstant() const noexcept { return coeffs_.size() <= 1; }
    /// Coefficient of xi^k, zero beyond the degree.
    Rational coeff(int k) const;
    const Rational& lead() const;
    const std::vector<Rational>& coefficients() const noexcept { return coeffs_; }

    Poly operator-() const;
    Poly& operator+=(const Poly& rhs);
    Poly& operator-=(const Poly& rhs);
    Poly& operator*=(const Poly& rhs);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(Poly a, const Poly& b) { return a *= b; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

    /// Euclidean division a = q b + r with deg r < deg b.
    static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
    bool divides(const Poly& other) const;

    Rational eval(const Rational& x) const;
    double eval(double x) const;
    Poly monic() const;
    /// Multiplies by xi^k.
    Poly shifted(int k) const;

    /// Human-readable form in "xi", e.g. "xi^2 - 1".
    std::string toString() const;

private:
    void trim();

    std::vector<Rational> coeffs_;
};

Poly gcd(Poly a, Poly b);

/// Rectangular matrix of polynomials.
class PolyMatrix {
public:
    PolyMatrix() = default;
    PolyMatrix(int rows, int cols);

    static PolyMatrix identity(int n);
    /// Builds R(xi) = sum_k coefficient[k] xi^k.
    static PolyMatrix fromCoefficients(const std::vector<RationalMatrix>& coefficient);
    static PolyMatrix constant(const RationalMatrix& M);

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }

    Poly& operator()(int i, int j) { return data_[index(i, j)]; }
    const Poly& operator()(int i, int j) const { return data_[index(i, j)]; }

    /// Maximum entry degree, -1 for the zero matrix.
    int degree() const;
    int rowDegree(int i) const;
    bool isZero() const;
    bool isZeroRow(int i) const;

    /// Constant matrix of xi^k coefficients.
    RationalMatrix coefficient(int k) const;
    RationalMatrix eval(const Rational& x) const;

    PolyMatrix operator*(const PolyMatrix& rhs) const;
    PolyMatrix operator+(const PolyMatrix& rhs) const;
    friend bool operator==(const PolyMatrix& a, const PolyMatrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

    PolyMatrix transpose() const;
    PolyMatrix rowsRange(int first, int count) const;
    PolyMatrix colsRange(int first, int count) const;
    /// Stacks rhs below this matrix.
    PolyMatrix stacked(const PolyMatrix& rhs) const;

    void swapRows(int a, int b);
    void swapCols(int a, int b);
    /// row[dst] += factor * row[src]
    void addRowMultiple(int dst, int src, const Poly& factor);
    /// col[dst] += factor * col[src]
    void addColMultiple(int dst, int src, const Poly& factor);
    void scaleRow(int i, const Rational& s);

    /// Fraction-free (Bareiss) determinant; square matrices only.
    Poly determinant() const;
    /// Square with a nonzero constant determinant.
    bool isUnimodular() const;

    std::string toString() const;

private:
    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(j);
    }

    int rows_ = 0;
    int cols_ = 0;
    std::vector<Poly> data_;
};

} // namespace ati
