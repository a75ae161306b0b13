#include "ati/rational.hpp"

#include <cmath>

namespace ati {

Rational parseRational(std::string_view text)
{
    std::string s(text);
    auto bad = [&]() { return Error(ErrorCode::ParseError, "not a rational literal: '" + s + "'"); };
    if (s.empty()) {
        throw bad();
    }
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        mpz_class num, den;
        if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0) {
            throw bad();
        }
        if (den == 0) {
            throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
        }
        Rational r(num, den);
        r.canonicalize();
        return r;
    }
    // Decimal with optional exponent, parsed exactly.
    std::size_t pos = 0;
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
        negative = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    long scale = 0;
    bool seenDot = false;
    bool seenDigit = false;
    for (; pos < s.size(); ++pos) {
        const char c = s[pos];
        if (c >= '0' && c <= '9') {
            digits.push_back(c);
            seenDigit = true;
            if (seenDot) {
                --scale;
            }
        } else if (c == '.' && !seenDot) {
            seenDot = true;
        } else {
            break;
        }
    }
    if (!seenDigit) {
        throw bad();
    }
    if (pos < s.size()) {
        if (s[pos] != 'e' && s[pos] != 'E') {
            throw bad();
        }
        ++pos;
        try {
            std::size_t used = 0;
            const long e = std::stol(s.substr(pos), &used);
            if (pos + used != s.size()) {
                throw bad();
            }
            scale += e;
        } catch (const std::logic_error&) {
            throw bad();
        }
    }
    mpz_class mant(digits, 10);
    mpz_class ten = 10;
    mpz_class factor;
    mpz_pow_ui(factor.get_mpz_t(), ten.get_mpz_t(), static_cast<unsigned long>(std::labs(scale)));
    Rational r = scale >= 0 ? Rational(mant * factor) : Rational(mant, factor);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string formatRational(const Rational& value)
{
    Rational r = value;
    r.canonicalize();
    if (r.get_den() == 1) {
        return r.get_num().get_str();
    }
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational fromDouble(double v)
{
    if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFiniteEntry, "cannot convert a non-finite value to a rational");
    }
    Rational r(v);
    r.canonicalize();
    return r;
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
{
}

RationalMatrix RationalMatrix::identity(int n)
{
    RationalMatrix I(n, n);
    for (int i = 0; i < n; ++i) {
        I(i, i) = 1;
    }
    return I;
}

RationalMatrix RationalMatrix::fromDouble(const Matrix& M)
{
    RationalMatrix out(static_cast<int>(M.rows()), static_cast<int>(M.cols()));
    for (int i = 0; i < out.rows(); ++i) {
        for (int j = 0; j < out.cols(); ++j) {
            out(i, j) = ati::fromDouble(M(i, j));
        }
    }
    return out;
}

RationalMatrix RationalMatrix::operator*(const RationalMatrix& rhs) const
{
    if (cols_ != rhs.rows_) {
        throw Error(ErrorCode::DimensionMismatch, "rational matrix product shape mismatch");
    }
    RationalMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) {
                continue;
            }
            for (int j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

bool RationalMatrix::operator==(const RationalMatrix& rhs) const
{
    return rows_ == rhs.rows_ && cols_ == rhs.cols_ && data_ == rhs.data_;
}

bool RationalMatrix::isZero() const
{
    for (const Rational& v : data_) {
        if (v != 0) {
            return false;
        }
    }
    return true;
}

Matrix RationalMatrix::toDouble() const
{
    Matrix M(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            M(i, j) = (*this)(i, j).get_d();
        }
    }
    return M;
}

RationalMatrix RationalMatrix::rref(std::vector<int>* pivots) const
{
    RationalMatrix A = *this;
    std::vector<int> piv;
    int r = 0;
    for (int j = 0; j < cols_ && r < rows_; ++j) {
        int sel = -1;
        for (int i = r; i < rows_; ++i) {
            if (A(i, j) != 0) {
                sel = i;
                break;
            }
        }
        if (sel < 0) {
            continue;
        }
        if (sel != r) {
            for (int k = 0; k < cols_; ++k) {
                std::swap(A(sel, k), A(r, k));
            }
        }
        const Rational inv = 1 / A(r, j);
        for (int k = j; k < cols_; ++k) {
            A(r, k) *= inv;
        }
        for (int i = 0; i < rows_; ++i) {
            if (i == r || A(i, j) == 0) {
                continue;
            }
            const Rational f = A(i, j);
            for (int k = j; k < cols_; ++k) {
                A(i, k) -= f * A(r, k);
            }
        }
        piv.push_back(j);
        ++r;
    }
    if (pivots != nullptr) {
        *pivots = std::move(piv);
    }
    return A;
}

int RationalMatrix::rank() const
{
    std::vector<int> piv;
    rref(&piv);
    return static_cast<int>(piv.size());
}

RationalMatrix RationalMatrix::leftNullSpace() const
{
    // Null space of the transpose from its reduced echelon form.
    RationalMatrix T(cols_, rows_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            T(j, i) = (*this)(i, j);
        }
    }
    std::vector<int> piv;
    const RationalMatrix E = T.rref(&piv);
    std::vector<bool> isPivot(static_cast<std::size_t>(rows_), false);
    for (int p : piv) {
        isPivot[static_cast<std::size_t>(p)] = true;
    }
    RationalMatrix N(rows_ - static_cast<int>(piv.size()), rows_);
    int k = 0;
    for (int free = 0; free < rows_; ++free) {
        if (isPivot[static_cast<std::size_t>(free)]) {
            continue;
        }
        N(k, free) = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) {
            N(k, piv[r]) = -E(static_cast<int>(r), free);
        }
        ++k;
    }
    return N;
}

} // namespace ati
