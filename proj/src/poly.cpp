#include "ati/poly.hpp"

#include <algorithm>
#include <sstream>

namespace ati {

Poly::Poly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs))
{
    trim();
}

Poly::Poly(int constant)
{
    if (constant != 0) {
        coeffs_.emplace_back(constant);
    }
}

Poly::Poly(const Rational& constant)
{
    if (constant != 0) {
        coeffs_.push_back(constant);
    }
}

Poly Poly::monomial(const Rational& c, int k)
{
    if (c == 0) {
        return {};
    }
    std::vector<Rational> v(static_cast<std::size_t>(k) + 1);
    v.back() = c;
    return Poly(std::move(v));
}

Poly Poly::xi()
{
    return monomial(1, 1);
}

void Poly::trim()
{
    while (!coeffs_.empty() && coeffs_.back() == 0) {
        coeffs_.pop_back();
    }
}

Rational Poly::coeff(int k) const
{
    if (k < 0 || k > degree()) {
        return 0;
    }
    return coeffs_[static_cast<std::size_t>(k)];
}

const Rational& Poly::lead() const
{
    if (coeffs_.empty()) {
        throw Error(ErrorCode::ZeroMatrix, "zero polynomial has no leading coefficient");
    }
    return coeffs_.back();
}

Poly Poly::operator-() const
{
    Poly out = *this;
    for (Rational& c : out.coeffs_) {
        c = -c;
    }
    return out;
}

Poly& Poly::operator+=(const Poly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(rhs.coeffs_.size());
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        coeffs_[i] += rhs.coeffs_[i];
    }
    trim();
    return *this;
}

Poly& Poly::operator-=(const Poly& rhs)
{
    if (rhs.coeffs_.size() > coeffs_.size()) {
        coeffs_.resize(rhs.coeffs_.size());
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        coeffs_[i] -= rhs.coeffs_[i];
    }
    trim();
    return *this;
}

Poly& Poly::operator*=(const Poly& rhs)
{
    if (isZero() || rhs.isZero()) {
        coeffs_.clear();
        return *this;
    }
    std::vector<Rational> out(coeffs_.size() + rhs.coeffs_.size() - 1);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] == 0) {
            continue;
        }
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
            out[i + j] += coeffs_[i] * rhs.coeffs_[j];
        }
    }
    coeffs_ = std::move(out);
    trim();
    return *this;
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b)
{
    if (b.isZero()) {
        throw Error(ErrorCode::InvalidArgument, "polynomial division by zero");
    }
    if (a.degree() < b.degree()) {
        return {Poly(), a};
    }
    std::vector<Rational> rem = a.coeffs_;
    std::vector<Rational> quot(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    const Rational invLead = 1 / b.lead();
    const int db = b.degree();
    for (int k = a.degree(); k >= db; --k) {
        const Rational f = rem[static_cast<std::size_t>(k)] * invLead;
        if (f == 0) {
            continue;
        }
        quot[static_cast<std::size_t>(k - db)] = f;
        for (int i = 0; i <= db; ++i) {
            rem[static_cast<std::size_t>(k - db + i)] -= f * b.coeffs_[static_cast<std::size_t>(i)];
        }
    }
    rem.resize(static_cast<std::size_t>(db));
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

bool Poly::divides(const Poly& other) const
{
    if (isZero()) {
        return other.isZero();
    }
    return divmod(other, *this).second.isZero();
}

Rational Poly::eval(const Rational& x) const
{
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + *it;
    }
    return acc;
}

double Poly::eval(double x) const
{
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        acc = acc * x + it->get_d();
    }
    return acc;
}

Poly Poly::monic() const
{
    if (isZero()) {
        return {};
    }
    Poly out = *this;
    const Rational inv = 1 / lead();
    for (Rational& c : out.coeffs_) {
        c *= inv;
    }
    return out;
}

Poly Poly::shifted(int k) const
{
    if (isZero() || k == 0) {
        return *this;
    }
    std::vector<Rational> v(static_cast<std::size_t>(k));
    v.insert(v.end(), coeffs_.begin(), coeffs_.end());
    return Poly(std::move(v));
}

std::string Poly::toString() const
{
    if (isZero()) {
        return "0";
    }
    std::ostringstream os;
    bool first = true;
    for (int k = degree(); k >= 0; --k) {
        Rational c = coeffs_[static_cast<std::size_t>(k)];
        if (c == 0) {
            continue;
        }
        const bool neg = c < 0;
        if (neg) {
            c = -c;
        }
        if (first) {
            os << (neg ? "-" : "");
        } else {
            os << (neg ? " - " : " + ");
        }
        first = false;
        const bool unit = c == 1;
        if (!unit || k == 0) {
            os << formatRational(c);
        }
        if (k > 0) {
            os << (unit ? "" : "*") << "xi";
            if (k > 1) {
                os << "^" << k;
            }
        }
    }
    return os.str();
}

Poly gcd(Poly a, Poly b)
{
    while (!b.isZero()) {
        Poly r = Poly::divmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

PolyMatrix::PolyMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
{
}

PolyMatrix PolyMatrix::identity(int n)
{
    PolyMatrix I(n, n);
    for (int i = 0; i < n; ++i) {
        I(i, i) = Poly(1);
    }
    return I;
}

PolyMatrix PolyMatrix::fromCoefficients(const std::vector<RationalMatrix>& coefficient)
{
    if (coefficient.empty()) {
        throw Error(ErrorCode::InvalidArgument, "need at least one coefficient matrix");
    }
    const int g = coefficient.front().rows();
    const int q = coefficient.front().cols();
    PolyMatrix R(g, q);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < q; ++j) {
            std::vector<Rational> c;
            c.reserve(coefficient.size());
            for (const RationalMatrix& M : coefficient) {
                if (M.rows() != g || M.cols() != q) {
                    throw Error(ErrorCode::DimensionMismatch, "coefficient matrices differ in shape");
                }
                c.push_back(M(i, j));
            }
            R(i, j) = Poly(std::move(c));
        }
    }
    return R;
}

PolyMatrix PolyMatrix::constant(const RationalMatrix& M)
{
    return fromCoefficients({M});
}

int PolyMatrix::degree() const
{
    int d = -1;
    for (const Poly& p : data_) {
        d = std::max(d, p.degree());
    }
    return d;
}

int PolyMatrix::rowDegree(int i) const
{
    int d = -1;
    for (int j = 0; j < cols_; ++j) {
        d = std::max(d, (*this)(i, j).degree());
    }
    return d;
}

bool PolyMatrix::isZero() const
{
    return std::all_of(data_.begin(), data_.end(), [](const Poly& p) { return p.isZero(); });
}

bool PolyMatrix::isZeroRow(int i) const
{
    return rowDegree(i) < 0;
}

RationalMatrix PolyMatrix::coefficient(int k) const
{
    RationalMatrix M(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            M(i, j) = (*this)(i, j).coeff(k);
        }
    }
    return M;
}

RationalMatrix PolyMatrix::eval(const Rational& x) const
{
    RationalMatrix M(rows_, cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            M(i, j) = (*this)(i, j).eval(x);
        }
    }
    return M;
}

PolyMatrix PolyMatrix::operator*(const PolyMatrix& rhs) const
{
    if (cols_ != rhs.rows_) {
        throw Error(ErrorCode::DimensionMismatch, "polynomial matrix product shape mismatch");
    }
    PolyMatrix out(rows_, rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int k = 0; k < cols_; ++k) {
            const Poly& a = (*this)(i, k);
            if (a.isZero()) {
                continue;
            }
            for (int j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

PolyMatrix PolyMatrix::operator+(const PolyMatrix& rhs) const
{
    if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
        throw Error(ErrorCode::DimensionMismatch, "polynomial matrix sum shape mismatch");
    }
    PolyMatrix out = *this;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        out.data_[i] += rhs.data_[i];
    }
    return out;
}

PolyMatrix PolyMatrix::transpose() const
{
    PolyMatrix out(cols_, rows_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

PolyMatrix PolyMatrix::rowsRange(int first, int count) const
{
    PolyMatrix out(count, cols_);
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < cols_; ++j) {
            out(i, j) = (*this)(first + i, j);
        }
    }
    return out;
}

PolyMatrix PolyMatrix::colsRange(int first, int count) const
{
    PolyMatrix out(rows_, count);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < count; ++j) {
            out(i, j) = (*this)(i, first + j);
        }
    }
    return out;
}

PolyMatrix PolyMatrix::stacked(const PolyMatrix& rhs) const
{
    if (rows_ > 0 && rhs.rows_ > 0 && cols_ != rhs.cols_) {
        throw Error(ErrorCode::DimensionMismatch, "cannot stack matrices with different column counts");
    }
    PolyMatrix out(rows_ + rhs.rows_, rows_ > 0 ? cols_ : rhs.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j) {
            out(i, j) = (*this)(i, j);
        }
    }
    for (int i = 0; i < rhs.rows_; ++i) {
        for (int j = 0; j < rhs.cols_; ++j) {
            out(rows_ + i, j) = rhs(i, j);
        }
    }
    return out;
}

void PolyMatrix::swapRows(int a, int b)
{
    if (a == b) {
        return;
    }
    for (int j = 0; j < cols_; ++j) {
        std::swap((*this)(a, j), (*this)(b, j));
    }
}

void PolyMatrix::swapCols(int a, int b)
{
    if (a == b) {
        return;
    }
    for (int i = 0; i < rows_; ++i) {
        std::swap((*this)(i, a), (*this)(i, b));
    }
}

void PolyMatrix::addRowMultiple(int dst, int src, const Poly& factor)
{
    if (factor.isZero()) {
        return;
    }
    for (int j = 0; j < cols_; ++j) {
        if (!(*this)(src, j).isZero()) {
            (*this)(dst, j) += factor * (*this)(src, j);
        }
    }
}

void PolyMatrix::addColMultiple(int dst, int src, const Poly& factor)
{
    if (factor.isZero()) {
        return;
    }
    for (int i = 0; i < rows_; ++i) {
        if (!(*this)(i, src).isZero()) {
            (*this)(i, dst) += factor * (*this)(i, src);
        }
    }
}

void PolyMatrix::scaleRow(int i, const Rational& s)
{
    const Poly f(s);
    for (int j = 0; j < cols_; ++j) {
        (*this)(i, j) *= f;
    }
}

Poly PolyMatrix::determinant() const
{
    if (rows_ != cols_) {
        throw Error(ErrorCode::DimensionMismatch, "determinant of a non-square matrix");
    }
    const int n = rows_;
    if (n == 0) {
        return Poly(1);
    }
    PolyMatrix M = *this;
    Poly prev(1);
    bool negate = false;
    for (int k = 0; k < n - 1; ++k) {
        if (M(k, k).isZero()) {
            int sel = -1;
            for (int i = k + 1; i < n; ++i) {
                if (!M(i, k).isZero()) {
                    sel = i;
                    break;
                }
            }
            if (sel < 0) {
                return {};
            }
            M.swapRows(k, sel);
            negate = !negate;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                Poly num = M(k, k) * M(i, j) - M(i, k) * M(k, j);
                M(i, j) = Poly::divmod(num, prev).first;
            }
            M(i, k) = Poly();
        }
        prev = M(k, k);
    }
    Poly det = M(n - 1, n - 1);
    return negate ? -det : det;
}

bool PolyMatrix::isUnimodular() const
{
    if (rows_ != cols_) {
        return false;
    }
    const Poly d = determinant();
    return !d.isZero() && d.isConstant();
}

std::string PolyMatrix::toString() const
{
    std::ostringstream os;
    os << "[";
    for (int i = 0; i < rows_; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < cols_; ++j) {
            os << (j ? ", " : "") << (*this)(i, j).toString();
        }
    }
    os << "]";
    return os.str();
}

} // namespace ati
