#include "ati/polykernel.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ati {

void AffineKernelRep::validate() const
{
    if (isConstant()) {
        if (static_cast<int>(c.size()) != R.rows()) {
            throw Error(ErrorCode::DimensionMismatch,
                "offset has " + std::to_string(c.size()) + " entries, R has " + std::to_string(R.rows()) + " rows");
        }
        return;
    }
    for (const RationalVector& s : sequence) {
        if (static_cast<int>(s.size()) != R.rows()) {
            throw Error(ErrorCode::DimensionMismatch, "offset sample size does not match the row count of R");
        }
    }
}

int polyRank(const PolyMatrix& R)
{
    PolyMatrix M = R;
    int r = 0;
    for (int j = 0; j < M.cols() && r < M.rows(); ++j) {
        int sel = -1;
        for (int i = r; i < M.rows(); ++i) {
            if (!M(i, j).isZero() && (sel < 0 || M(i, j).degree() < M(sel, j).degree())) {
                sel = i;
            }
        }
        if (sel < 0) {
            continue;
        }
        M.swapRows(r, sel);
        const Poly pivot = M(r, j);
        for (int i = r + 1; i < M.rows(); ++i) {
            if (M(i, j).isZero()) {
                continue;
            }
            // row_i <- pivot * row_i - M(i,j) * row_r keeps everything polynomial.
            const Poly factor = M(i, j);
            for (int k = j; k < M.cols(); ++k) {
                M(i, k) = pivot * M(i, k) - factor * M(r, k);
            }
        }
        ++r;
    }
    return r;
}

SmithDecomposition smithForm(const PolyMatrix& R)
{
    if (R.isZero()) {
        throw Error(ErrorCode::ZeroMatrix, "Smith form of a zero matrix is undefined here");
    }
    const int g = R.rows();
    const int q = R.cols();
    PolyMatrix S = R;
    SmithDecomposition out {PolyMatrix::identity(g), PolyMatrix::identity(q), {}};
    PolyMatrix& U = out.U;
    PolyMatrix& V = out.V;

    for (int k = 0; k < std::min(g, q); ++k) {
        bool found = true;
        for (;;) {
            // Pivot on the lowest-degree nonzero entry of the trailing block.
            int pi = -1;
            int pj = -1;
            for (int i = k; i < g; ++i) {
                for (int j = k; j < q; ++j) {
                    if (!S(i, j).isZero() && (pi < 0 || S(i, j).degree() < S(pi, pj).degree())) {
                        pi = i;
                        pj = j;
                    }
                }
            }
            if (pi < 0) {
                found = false;
                break;
            }
            S.swapRows(k, pi);
            U.swapRows(k, pi);
            S.swapCols(k, pj);
            V.swapCols(k, pj);

            bool clean = true;
            for (int i = k + 1; i < g; ++i) {
                if (S(i, k).isZero()) {
                    continue;
                }
                auto [quot, rem] = Poly::divmod(S(i, k), S(k, k));
                S.addRowMultiple(i, k, -quot);
                U.addRowMultiple(i, k, -quot);
                clean = clean && rem.isZero();
            }
            for (int j = k + 1; j < q; ++j) {
                if (S(k, j).isZero()) {
                    continue;
                }
                auto [quot, rem] = Poly::divmod(S(k, j), S(k, k));
                S.addColMultiple(j, k, -quot);
                V.addColMultiple(j, k, -quot);
                clean = clean && rem.isZero();
            }
            if (!clean) {
                continue;
            }

            // Divisibility chain: pull any entry the pivot does not divide into row k.
            int bad = -1;
            for (int i = k + 1; i < g && bad < 0; ++i) {
                for (int j = k + 1; j < q; ++j) {
                    if (!S(k, k).divides(S(i, j))) {
                        bad = i;
                        break;
                    }
                }
            }
            if (bad < 0) {
                break;
            }
            S.addRowMultiple(k, bad, Poly(1));
            U.addRowMultiple(k, bad, Poly(1));
        }
        if (!found) {
            break;
        }
        const Rational inv = 1 / S(k, k).lead();
        S.scaleRow(k, inv);
        U.scaleRow(k, inv);
        out.factors.push_back(S(k, k));
    }
    return out;
}

RowCompression rowCompress(const PolyMatrix& R)
{
    const int g = R.rows();
    RowCompression out {PolyMatrix::identity(g), R, 0};
    PolyMatrix& S = out.reduced;
    PolyMatrix& U = out.U;
    int r = 0;
    for (int j = 0; j < R.cols() && r < g; ++j) {
        for (;;) {
            int sel = -1;
            for (int i = r; i < g; ++i) {
                if (!S(i, j).isZero() && (sel < 0 || S(i, j).degree() < S(sel, j).degree())) {
                    sel = i;
                }
            }
            if (sel < 0) {
                break;
            }
            S.swapRows(r, sel);
            U.swapRows(r, sel);
            bool clean = true;
            for (int i = r + 1; i < g; ++i) {
                if (S(i, j).isZero()) {
                    continue;
                }
                auto [quot, rem] = Poly::divmod(S(i, j), S(r, j));
                S.addRowMultiple(i, r, -quot);
                U.addRowMultiple(i, r, -quot);
                clean = clean && rem.isZero();
            }
            if (clean) {
                ++r;
                break;
            }
        }
    }
    out.rank = r;
    return out;
}

RowCompression rowReduce(const PolyMatrix& R)
{
    const int k = R.rows();
    RowCompression out {PolyMatrix::identity(k), R, k};
    PolyMatrix& M = out.reduced;
    PolyMatrix& U = out.U;
    for (int i = 0; i < k; ++i) {
        if (M.isZeroRow(i)) {
            throw Error(ErrorCode::InvalidArgument, "row reduction needs a matrix of full row rank");
        }
    }
    for (;;) {
        std::vector<int> deg(static_cast<std::size_t>(k));
        RationalMatrix lead(k, M.cols());
        for (int i = 0; i < k; ++i) {
            deg[static_cast<std::size_t>(i)] = M.rowDegree(i);
            if (deg[static_cast<std::size_t>(i)] < 0) {
                throw Error(ErrorCode::InvalidArgument, "row reduction needs a matrix of full row rank");
            }
            for (int j = 0; j < M.cols(); ++j) {
                lead(i, j) = M(i, j).coeff(deg[static_cast<std::size_t>(i)]);
            }
        }
        const RationalMatrix N = lead.leftNullSpace();
        if (N.rows() == 0) {
            break;
        }
        int top = -1;
        for (int i = 0; i < k; ++i) {
            if (N(0, i) != 0 && (top < 0 || deg[static_cast<std::size_t>(i)] > deg[static_cast<std::size_t>(top)])) {
                top = i;
            }
        }
        const Rational pivot = N(0, top);
        for (int i = 0; i < k; ++i) {
            if (i == top || N(0, i) == 0) {
                continue;
            }
            const Poly factor = Poly::monomial(Rational(N(0, i) / pivot),
                deg[static_cast<std::size_t>(top)] - deg[static_cast<std::size_t>(i)]);
            M.addRowMultiple(top, i, factor);
            U.addRowMultiple(top, i, factor);
        }
    }
    return out;
}

namespace {

// Scales a polynomial row to integer coefficients with unit content and a
// positive leading coefficient on its first nonzero entry.
void makePrimitiveRow(PolyMatrix& M, int i)
{
    mpz_class den = 1;
    mpz_class content = 0;
    for (int j = 0; j < M.cols(); ++j) {
        for (const Rational& c : M(i, j).coefficients()) {
            mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
        }
    }
    for (int j = 0; j < M.cols(); ++j) {
        for (const Rational& c : M(i, j).coefficients()) {
            const mpz_class num = c.get_num() * (den / c.get_den());
            mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), num.get_mpz_t());
        }
    }
    if (content == 0) {
        return;
    }
    Rational scale(den, content);
    for (int j = 0; j < M.cols(); ++j) {
        if (!M(i, j).isZero()) {
            if (M(i, j).lead() < 0) {
                scale = -scale;
            }
            break;
        }
    }
    scale.canonicalize();
    M.scaleRow(i, scale);
}

RationalVector evalTimes(const PolyMatrix& M, const Rational& at, const RationalVector& v)
{
    const RationalMatrix E = M.eval(at);
    RationalVector out(static_cast<std::size_t>(E.rows()));
    for (int i = 0; i < E.rows(); ++i) {
        for (int j = 0; j < E.cols(); ++j) {
            out[static_cast<std::size_t>(i)] += E(i, j) * v[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

} // namespace

PolyMatrix syzygyBasis(const PolyMatrix& R)
{
    const int g = R.rows();
    if (R.isZero()) {
        return PolyMatrix::identity(g);
    }
    const SmithDecomposition smith = smithForm(R);
    const int r = smith.rank();
    if (r == g) {
        return PolyMatrix(0, g);
    }
    PolyMatrix K = rowReduce(smith.U.rowsRange(r, g - r)).reduced;
    for (int i = 0; i < K.rows(); ++i) {
        makePrimitiveRow(K, i);
    }
    return K;
}

bool consistentConstant(const AffineKernelRep& rep)
{
    rep.validate();
    if (!rep.isConstant()) {
        throw Error(ErrorCode::InvalidArgument, "consistentConstant needs a constant offset");
    }
    const PolyMatrix K = syzygyBasis(rep.R);
    const RationalVector lc = evalTimes(K, Rational(1), rep.c);
    const bool bySyzygy = std::all_of(lc.begin(), lc.end(), [](const Rational& v) { return v == 0; });

    bool bySmith = true;
    if (rep.R.isZero()) {
        bySmith = std::all_of(rep.c.begin(), rep.c.end(), [](const Rational& v) { return v == 0; });
    } else {
        const SmithDecomposition smith = smithForm(rep.R);
        const RationalVector uc = evalTimes(smith.U, Rational(1), rep.c);
        for (std::size_t i = static_cast<std::size_t>(smith.rank()); i < uc.size(); ++i) {
            bySmith = bySmith && uc[i] == 0;
        }
    }
    if (bySyzygy != bySmith) {
        throw std::logic_error("syzygy and Smith consistency tests disagree");
    }
    return bySyzygy;
}

RationalMatrix blockToeplitz(const PolyMatrix& R, int window)
{
    const int g = R.rows();
    const int q = R.cols();
    const int d = std::max(R.degree(), 0);
    RationalMatrix RT(g * window, q * (window + d));
    for (int k = 0; k <= d; ++k) {
        const RationalMatrix Rk = R.coefficient(k);
        for (int t = 0; t < window; ++t) {
            for (int i = 0; i < g; ++i) {
                for (int j = 0; j < q; ++j) {
                    RT(t * g + i, (t + k) * q + j) = Rk(i, j);
                }
            }
        }
    }
    return RT;
}

SequenceConsistency consistentSequence(const AffineKernelRep& rep, int window)
{
    rep.validate();
    const int g = rep.g();
    const int d = std::max(rep.R.degree(), 0);
    const PolyMatrix K = syzygyBasis(rep.R);

    SequenceConsistency out;
    out.syzygyDegree = K.rows() == 0 ? -1 : K.degree();

    std::vector<RationalVector> samples = rep.sequence;
    if (rep.isConstant()) {
        if (window <= 0) {
            window = std::max(d + 1, out.syzygyDegree + 1);
        }
        samples.assign(static_cast<std::size_t>(window), rep.c);
    } else if (window <= 0) {
        window = static_cast<int>(samples.size());
    }
    if (window < d + 1) {
        throw Error(ErrorCode::WindowTooShort,
            "window of " + std::to_string(window) + " samples is shorter than deg(R) + 1 = " + std::to_string(d + 1));
    }
    if (window > static_cast<int>(samples.size())) {
        throw Error(ErrorCode::WindowTooShort, "window exceeds the number of supplied offset samples");
    }
    out.window = window;
    out.certified = window >= out.syzygyDegree + 1;

    const RationalMatrix RT = blockToeplitz(rep.R, window);
    out.rankToeplitz = RT.rank();
    out.consistent = true;
    const int shifts = static_cast<int>(samples.size()) - window + 1;
    for (int tau = 0; tau < shifts; ++tau) {
        RationalMatrix aug(RT.rows(), RT.cols() + 1);
        for (int i = 0; i < RT.rows(); ++i) {
            for (int j = 0; j < RT.cols(); ++j) {
                aug(i, j) = RT(i, j);
            }
        }
        for (int t = 0; t < window; ++t) {
            for (int i = 0; i < g; ++i) {
                aug(t * g + i, RT.cols()) = samples[static_cast<std::size_t>(tau + t)][static_cast<std::size_t>(i)];
            }
        }
        const int ra = aug.rank();
        out.rankAugmented = std::max(out.rankAugmented, ra);
        ++out.shifts;
        if (ra != out.rankToeplitz) {
            out.consistent = false;
            break;
        }
    }
    return out;
}

AffineKernelRep minimize(const AffineKernelRep& rep)
{
    rep.validate();
    if (!rep.isConstant()) {
        throw Error(ErrorCode::InvalidArgument, "minimize needs a constant offset");
    }
    const RowCompression rc = rowCompress(rep.R);
    const RationalVector shifted = evalTimes(rc.U, Rational(1), rep.c);
    for (std::size_t i = static_cast<std::size_t>(rc.rank); i < shifted.size(); ++i) {
        if (shifted[i] != 0) {
            throw Error(ErrorCode::InconsistentRepresentation,
                "offset has a nonzero component along a syzygy of R; the behavior is empty");
        }
    }
    AffineKernelRep out;
    out.R = rc.reduced.rowsRange(0, rc.rank);
    out.c.assign(shifted.begin(), shifted.begin() + rc.rank);
    return out;
}

std::optional<PolyMatrix> unimodularLink(const PolyMatrix& from, const PolyMatrix& to)
{
    if (from.rows() != to.rows() || from.cols() != to.cols()) {
        return std::nullopt;
    }
    const int g = from.rows();
    if (g == 0) {
        return PolyMatrix(0, 0);
    }
    const SmithDecomposition smith = smithForm(from);
    if (smith.rank() != g) {
        throw Error(ErrorCode::InvalidArgument, "unimodularLink needs a full-row-rank source matrix");
    }
    // from = U^{-1} [D 0] V^{-1}, so to = X from  <=>  to V = [Y D, 0] with X = Y U.
    const PolyMatrix W = to * smith.V;
    for (int i = 0; i < g; ++i) {
        for (int j = g; j < W.cols(); ++j) {
            if (!W(i, j).isZero()) {
                return std::nullopt;
            }
        }
    }
    PolyMatrix Y(g, g);
    for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) {
            auto [quot, rem] = Poly::divmod(W(i, j), smith.factors[static_cast<std::size_t>(j)]);
            if (!rem.isZero()) {
                return std::nullopt;
            }
            Y(i, j) = quot;
        }
    }
    PolyMatrix X = Y * smith.U;
    if (!X.isUnimodular() || !(X * from == to)) {
        return std::nullopt;
    }
    return X;
}

bool equivalent(const AffineKernelRep& a, const AffineKernelRep& b)
{
    if (a.q() != b.q()) {
        return false;
    }
    const AffineKernelRep ma = minimize(a);
    const AffineKernelRep mb = minimize(b);
    if (ma.g() != mb.g()) {
        return false;
    }
    const auto X = unimodularLink(ma.R, mb.R);
    if (!X) {
        return false;
    }
    return evalTimes(*X, Rational(1), ma.c) == mb.c;
}

Matrix behaviorApply(const AffineKernelRep& rep, const Matrix& window)
{
    rep.validate();
    if (window.cols() != rep.q()) {
        throw Error(ErrorCode::DimensionMismatch,
            "window has " + std::to_string(window.cols()) + " variables, R has " + std::to_string(rep.q()));
    }
    const int d = std::max(rep.R.degree(), 0);
    const int L = static_cast<int>(window.rows());
    if (L < d + 1) {
        throw Error(ErrorCode::WindowTooShort,
            "window of length " + std::to_string(L) + " needs at least deg(R) + 1 = " + std::to_string(d + 1));
    }
    const int count = L - d;
    if (!rep.isConstant() && static_cast<int>(rep.sequence.size()) < count) {
        throw Error(ErrorCode::WindowTooShort, "offset sequence is shorter than the evaluation range");
    }
    std::vector<Matrix> coeff;
    for (int k = 0; k <= d; ++k) {
        coeff.push_back(rep.R.coefficient(k).toDouble());
    }
    Matrix out(count, rep.g());
    for (int t = 0; t < count; ++t) {
        Vector acc = Vector::Zero(rep.g());
        for (int k = 0; k <= d; ++k) {
            acc += coeff[static_cast<std::size_t>(k)] * window.row(t + k).transpose();
        }
        const RationalVector& off = rep.isConstant() ? rep.c : rep.sequence[static_cast<std::size_t>(t)];
        for (int i = 0; i < rep.g(); ++i) {
            acc(i) -= off[static_cast<std::size_t>(i)].get_d();
        }
        out.row(t) = acc.transpose();
    }
    return out;
}

bool controllableKernel(const AffineKernelRep& rep)
{
    const AffineKernelRep minimal = minimize(rep);
    if (minimal.g() == 0) {
        return true;
    }
    const SmithDecomposition smith = smithForm(minimal.R);
    return std::all_of(smith.factors.begin(), smith.factors.end(), [](const Poly& f) { return f.isConstant(); });
}

int lagOf(const AffineKernelRep& rep)
{
    const AffineKernelRep minimal = minimize(rep);
    if (minimal.g() == 0) {
        return 0;
    }
    const PolyMatrix reduced = rowReduce(minimal.R).reduced;
    int lag = 0;
    for (int i = 0; i < reduced.rows(); ++i) {
        lag = std::max(lag, reduced.rowDegree(i));
    }
    return lag;
}

} // namespace ati
