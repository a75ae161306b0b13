#include "ati/datadriven.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ati {

DataDrivenRep::DataDrivenRep(const Trajectory& wd, int depth) : H_(ati::hankel(wd, depth)), m_(wd.m())
{
}

RankCheck rankConditionAffine(const Matrix& states, const Trajectory& inputs, int L, double tol)
{
    const int T = inputs.length();
    if (states.rows() != T) {
        throw Error(ErrorCode::DimensionMismatch,
            "state and input records differ in length (" + std::to_string(states.rows()) + " vs " + std::to_string(T) + ")");
    }
    const HankelMatrix Hu = hankel(inputs, L);
    const int cols = Hu.columns();
    const int n = static_cast<int>(states.cols());
    Matrix M(n + Hu.entries.rows() + 1, cols);
    M.topRows(n) = states.topRows(cols).transpose();
    M.middleRows(n, Hu.entries.rows()) = Hu.entries;
    M.bottomRows(1).setOnes();

    RankCheck out;
    out.detail = numericalRank(M, tol);
    out.rank = out.detail.rank;
    out.target = inputs.q() * L + n + 1;
    out.holds = out.rank == out.target;
    return out;
}

Vector affineLeastSquares(const Matrix& M, const Vector& b)
{
    const Eigen::Index N = M.cols();
    if (N == 0) {
        throw Error(ErrorCode::EmptyRepresentation, "no columns to combine");
    }
    if (M.rows() != b.size()) {
        throw Error(ErrorCode::DimensionMismatch, "right-hand side has the wrong length");
    }
    // g = g0 + Q2 z, where g0 is the centroid and Q2 spans {g : 1'g = 0}.
    const Vector g0 = Vector::Constant(N, 1.0 / static_cast<double>(N));
    if (N == 1) {
        return g0;
    }
    Eigen::HouseholderQR<Matrix> qr(Matrix::Ones(N, 1));
    const Matrix Q = qr.householderQ() * Matrix::Identity(N, N);
    const Matrix Q2 = Q.rightCols(N - 1);
    const Matrix MQ = M * Q2;
    if (MQ.rows() == 0) {
        return g0;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(MQ);
    cod.setThreshold(defaultRankTolerance(MQ));
    const Vector z = cod.solve(b - M * g0);
    return g0 + Q2 * z;
}

Membership membership(const DataDrivenRep& rep, const Vector& window, double tol)
{
    const Matrix& H = rep.hankel().entries;
    if (rep.columns() == 0) {
        throw Error(ErrorCode::EmptyRepresentation, "data matrix has no columns");
    }
    if (window.size() != H.rows()) {
        throw Error(ErrorCode::DimensionMismatch,
            "window has " + std::to_string(window.size()) + " entries, expected " + std::to_string(H.rows()));
    }
    Membership out;
    out.g = affineLeastSquares(H, window);
    out.residual = (H * out.g - window).norm();
    out.isMember = out.residual <= tol * (1.0 + window.norm());
    return out;
}

namespace {

Completion completeImpl(const DataDrivenRep& rep, const Trajectory* prefix, const Trajectory& futureInputs, double tol)
{
    const int q = rep.q();
    const int m = rep.m();
    const int p = rep.p();
    const int L = rep.depth();
    const int tIni = prefix != nullptr ? prefix->length() : 0;
    const int tF = futureInputs.length();
    if (tIni + tF != L) {
        throw Error(ErrorCode::DimensionMismatch,
            "prefix (" + std::to_string(tIni) + ") plus future (" + std::to_string(tF) + ") must equal the depth "
                + std::to_string(L));
    }
    if (prefix != nullptr && prefix->q() != q) {
        throw Error(ErrorCode::DimensionMismatch, "prefix has the wrong number of variables");
    }
    if (futureInputs.q() != m) {
        throw Error(ErrorCode::DimensionMismatch, "future inputs have the wrong number of channels");
    }
    if (rep.columns() == 0) {
        throw Error(ErrorCode::EmptyRepresentation, "data matrix has no columns");
    }
    const Matrix& H = rep.hankel().entries;
    const int constrained = tIni * q + tF * m;
    Matrix Mc(constrained, H.cols());
    Vector b(constrained);
    Matrix Yf(tF * p, H.cols());
    int row = 0;
    for (int t = 0; t < tIni; ++t) {
        Mc.middleRows(row, q) = H.middleRows(static_cast<Eigen::Index>(t) * q, q);
        b.segment(row, q) = prefix->data().row(t).transpose();
        row += q;
    }
    for (int t = 0; t < tF; ++t) {
        const Eigen::Index base = static_cast<Eigen::Index>(tIni + t) * q;
        Mc.middleRows(row, m) = H.middleRows(base, m);
        b.segment(row, m) = futureInputs.data().row(t).transpose();
        row += m;
        Yf.middleRows(static_cast<Eigen::Index>(t) * p, p) = H.middleRows(base + m, p);
    }

    Completion out;
    out.g = affineLeastSquares(Mc, b);
    out.residual = (Mc * out.g - b).norm();
    if (out.residual > tol * (1.0 + b.norm())) {
        throw Error(ErrorCode::Infeasible,
            "prefix and inputs are not matched by the data (residual " + std::to_string(out.residual) + ")");
    }

    // Directions g that keep every constraint (including 1'g) fixed.
    const Matrix A = appendOnesRow(Mc);
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
    const Vector& s = svd.singularValues();
    const double thresh = defaultRankTolerance(A) * (s.size() > 0 ? s(0) : 0.0);
    int rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        rank += s(i) > thresh ? 1 : 0;
    }
    const Eigen::Index nullity = A.cols() - rank;
    if (nullity > 0 && Yf.rows() > 0) {
        const Matrix free = Yf * svd.matrixV().rightCols(nullity);
        out.ambiguity = free.norm();
    }
    const double scale = Yf.rows() > 0 ? Yf.norm() : 0.0;
    if (out.ambiguity > tol * (1.0 + scale)) {
        throw Error(ErrorCode::AmbiguousContinuation,
            "future outputs are not determined by the prefix (spread " + std::to_string(out.ambiguity) + ")");
    }

    const Vector y = Yf * out.g;
    out.outputs.resize(tF, p);
    for (int t = 0; t < tF; ++t) {
        out.outputs.row(t) = y.segment(static_cast<Eigen::Index>(t) * p, p).transpose();
    }
    return out;
}

} // namespace

Completion complete(const DataDrivenRep& rep, const Trajectory& prefix, const Trajectory& futureInputs, double tol)
{
    return completeImpl(rep, &prefix, futureInputs, tol);
}

Completion completeFromInputs(const DataDrivenRep& rep, const Trajectory& futureInputs, double tol)
{
    return completeImpl(rep, nullptr, futureInputs, tol);
}

KernelRecovery recoverKernel(const DataDrivenRep& rep, std::optional<int> order, double tol)
{
    const Matrix M = appendOnesRow(rep.hankel().entries);
    KernelRecovery out;
    out.excitation.detail = numericalRank(M, tol);
    out.excitation.rank = out.excitation.detail.rank;
    if (order) {
        out.excitation.target = rep.m() * rep.depth() + *order + 1;
        out.excitation.holds = out.excitation.rank == out.excitation.target;
        if (!out.excitation.holds) {
            throw Error(ErrorCode::ExcitationDeficient,
                "rank [H; 1'] = " + std::to_string(out.excitation.rank) + ", GAPE needs "
                    + std::to_string(out.excitation.target));
        }
    } else {
        out.excitation.target = out.excitation.rank;
        out.excitation.holds = out.excitation.rank < M.cols();
        if (!out.excitation.holds) {
            throw Error(ErrorCode::ExcitationDeficient,
                "data matrix is column-saturated (rank " + std::to_string(out.excitation.rank)
                    + "); supply the order or more samples");
        }
    }

    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU);
    const int rows = static_cast<int>(M.rows());
    const int laws = rows - out.excitation.rank;
    const int qL = rows - 1;
    out.laws.resize(laws, qL);
    out.offsets.resize(laws);
    for (int k = 0; k < laws; ++k) {
        Vector y = svd.matrixU().col(out.excitation.rank + k);
        // [r, s] [H; 1'] = 0  =>  r w = -s for every window.
        Vector r = y.head(qL);
        double c = -y(qL);
        Eigen::Index arg = 0;
        r.cwiseAbs().maxCoeff(&arg);
        const double scale = r(arg);
        if (scale == 0.0) {
            throw Error(ErrorCode::ExcitationDeficient, "null vector of [H; 1'] constrains only the ones row");
        }
        r /= scale;
        c /= scale;
        out.laws.row(k) = r.transpose();
        out.offsets(k) = c;
    }

    const int q = rep.q();
    const int L = rep.depth();
    std::vector<RationalMatrix> coeff(static_cast<std::size_t>(L), RationalMatrix(laws, q));
    out.rep.c.resize(static_cast<std::size_t>(laws));
    for (int k = 0; k < laws; ++k) {
        for (int blk = 0; blk < L; ++blk) {
            for (int j = 0; j < q; ++j) {
                coeff[static_cast<std::size_t>(blk)](k, j) = fromDouble(out.laws(k, blk * q + j));
            }
        }
        out.rep.c[static_cast<std::size_t>(k)] = fromDouble(out.offsets(k));
    }
    out.rep.R = laws > 0 ? PolyMatrix::fromCoefficients(coeff) : PolyMatrix(0, q);
    return out;
}

Rational nearestRational(double value, long maxDenominator)
{
    if (!std::isfinite(value)) {
        throw Error(ErrorCode::NotRational, "non-finite value");
    }
    // Continued-fraction convergents, stopped before the denominator bound.
    const bool negative = value < 0;
    double x = std::fabs(value);
    mpz_class h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int iter = 0; iter < 64; ++iter) {
        const double a = std::floor(x);
        if (a > 1e15) {
            break;
        }
        const mpz_class ai = static_cast<unsigned long>(a);
        const mpz_class h2 = ai * h1 + h0;
        const mpz_class k2 = ai * k1 + k0;
        if (k2 > maxDenominator) {
            break;
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        const double frac = x - a;
        if (frac < 1e-15) {
            break;
        }
        x = 1.0 / frac;
    }
    if (k1 == 0) {
        return 0;
    }
    Rational r(h1, k1);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

AffineKernelRep rationalizeKernel(const KernelRecovery& recovered, double tol, long maxDenominator)
{
    const int laws = static_cast<int>(recovered.laws.rows());
    const int qL = static_cast<int>(recovered.laws.cols());
    const int q = recovered.rep.q();
    const int L = q > 0 ? qL / q : 0;
    if (laws == 0) {
        AffineKernelRep out;
        out.R = PolyMatrix(0, q);
        return out;
    }
    // Columns visited from the highest-degree block down so each law leads with its top coefficient.
    std::vector<int> order;
    for (int blk = L - 1; blk >= 0; --blk) {
        for (int j = 0; j < q; ++j) {
            order.push_back(blk * q + j);
        }
    }
    Matrix K(laws, qL + 1);
    K.leftCols(qL) = recovered.laws;
    K.col(qL) = recovered.offsets;
    const double scale = K.cwiseAbs().maxCoeff();
    int r = 0;
    for (int col : order) {
        if (r == laws) {
            break;
        }
        Eigen::Index best = r;
        double bestVal = 0.0;
        for (int i = r; i < laws; ++i) {
            if (std::fabs(K(i, col)) > bestVal) {
                bestVal = std::fabs(K(i, col));
                best = i;
            }
        }
        if (bestVal <= tol * scale) {
            continue;
        }
        K.row(r).swap(K.row(best));
        K.row(r) /= K(r, col);
        for (int i = 0; i < laws; ++i) {
            if (i != r) {
                K.row(i) -= K(i, col) * K.row(r);
            }
        }
        ++r;
    }
    if (r != laws) {
        throw Error(ErrorCode::NotRational, "recovered laws are numerically dependent");
    }

    std::vector<RationalMatrix> coeff(static_cast<std::size_t>(L), RationalMatrix(laws, q));
    AffineKernelRep out;
    out.c.resize(static_cast<std::size_t>(laws));
    auto snap = [&](double v) {
        const Rational s = nearestRational(v, maxDenominator);
        if (std::fabs(s.get_d() - v) > tol * (1.0 + std::fabs(v))) {
            throw Error(ErrorCode::NotRational, "entry " + std::to_string(v) + " has no small-denominator neighbour");
        }
        return s;
    };
    for (int k = 0; k < laws; ++k) {
        for (int blk = 0; blk < L; ++blk) {
            for (int j = 0; j < q; ++j) {
                coeff[static_cast<std::size_t>(blk)](k, j) = snap(K(k, blk * q + j));
            }
        }
        out.c[static_cast<std::size_t>(k)] = snap(K(k, qL));
    }
    out.R = PolyMatrix::fromCoefficients(coeff);
    return out;
}

IntegerInvariants invariantsFromData(const Trajectory& wd, int tMax, double tol)
{
    if (tMax < 2) {
        throw Error(ErrorCode::NotConverged, "tMax must be at least 2 to observe a stable rho");
    }
    if (tMax > wd.length()) {
        throw Error(ErrorCode::DepthExceedsLength, "tMax exceeds the data length");
    }
    IntegerInvariants out;
    out.q = wd.q();
    int prev = 0;
    for (int t = 1; t <= tMax; ++t) {
        const Matrix M = appendOnesRow(hankel(wd, t).entries);
        const RankResult rr = numericalRank(M, tol);
        const int d = rr.rank - 1;
        out.dSequence.push_back(d);
        out.rhoSequence.push_back(d - prev);
        prev = d;
        if (t == tMax) {
            out.columnSaturated = rr.rank == M.cols();
        }
    }
    if (out.columnSaturated) {
        throw Error(ErrorCode::ExcitationDeficient,
            "Hankel matrix at depth " + std::to_string(tMax) + " has full column rank; more data needed");
    }
    const auto& rho = out.rhoSequence;
    if (rho[static_cast<std::size_t>(tMax - 1)] != rho[static_cast<std::size_t>(tMax - 2)]) {
        throw Error(ErrorCode::NotConverged, "rho has not stabilized by tMax = " + std::to_string(tMax));
    }
    out.m = rho.back();

    // First t from which rho stays at m.
    int settle = tMax;
    while (settle > 1 && rho[static_cast<std::size_t>(settle - 2)] == out.m) {
        --settle;
    }
    out.ell = settle - 1;
    const int ref = std::max(out.ell, 1);
    out.n = out.dSequence[static_cast<std::size_t>(ref - 1)] - out.m * ref;

    int gammaSum = 0;
    int prevRho = out.q;
    for (int t = 1; t <= tMax; ++t) {
        const int r = rho[static_cast<std::size_t>(t - 1)];
        gammaSum += t * (prevRho - r);
        prevRho = r;
    }
    out.verbatimN = gammaSum;
    out.verbatimEll = 0;
    for (int t = 1; t <= tMax; ++t) {
        if (rho[static_cast<std::size_t>(t - 1)] == out.m) {
            out.verbatimEll = t;
            break;
        }
    }
    return out;
}

} // namespace ati
