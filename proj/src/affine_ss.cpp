#include "ati/affine_ss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace ati {

namespace {

std::string shape(const Matrix& M)
{
    return std::to_string(M.rows()) + "x" + std::to_string(M.cols());
}

} // namespace

AffineStateSpace::AffineStateSpace(Matrix A_, Matrix B_, Matrix C_, Matrix D_, Vector E_, Vector F_)
    : A(std::move(A_)), B(std::move(B_)), C(std::move(C_)), D(std::move(D_)), E(std::move(E_)), F(std::move(F_))
{
    validate();
}

void AffineStateSpace::validate() const
{
    const auto n_ = A.rows();
    const auto m_ = B.cols();
    const auto p_ = C.rows();
    const bool ok = A.cols() == n_ && B.rows() == n_ && C.cols() == n_ && D.rows() == p_ && D.cols() == m_
        && E.size() == n_ && F.size() == p_;
    if (!ok) {
        throw Error(ErrorCode::DimensionMismatch,
            "inconsistent blocks A " + shape(A) + ", B " + shape(B) + ", C " + shape(C) + ", D " + shape(D) + ", E "
                + std::to_string(E.size()) + ", F " + std::to_string(F.size()));
    }
    if (m_ + p_ < 1) {
        throw Error(ErrorCode::DimensionMismatch, "system needs at least one input or output");
    }
}

Trajectory Simulation::states() const
{
    return Trajectory(x, 0);
}

Trajectory Simulation::outputTrajectory() const
{
    return Trajectory(y, 0);
}

namespace {

Simulation run(const Matrix& A, const Matrix& B, const Matrix& C, const Matrix& D, const Vector& E,
    const Vector& F, const Vector& x0, const Trajectory& u)
{
    if (u.q() != B.cols()) {
        throw Error(ErrorCode::DimensionMismatch,
            "input has " + std::to_string(u.q()) + " channels, system expects " + std::to_string(B.cols()));
    }
    if (x0.size() != A.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "initial state has the wrong dimension");
    }
    const int T = u.length();
    Simulation sim;
    sim.x.resize(T, A.rows());
    sim.y.resize(T, C.rows());
    Vector x = x0;
    for (int t = 0; t < T; ++t) {
        const Vector ut = u.data().row(t).transpose();
        sim.x.row(t) = x.transpose();
        sim.y.row(t) = (C * x + D * ut + F).transpose();
        x = A * x + B * ut + E;
    }
    sim.finalState = x;
    return sim;
}

} // namespace

Simulation simulate(const AffineStateSpace& sys, const Vector& x0, const Trajectory& u)
{
    sys.validate();
    return run(sys.A, sys.B, sys.C, sys.D, sys.E, sys.F, x0, u);
}

Simulation simulate(const LiftedStateSpace& sys, const Vector& chi0, const Trajectory& u)
{
    return run(sys.A, sys.B, sys.C, sys.D, Vector::Zero(sys.A.rows()), Vector::Zero(sys.C.rows()), chi0, u);
}

Matrix controllabilityMatrix(const Matrix& A, const Matrix& B)
{
    const auto n = A.rows();
    Matrix K(n, n * B.cols());
    Matrix block = B;
    for (Eigen::Index k = 0; k < n; ++k) {
        K.middleCols(k * B.cols(), B.cols()) = block;
        block = A * block;
    }
    return K;
}

Matrix observabilityMatrix(const Matrix& A, const Matrix& C, int L)
{
    Matrix O(C.rows() * L, A.cols());
    Matrix block = C;
    for (int k = 0; k < L; ++k) {
        O.middleRows(k * C.rows(), C.rows()) = block;
        block = block * A;
    }
    return O;
}

bool controllable(const AffineStateSpace& sys, double tol)
{
    sys.validate();
    if (sys.n() == 0) {
        return true;
    }
    const Matrix K = controllabilityMatrix(sys.A, sys.B);
    if (K.size() == 0) {
        return false;
    }
    return numericalRank(K, tol).rank == sys.n();
}

bool observable(const AffineStateSpace& sys, double tol)
{
    sys.validate();
    if (sys.n() == 0) {
        return true;
    }
    if (sys.p() == 0) {
        return false;
    }
    return numericalRank(observabilityMatrix(sys.A, sys.C, sys.n()), tol).rank == sys.n();
}

int restrictedDimension(const AffineStateSpace& sys, int L, double tol)
{
    sys.validate();
    if (L < 1) {
        throw Error(ErrorCode::InvalidArgument, "window length must be positive");
    }
    int obs = 0;
    if (sys.n() > 0 && sys.p() > 0) {
        obs = numericalRank(observabilityMatrix(sys.A, sys.C, L), tol).rank;
    }
    return sys.m() * L + obs;
}

LiftedStateSpace lift(const AffineStateSpace& sys)
{
    sys.validate();
    const int n = sys.n();
    LiftedStateSpace out;
    out.A = Matrix::Zero(n + 1, n + 1);
    out.A.topLeftCorner(n, n) = sys.A;
    out.A.topRightCorner(n, 1) = sys.E;
    out.A(n, n) = 1.0;
    out.B = Matrix::Zero(n + 1, sys.m());
    out.B.topRows(n) = sys.B;
    out.C.resize(sys.p(), n + 1);
    out.C << sys.C, sys.F;
    out.D = sys.D;
    return out;
}

AffineStateSpace differenceSystem(const AffineStateSpace& sys)
{
    sys.validate();
    return AffineStateSpace(sys.A, sys.B, sys.C, sys.D, Vector::Zero(sys.n()), Vector::Zero(sys.p()));
}

namespace {

void requireFinite(const Vector& v, const char* what)
{
    if (!v.allFinite()) {
        throw Error(ErrorCode::NonFiniteEvaluation, std::string(what) + " is not finite at the operating point");
    }
}

// Jacobian of the expression list with respect to one variable kind.
Matrix analyticJacobian(const std::vector<Expr>& exprs, const Vector& x, const Vector& u, Expr::Kind wrt, int cols)
{
    Matrix J(static_cast<Eigen::Index>(exprs.size()), cols);
    for (std::size_t i = 0; i < exprs.size(); ++i) {
        for (int j = 0; j < cols; ++j) {
            J(static_cast<Eigen::Index>(i), j) = exprs[i].differentiate(x, u, wrt, j + 1).slope;
        }
    }
    return J;
}

template <typename Eval>
Matrix centralDifference(Eval eval, const Vector& x, const Vector& u, bool wrtState, double h, int rows)
{
    const int cols = static_cast<int>(wrtState ? x.size() : u.size());
    Matrix J(rows, cols);
    for (int j = 0; j < cols; ++j) {
        Vector xp = x, xm = x, up = u, um = u;
        if (wrtState) {
            xp(j) += h;
            xm(j) -= h;
        } else {
            up(j) += h;
            um(j) -= h;
        }
        J.col(j) = (eval(xp, up) - eval(xm, um)) / (2.0 * h);
    }
    return J;
}

} // namespace

AffineStateSpace linearize(const NonlinearPlant& plant, const Vector& xbar, const Vector& ubar, const Vector& ybar,
    LinearizationMode mode)
{
    plant.validate();
    if (xbar.size() != plant.n || ubar.size() != plant.m || ybar.size() != plant.p()) {
        throw Error(ErrorCode::DimensionMismatch, "operating point does not match plant dimensions");
    }
    const Vector fbar = plant.evalF(xbar, ubar);
    const Vector hbar = plant.evalH(xbar, ubar);
    requireFinite(fbar, "f");
    requireFinite(hbar, "h");

    Matrix A, B, C, D;
    if (mode.kind == LinearizationMode::Kind::Analytic) {
        A = analyticJacobian(plant.f, xbar, ubar, Expr::Kind::State, plant.n);
        B = analyticJacobian(plant.f, xbar, ubar, Expr::Kind::Input, plant.m);
        C = analyticJacobian(plant.h, xbar, ubar, Expr::Kind::State, plant.n);
        D = analyticJacobian(plant.h, xbar, ubar, Expr::Kind::Input, plant.m);
    } else {
        double scale = 1.0;
        if (xbar.size() > 0) {
            scale = std::max(scale, xbar.cwiseAbs().maxCoeff());
        }
        if (ubar.size() > 0) {
            scale = std::max(scale, ubar.cwiseAbs().maxCoeff());
        }
        const double floor = 64.0 * std::numeric_limits<double>::epsilon() * scale;
        if (!(mode.step >= floor)) {
            throw Error(ErrorCode::StepTooSmall, "finite-difference step must be at least " + std::to_string(floor));
        }
        auto f = [&](const Vector& x, const Vector& u) { return plant.evalF(x, u); };
        auto h = [&](const Vector& x, const Vector& u) { return plant.evalH(x, u); };
        A = centralDifference(f, xbar, ubar, true, mode.step, plant.n);
        B = centralDifference(f, xbar, ubar, false, mode.step, plant.n);
        C = centralDifference(h, xbar, ubar, true, mode.step, plant.p());
        D = centralDifference(h, xbar, ubar, false, mode.step, plant.p());
    }
    for (const Matrix* J : {&A, &B, &C, &D}) {
        if (!J->allFinite()) {
            throw Error(ErrorCode::NonFiniteEvaluation, "Jacobian is not finite at the operating point");
        }
    }
    return AffineStateSpace(A, B, C, D, fbar - xbar, hbar - ybar);
}

} // namespace ati
