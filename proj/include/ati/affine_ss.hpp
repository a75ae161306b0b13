#pragma once

#include "ati/expression.hpp"
#include "ati/trajectory.hpp"

namespace ati {

/// x(t+1) = A x(t) + B u(t) + E,  y(t) = C x(t) + D u(t) + F.
struct AffineStateSpace {
    Matrix A, B, C, D;
    Vector E, F;

    AffineStateSpace() = default;
    AffineStateSpace(Matrix A, Matrix B, Matrix C, Matrix D, Vector E, Vector F);

    int n() const noexcept { return static_cast<int>(A.rows()); }
    int m() const noexcept { return static_cast<int>(B.cols()); }
    int p() const noexcept { return static_cast<int>(C.rows()); }

    /// Throws DimensionMismatch unless the six blocks agree and q = m + p >= 1.
    void validate() const;
};

/// Linear (n+1)-state system that carries the offsets in an extra state fixed at 1.
struct LiftedStateSpace {
    Matrix A, B, C, D;

    int n() const noexcept { return static_cast<int>(A.rows()); }
};

struct Simulation {
    /// States x(1..T), one row per step.
    Matrix x;
    /// Outputs y(1..T).
    Matrix y;
    /// x(T+1), the update computed after the last sample.
    Vector finalState;

    Trajectory states() const;
    Trajectory outputTrajectory() const;
};

/// Runs the recursion from x(1) = x0 over the T samples of u (u.q() must equal m).
Simulation simulate(const AffineStateSpace& sys, const Vector& x0, const Trajectory& u);
/// Same as simulate, for the lifted linear system started at chi(1).
Simulation simulate(const LiftedStateSpace& sys, const Vector& chi0, const Trajectory& u);

/// [B, AB, ..., A^{n-1}B].
Matrix controllabilityMatrix(const Matrix& A, const Matrix& B);
/// [C; CA; ...; CA^{L-1}].
Matrix observabilityMatrix(const Matrix& A, const Matrix& C, int L);

bool controllable(const AffineStateSpace& sys, double tol = 0.0);
bool observable(const AffineStateSpace& sys, double tol = 0.0);

/// Dimension of the set of length-L (u, y) windows: mL + rank O_L.
int restrictedDimension(const AffineStateSpace& sys, int L, double tol = 0.0);

LiftedStateSpace lift(const AffineStateSpace& sys);

/// Same (A, B, C, D) with both offsets removed.
AffineStateSpace differenceSystem(const AffineStateSpace& sys);

struct LinearizationMode {
    enum class Kind { Analytic, FiniteDifference } kind = Kind::Analytic;
    double step = 0.0;

    static LinearizationMode analytic() { return {}; }
    static LinearizationMode finiteDifference(double h) { return {Kind::FiniteDifference, h}; }
};

/// Jacobians at (xbar, ubar) with E = f(xbar, ubar) - xbar and F = h(xbar, ubar) - ybar.
AffineStateSpace linearize(const NonlinearPlant& plant, const Vector& xbar, const Vector& ubar, const Vector& ybar,
    LinearizationMode mode = LinearizationMode::analytic());

} // namespace ati
