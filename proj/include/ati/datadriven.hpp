#pragma once

#include <optional>
#include <vector>

#include "ati/excitation.hpp"
#include "ati/polykernel.hpp"
#include "ati/trajectory.hpp"

namespace ati {

/// Non-parametric model: all affine combinations H g with 1'g = 1 of the depth-L
/// windows of a measured trajectory.
class DataDrivenRep {
public:
    DataDrivenRep(const Trajectory& wd, int depth);

    const HankelMatrix& hankel() const noexcept { return H_; }
    int depth() const noexcept { return H_.depth; }
    int q() const noexcept { return H_.blockRows; }
    int m() const noexcept { return m_; }
    int p() const noexcept { return q() - m_; }
    int columns() const noexcept { return H_.columns(); }

private:
    HankelMatrix H_;
    int m_;
};

/// rank [H_1(x_d|[1,T-L+1]); H_L(u_d); 1'] == mL + n + 1. `states` has one row per
/// sample and may have zero columns for static systems.
RankCheck rankConditionAffine(const Matrix& states, const Trajectory& inputs, int L, double tol = 0.0);

/// Solution of min ||M g - b|| subject to 1'g = 1, minimum norm over the feasible set.
Vector affineLeastSquares(const Matrix& M, const Vector& b);

struct Membership {
    bool isMember = false;
    Vector g;
    double residual = 0.0;
};

/// Default acceptance tolerance for membership and completion residuals.
inline constexpr double kDefaultResidualTol = 1e-8;

Membership membership(const DataDrivenRep& rep, const Vector& window, double tol = kDefaultResidualTol);

struct Completion {
    /// Future outputs, one row per future sample.
    Matrix outputs;
    Vector g;
    double residual = 0.0;
    /// Largest variation of the outputs over the homogeneous solution set.
    double ambiguity = 0.0;
};

/// Unique continuation of a length-T_ini prefix under T_f future inputs, T_ini + T_f = L.
Completion complete(const DataDrivenRep& rep, const Trajectory& prefix, const Trajectory& futureInputs,
    double tol = kDefaultResidualTol);

/// Same, with an empty prefix.
Completion completeFromInputs(const DataDrivenRep& rep, const Trajectory& futureInputs,
    double tol = kDefaultResidualTol);

struct KernelRecovery {
    AffineKernelRep rep;
    /// Numeric [R_0 ... R_{L-1}], one row per law, and the matching offsets.
    Matrix laws;
    Vector offsets;
    RankCheck excitation;
};

/// Left null space of [H; 1'] turned into a kernel representation with deg R <= L-1.
/// When `order` is given the GAPE rank mL + n + 1 is enforced; otherwise the data
/// must not be column-saturated. Throws ExcitationDeficient otherwise.
KernelRecovery recoverKernel(const DataDrivenRep& rep, std::optional<int> order = std::nullopt, double tol = 0.0);

/// Best rational approximation with denominator at most maxDenominator.
Rational nearestRational(double value, long maxDenominator);

/// Canonical exact form of a numerically recovered kernel: reduced row echelon
/// form of the laws (highest-degree block pivoted first) with every entry snapped to
/// a nearby small-denominator rational. Throws NotRational if an entry has none
/// within tol.
AffineKernelRep rationalizeKernel(const KernelRecovery& recovered, double tol = 1e-7, long maxDenominator = 100000);

struct IntegerInvariants {
    int q = 0;
    int m = 0;
    int n = 0;
    int ell = 0;
    /// d_1 .. d_tMax.
    std::vector<int> dSequence;
    /// rho_1 .. rho_tMax.
    std::vector<int> rhoSequence;
    /// Values from the literal gamma-sum formulas, kept as diagnostics.
    int verbatimN = 0;
    int verbatimEll = 0;
    /// rank [H_tMax; 1'] equals the column count, so d_tMax may be capped by data length.
    bool columnSaturated = false;
};

IntegerInvariants invariantsFromData(const Trajectory& wd, int tMax, double tol = 0.0);

} // namespace ati
