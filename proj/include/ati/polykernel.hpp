#pragma once

#include <optional>
#include <vector>

#include "ati/poly.hpp"

namespace ati {

/// Kernel representation R(sigma) w = c of an affine time-invariant behavior.
///
/// The offset is either a constant vector (`c`, one entry per row of R) or a
/// finite sequence c(1..N) (`sequence`, one g-vector per sample). A
/// representation is constant exactly when `sequence` is empty.
struct AffineKernelRep {
    PolyMatrix R;
    RationalVector c;
    std::vector<RationalVector> sequence;

    bool isConstant() const noexcept { return sequence.empty(); }
    int g() const noexcept { return R.rows(); }
    int q() const noexcept { return R.cols(); }

    /// Throws DimensionMismatch when the offset does not match the row count.
    void validate() const;
};

/// U R V = [diag(factors) 0; 0 0] with U, V unimodular and monic factors forming a divisibility chain.
struct SmithDecomposition {
    PolyMatrix U;
    PolyMatrix V;
    std::vector<Poly> factors;

    int rank() const noexcept { return static_cast<int>(factors.size()); }
};

/// U R = [R1; 0] with U unimodular and R1 of full row rank.
struct RowCompression {
    PolyMatrix U;
    PolyMatrix reduced;
    int rank = 0;
};

/// Rank over the field of rational functions (fraction-free elimination).
int polyRank(const PolyMatrix& R);

SmithDecomposition smithForm(const PolyMatrix& R);

/// Unimodular row operations only; the nonzero rows come first.
RowCompression rowCompress(const PolyMatrix& R);

/// Unimodular U with U R row-reduced (leading row coefficient matrix of full rank).
/// R must have full row rank.
RowCompression rowReduce(const PolyMatrix& R);

/// Generators of the left syzygy module { lambda : lambda R = 0 }, one per row of the
/// result, with integer coefficients and minimal row degrees. Empty (0 rows) when R
/// has full row rank.
PolyMatrix syzygyBasis(const PolyMatrix& R);

/// lambda(1) c = 0 for every syzygy generator.
bool consistentConstant(const AffineKernelRep& rep);

struct SequenceConsistency {
    bool consistent = false;
    /// Window length used in the block-Toeplitz truncation.
    int window = 0;
    /// Number of window shifts tested over the supplied samples.
    int shifts = 0;
    /// Maximal generator degree of the syzygy module (-1 when it is trivial).
    int syzygyDegree = -1;
    /// window >= syzygyDegree + 1, so passing windows decide consistency of the supplied samples.
    bool certified = false;
    int rankToeplitz = 0;
    int rankAugmented = 0;
};

/// Block-Toeplitz truncation of R with `window` block rows.
RationalMatrix blockToeplitz(const PolyMatrix& R, int window);

/// Rouche-Capelli test on every length-`window` shift of the supplied offset samples.
/// window = 0 uses all samples at once. Constant offsets are extended over `window` samples.
SequenceConsistency consistentSequence(const AffineKernelRep& rep, int window = 0);

/// Equivalent representation with full-row-rank R.
AffineKernelRep minimize(const AffineKernelRep& rep);

/// Same behavior test for constant-offset representations.
bool equivalent(const AffineKernelRep& a, const AffineKernelRep& b);

/// Unimodular X with b.R = X a.R for minimal a and b, if one exists.
std::optional<PolyMatrix> unimodularLink(const PolyMatrix& from, const PolyMatrix& to);

/// sum_i R_i w(t+i) - c(t) for t = 1..L-deg(R); rows of `window` are samples.
Matrix behaviorApply(const AffineKernelRep& rep, const Matrix& window);

/// Rank of R(lambda) is constant over the complex plane.
bool controllableKernel(const AffineKernelRep& rep);

/// Maximal row degree of a minimal row-reduced representation.
int lagOf(const AffineKernelRep& rep);

} // namespace ati
