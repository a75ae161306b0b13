#pragma once

// Random instance generators shared by the property and acceptance suites.
// Every generator takes an explicit engine so runs are reproducible.

#include <random>
#include <vector>

#include "ati/affine_ss.hpp"
#include "ati/excitation.hpp"
#include "ati/polykernel.hpp"

namespace ati::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniformInt(Rng& rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Matrix randomMatrix(Rng& rng, int rows, int cols, double scale = 1.0)
{
    Matrix M(rows, cols);
    std::normal_distribution<double> nd(0.0, scale);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            M(i, j) = nd(rng);
        }
    }
    return M;
}

inline Vector randomVector(Rng& rng, int n, double scale = 1.0)
{
    return randomMatrix(rng, n, 1, scale).col(0);
}

inline Trajectory randomInputs(Rng& rng, int T, int m)
{
    return Trajectory(randomMatrix(rng, T, m), m);
}

inline double spectralRadius(const Matrix& A)
{
    if (A.rows() == 0) {
        return 0.0;
    }
    return Eigen::EigenSolver<Matrix>(A).eigenvalues().cwiseAbs().maxCoeff();
}

/// Smallest over largest singular value; 0 for rank-deficient matrices.
inline double conditioning(const Matrix& M)
{
    if (M.size() == 0) {
        return 1.0;
    }
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& s = svd.singularValues();
    const auto k = std::min(M.rows(), M.cols());
    return s(0) > 0 ? s(k - 1) / s(0) : 0.0;
}

struct SystemShape {
    int n;
    int m;
    int p;
};

inline SystemShape randomShape(Rng& rng, int maxN = 4, int maxM = 2, int maxP = 2)
{
    return {uniformInt(rng, 1, maxN), uniformInt(rng, 1, maxM), uniformInt(rng, 1, maxP)};
}

/// Controllable affine system with spectral radius in [0.5, 1.05]; observable too when asked.
inline AffineStateSpace randomSystem(Rng& rng, SystemShape s, bool requireObservable = false)
{
    for (;;) {
        Matrix A = randomMatrix(rng, s.n, s.n);
        const double rho = spectralRadius(A);
        if (rho > 0) {
            A *= uniform(rng, 0.5, 1.05) / rho;
        }
        AffineStateSpace sys(A, randomMatrix(rng, s.n, s.m), randomMatrix(rng, s.p, s.n), randomMatrix(rng, s.p, s.m),
            randomVector(rng, s.n), randomVector(rng, s.p));
        if (conditioning(controllabilityMatrix(sys.A, sys.B)) < 1e-4) {
            continue;
        }
        if (requireObservable && conditioning(observabilityMatrix(sys.A, sys.C, s.n)) < 1e-4) {
            continue;
        }
        return sys;
    }
}

/// Random input of length T that is persistently exciting of the given order for
/// the affine model class.
inline Trajectory affinePeInput(Rng& rng, int m, int order, int T)
{
    for (;;) {
        Trajectory u = randomInputs(rng, T, m);
        if (peOrderAffine(u, order)) {
            return u;
        }
    }
}

/// Minimal system with small integer entries, so exact laws have small denominators.
inline AffineStateSpace randomIntegerSystem(Rng& rng, SystemShape s)
{
    auto intMatrix = [&](int rows, int cols, int lo, int hi) {
        Matrix M(rows, cols);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) {
                M(i, j) = uniformInt(rng, lo, hi);
            }
        }
        return M;
    };
    for (;;) {
        AffineStateSpace sys(intMatrix(s.n, s.n, -1, 1), intMatrix(s.n, s.m, -1, 1), intMatrix(s.p, s.n, -1, 1),
            intMatrix(s.p, s.m, -1, 1), intMatrix(s.n, 1, -2, 2).col(0), intMatrix(s.p, 1, -2, 2).col(0));
        if (spectralRadius(sys.A) > 1.25) {
            continue;
        }
        if (conditioning(controllabilityMatrix(sys.A, sys.B)) < 1e-6
            || conditioning(observabilityMatrix(sys.A, sys.C, s.n)) < 1e-6) {
            continue;
        }
        return sys;
    }
}

inline Trajectory integerPeInput(Rng& rng, int m, int order, int T)
{
    for (;;) {
        Matrix d(T, m);
        for (int t = 0; t < T; ++t) {
            for (int j = 0; j < m; ++j) {
                d(t, j) = uniformInt(rng, -3, 3);
            }
        }
        Trajectory u(d, m);
        if (peOrderAffine(u, order)) {
            return u;
        }
    }
}

inline Rational randomSmallRational(Rng& rng)
{
    Rational r(uniformInt(rng, -4, 4), uniformInt(rng, 1, 3));
    r.canonicalize();
    return r;
}

inline Poly randomPoly(Rng& rng, int maxDegree)
{
    std::vector<Rational> c;
    const int d = uniformInt(rng, 0, maxDegree);
    for (int k = 0; k <= d; ++k) {
        c.emplace_back(uniformInt(rng, -3, 3));
    }
    return Poly(std::move(c));
}

inline PolyMatrix randomPolyMatrix(Rng& rng, int rows, int cols, int maxDegree)
{
    PolyMatrix R(rows, cols);
    for (int i = 0; i < rows; ++i) {
        for (int j = 0; j < cols; ++j) {
            R(i, j) = randomPoly(rng, maxDegree);
        }
    }
    return R;
}

/// Random g x q matrix of degree <= maxDegree; with probability 1/2 one row is a
/// polynomial combination of the others so the syzygy module is nontrivial.
inline PolyMatrix randomKernelMatrix(Rng& rng, int g, int q, int maxDegree)
{
    PolyMatrix R = randomPolyMatrix(rng, g, q, maxDegree);
    if (g >= 2 && uniformInt(rng, 0, 1) == 1) {
        const int target = uniformInt(rng, 0, g - 1);
        PolyMatrix dep(1, q);
        for (int i = 0; i < g; ++i) {
            if (i == target) {
                continue;
            }
            const Poly f = randomPoly(rng, 1);
            for (int j = 0; j < q; ++j) {
                dep(0, j) += f * R(i, j);
            }
        }
        // Keep the overall degree bound.
        if (dep.degree() <= maxDegree) {
            for (int j = 0; j < q; ++j) {
                R(target, j) = dep(0, j);
            }
        } else {
            const Poly f(randomSmallRational(rng));
            const int src = (target + 1) % g;
            for (int j = 0; j < q; ++j) {
                R(target, j) = f * R(src, j);
            }
        }
    }
    return R;
}

/// Offset c with lambda(1) c = 0 for every syzygy generator lambda.
inline RationalVector randomConsistentOffset(Rng& rng, const PolyMatrix& R)
{
    const int g = R.rows();
    const PolyMatrix K = syzygyBasis(R);
    RationalVector c(static_cast<std::size_t>(g));
    if (K.rows() == 0) {
        for (auto& v : c) {
            v = randomSmallRational(rng);
        }
        return c;
    }
    const RationalMatrix K1 = K.eval(Rational(1));
    // Null space of K(1): transpose trick through leftNullSpace.
    RationalMatrix K1t(K1.cols(), K1.rows());
    for (int i = 0; i < K1.rows(); ++i) {
        for (int j = 0; j < K1.cols(); ++j) {
            K1t(j, i) = K1(i, j);
        }
    }
    const RationalMatrix N = K1t.leftNullSpace();
    for (int k = 0; k < N.rows(); ++k) {
        const Rational a = randomSmallRational(rng);
        for (int i = 0; i < g; ++i) {
            c[static_cast<std::size_t>(i)] += a * N(k, i);
        }
    }
    return c;
}

/// Product of elementary unimodular operations with multipliers of degree <= maxDegree.
inline PolyMatrix randomUnimodular(Rng& rng, int g, int maxDegree, int steps = 5)
{
    PolyMatrix U = PolyMatrix::identity(g);
    for (int s = 0; s < steps; ++s) {
        const int kind = uniformInt(rng, 0, g >= 2 ? 2 : 1);
        if (kind == 0) {
            Rational k(uniformInt(rng, 1, 3) * (uniformInt(rng, 0, 1) ? 1 : -1), uniformInt(rng, 1, 2));
            k.canonicalize();
            U.scaleRow(uniformInt(rng, 0, g - 1), k);
        } else if (kind == 1 && g >= 2) {
            U.swapRows(uniformInt(rng, 0, g - 1), uniformInt(rng, 0, g - 1));
        } else if (g >= 2) {
            const int a = uniformInt(rng, 0, g - 1);
            int b = uniformInt(rng, 0, g - 2);
            if (b >= a) {
                ++b;
            }
            U.addRowMultiple(a, b, randomPoly(rng, maxDegree));
        }
    }
    return U;
}

inline RationalVector applyAtOne(const PolyMatrix& U, const RationalVector& c)
{
    const RationalMatrix U1 = U.eval(Rational(1));
    RationalVector out(static_cast<std::size_t>(U1.rows()));
    for (int i = 0; i < U1.rows(); ++i) {
        for (int j = 0; j < U1.cols(); ++j) {
            out[static_cast<std::size_t>(i)] += U1(i, j) * c[static_cast<std::size_t>(j)];
        }
    }
    return out;
}

/// Windows of length L stacked as rows (one sample per row), from a fresh random run.
inline Matrix freshWindow(Rng& rng, const AffineStateSpace& sys, int L)
{
    const Trajectory u = randomInputs(rng, L, sys.m());
    const Simulation sim = simulate(sys, randomVector(rng, sys.n()), u);
    Matrix w(L, sys.m() + sys.p());
    w << u.data(), sim.y;
    return w;
}

inline Vector stackRows(const Matrix& w)
{
    Vector v(w.size());
    for (Eigen::Index t = 0; t < w.rows(); ++t) {
        v.segment(t * w.cols(), w.cols()) = w.row(t).transpose();
    }
    return v;
}

} // namespace ati::testing
