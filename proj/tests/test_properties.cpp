#include "doctest.h"

#include "ati/affine_ss.hpp"
#include "ati/datadriven.hpp"
#include "ati/polykernel.hpp"
#include "support/generators.hpp"

using namespace ati;
namespace gen = ati::testing;

namespace {

struct ExactModel {
    AffineStateSpace sys;
    AffineKernelRep rep;
};

// Integer system plus its exact kernel recovered at depth n + 1.
ExactModel exactModel(gen::Rng& rng)
{
    const gen::SystemShape shape = gen::randomShape(rng, 3, 2, 2);
    const AffineStateSpace sys = gen::randomIntegerSystem(rng, shape);
    const int L = shape.n + 1;
    const int order = shape.n + L;
    const Trajectory u = gen::integerPeInput(rng, shape.m, order, (shape.m + 1) * order + 3);
    const Trajectory wd = Trajectory::fromInputOutput(u, simulate(sys, Vector::Zero(shape.n), u).outputTrajectory());
    return {sys, rationalizeKernel(recoverKernel(DataDrivenRep(wd, L), shape.n))};
}

Matrix integerWindow(gen::Rng& rng, const AffineStateSpace& sys, int L)
{
    Matrix d(L, sys.m());
    for (int t = 0; t < L; ++t) {
        for (int j = 0; j < sys.m(); ++j) {
            d(t, j) = gen::uniformInt(rng, -3, 3);
        }
    }
    Vector x0(sys.n());
    for (int i = 0; i < sys.n(); ++i) {
        x0(i) = gen::uniformInt(rng, -3, 3);
    }
    const Simulation sim = simulate(sys, x0, Trajectory(d, sys.m()));
    Matrix w(L, sys.m() + sys.p());
    w << d, sim.y;
    return w;
}

} // namespace

TEST_CASE("exact kernels of integer systems annihilate their trajectories")
{
    gen::Rng rng(71);
    for (int trial = 0; trial < 15; ++trial) {
        const ExactModel model = exactModel(rng);
        const int L = model.rep.R.degree() + 4;
        for (int k = 0; k < 5; ++k) {
            const Matrix w = integerWindow(rng, model.sys, L);
            CHECK(behaviorApply(model.rep, w).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("minimize keeps zero residuals")
{
    gen::Rng rng(72);
    for (int trial = 0; trial < 15; ++trial) {
        const ExactModel model = exactModel(rng);
        // Pad with a polynomial combination of existing rows so the representation is not minimal.
        const int g = model.rep.g();
        const PolyMatrix mix = gen::randomPolyMatrix(rng, 1, g, 1);
        const PolyMatrix extra = mix * model.rep.R;
        PolyMatrix padded(g + 1, model.rep.q());
        RationalVector c = model.rep.c;
        c.push_back(gen::applyAtOne(mix, model.rep.c).front());
        for (int j = 0; j < model.rep.q(); ++j) {
            for (int i = 0; i < g; ++i) {
                padded(i, j) = model.rep.R(i, j);
            }
            padded(g, j) = extra(0, j);
        }
        const AffineKernelRep big {padded, c, {}};
        REQUIRE(consistentConstant(big));
        const AffineKernelRep small = minimize(big);
        CHECK(small.g() == polyRank(padded));
        CHECK(equivalent(big, small));
        const int L = std::max(big.R.degree(), small.R.degree()) + 3;
        for (int k = 0; k < 5; ++k) {
            const Matrix w = integerWindow(rng, model.sys, L);
            CHECK(behaviorApply(big, w).cwiseAbs().maxCoeff() < 1e-9);
            CHECK(behaviorApply(small, w).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("polynomial multipliers map solutions to solutions")
{
    gen::Rng rng(73);
    for (int trial = 0; trial < 15; ++trial) {
        const ExactModel model = exactModel(rng);
        const int g = model.rep.g();
        const PolyMatrix U = gen::randomPolyMatrix(rng, g, g, 2);
        const AffineKernelRep image {U * model.rep.R, gen::applyAtOne(U, model.rep.c), {}};
        const int L = image.R.degree() + 3;
        for (int k = 0; k < 3; ++k) {
            CHECK(behaviorApply(image, integerWindow(rng, model.sys, L)).cwiseAbs().maxCoeff() < 1e-8);
        }
    }
}

TEST_CASE("consistency of constant offsets: two routes agree")
{
    gen::Rng rng(74);
    for (int trial = 0; trial < 100; ++trial) {
        const int g = gen::uniformInt(rng, 1, 3);
        const int q = gen::uniformInt(rng, 1, 3);
        const PolyMatrix R = gen::randomKernelMatrix(rng, g, q, 2);
        if (R.isZero()) {
            continue;
        }
        RationalVector c;
        for (int i = 0; i < g; ++i) {
            c.push_back(gen::randomSmallRational(rng));
        }
        const AffineKernelRep rep {R, c, {}};
        const SequenceConsistency sc = consistentSequence(rep);
        CHECK(consistentConstant(rep) == sc.consistent);
        CHECK(sc.certified);
        CHECK(consistentConstant({R, gen::randomConsistentOffset(rng, R), {}}));
    }
}

TEST_CASE("invariants of real-valued minimal systems")
{
    gen::Rng rng(75);
    for (int trial = 0; trial < 30; ++trial) {
        const gen::SystemShape shape = gen::randomShape(rng);
        const AffineStateSpace sys = gen::randomSystem(rng, shape, true);
        const int tMax = shape.n + 2;
        const int order = shape.n + tMax;
        const Trajectory u = gen::affinePeInput(rng, shape.m, order, (shape.m + 1) * order + 4);
        const Trajectory wd
            = Trajectory::fromInputOutput(u, simulate(sys, gen::randomVector(rng, shape.n), u).outputTrajectory());
        REQUIRE(gapeCheck(wd, tMax, shape.n).holds);
        const IntegerInvariants inv = invariantsFromData(wd, tMax);
        CHECK(inv.m == shape.m);
        CHECK(inv.n == shape.n);
        CHECK(inv.q == shape.m + shape.p);
        for (int t = 1; t <= tMax; ++t) {
            CHECK(inv.dSequence[static_cast<std::size_t>(t - 1)] == restrictedDimension(sys, t));
        }
        // The lag is the first depth at which the observability matrix reaches full rank.
        int lag = shape.n > 0 ? 1 : 0;
        while (lag > 0 && restrictedDimension(sys, lag) - shape.m * lag < shape.n) {
            ++lag;
        }
        CHECK(inv.ell == lag);
    }
}
