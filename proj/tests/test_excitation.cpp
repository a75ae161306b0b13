#include "doctest.h"

#include <random>

#include "ati/affine_ss.hpp"
#include "ati/excitation.hpp"
#include "ati/scenario.hpp"

using namespace ati;

namespace {

// Dimension of the affine hull of the columns, computed from differences.
int affineHullDimension(const Matrix& H)
{
    if (H.cols() <= 1) {
        return 0;
    }
    Matrix D(H.rows(), H.cols() - 1);
    for (Eigen::Index j = 1; j < H.cols(); ++j) {
        D.col(j - 1) = H.col(j) - H.col(0);
    }
    return numericalRank(D).rank;
}

Trajectory experiment(int k)
{
    return Trajectory::scalar(workedExampleExperiments().at(static_cast<std::size_t>(k)).inputs);
}

} // namespace

TEST_CASE("alternating sequence")
{
    const Trajectory u = Trajectory::scalar({1, 2, 1, 2, 1, 2});
    // Every Hankel matrix of a period-2 sequence has rank at most 2.
    for (int L = 1; L <= 6; ++L) {
        CHECK(numericalRank(hankel(u, L).entries).rank <= 2);
    }
    CHECK(peOrderLinear(u, 1));
    CHECK(peOrderLinear(u, 2));
    CHECK_FALSE(peOrderLinear(u, 3));
    CHECK_FALSE(peOrderLinear(u, 4));
    CHECK(peOrderAffine(u, 1));
    CHECK_FALSE(peOrderAffine(u, 2));
    CHECK_FALSE(peOrderAffine(u, 3));
    CHECK(maxPeOrder(u, ModelClass::Linear) == 2);
    CHECK(maxPeOrder(u, ModelClass::Affine) == 1);

    const PeScan scan = peScan(u, ModelClass::Linear);
    CHECK(scan.passes.size() == 6);
    CHECK(scan.monotone);
}

TEST_CASE("constant and zero sequences")
{
    const Trajectory ones = Trajectory::scalar({1, 1, 1, 1, 1});
    CHECK(peOrderLinear(ones, 1));
    CHECK_FALSE(peOrderAffine(ones, 1));
    const RankCheck rc = peCheck(ones, 1, ModelClass::Affine);
    CHECK(rc.rank == 1);
    CHECK(rc.target == 2);

    CHECK(maxPeOrder(Trajectory::scalar({0, 0, 0, 0}), ModelClass::Linear) == 0);
}

TEST_CASE("random scalar sequences reach the column-count limit")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ud(-1, 1);
    int hits = 0;
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(9);
        for (double& x : v) {
            x = ud(rng);
        }
        hits += maxPeOrder(Trajectory::scalar(v), ModelClass::Linear) == 5 ? 1 : 0;
    }
    CHECK(hits == 50);
}

TEST_CASE("worked-example inputs")
{
    CHECK(peOrderLinear(experiment(0), 5));
    CHECK(peOrderAffine(experiment(1), 4));
    CHECK_FALSE(peOrderAffine(experiment(2), 4));
    CHECK(experiment(1).length() == 8);
}

TEST_CASE("zero-mean sinusoids: affine and linear orders coincide")
{
    for (int period : {5, 6, 7, 8}) {
        std::vector<double> v;
        for (int t = 0; t < 3 * period; ++t) {
            const double a = 2 * 3.14159265358979323846 * t / period;
            v.push_back(std::sin(a) + 0.5 * std::cos(2 * a + 0.3));
        }
        const Trajectory u = Trajectory::scalar(v);
        CHECK(maxPeOrder(u, ModelClass::Affine) == maxPeOrder(u, ModelClass::Linear));
    }
}

TEST_CASE("gape on the worked example")
{
    const AffineStateSpace sys = workedExampleSystem();
    const Trajectory u = experiment(1);
    const Simulation sim = simulate(sys, Vector::Zero(2), u);
    const Trajectory wd = Trajectory::fromInputOutput(u, sim.outputTrajectory());
    const RankCheck rc = gapeCheck(wd, 2, 2);
    CHECK(rc.holds);
    CHECK(rc.target == 5);
}

TEST_CASE("gape fails for constant data of a static system")
{
    Matrix d(6, 2);
    d.col(0).setConstant(0.5);
    d.col(1).setConstant(2.0);
    const Trajectory wd(d, 1);
    for (int L = 1; L <= 3; ++L) {
        CHECK_FALSE(gapeCheck(wd, L, 1).holds);
    }
}

TEST_CASE("general gape form below the lag matches the affine hull dimension")
{
    // Single output observing the first of two states: lag 2, so depth 1 is below it.
    Matrix A(2, 2);
    A << 0.5, 1, -0.3, 0.8;
    Matrix B(2, 1);
    B << 0, 1;
    Matrix C(1, 2);
    C << 1, 0;
    const AffineStateSpace sys(A, B, C, Matrix::Zero(1, 1), (Vector(2) << 0.2, -0.1).finished(), Vector::Constant(1, 1.0));
    std::mt19937_64 rng(2);
    std::normal_distribution<double> nd;
    std::vector<double> uv(30);
    for (double& x : uv) {
        x = nd(rng);
    }
    const Trajectory u = Trajectory::scalar(uv);
    const Trajectory wd = Trajectory::fromInputOutput(u, simulate(sys, Vector::Zero(2), u).outputTrajectory());
    for (int L = 1; L <= 4; ++L) {
        const int dL = restrictedDimension(sys, L);
        CHECK(dL == affineHullDimension(hankel(wd, L).entries));
        CHECK(gapeCheckGeneral(wd, L, dL).holds);
    }
    CHECK(restrictedDimension(sys, 1) == 2);
    CHECK_FALSE(gapeCheck(wd, 1, 2).holds);
    CHECK(gapeCheck(wd, 2, 2).holds);
}

TEST_CASE("data length identities")
{
    CHECK(minDataLength(1, 5, ModelClass::Linear) == 9);
    CHECK(minDataLength(1, 4, ModelClass::Affine) == 7);
    CHECK(samplingGap(3) == 4);
    for (int m = 1; m <= 10; ++m) {
        CHECK(samplingGap(m) == m + 1);
        for (int L = 1; L <= 10; ++L) {
            CHECK(minDataLength(m, L, ModelClass::Linear) == (m + 1) * L - 1);
            CHECK(minDataLength(m, L, ModelClass::Affine) == (m + 1) * L - 1);
        }
    }
}

TEST_CASE("excitation argument errors")
{
    CHECK_THROWS_AS(peOrderLinear(Trajectory::scalar({1, 2}), 3), Error);
    CHECK_THROWS_AS(minDataLength(0, 1, ModelClass::Linear), Error);
}
