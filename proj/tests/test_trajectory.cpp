#include "doctest.h"

#include <limits>
#include <random>

#include "ati/rational.hpp"
#include "ati/trajectory.hpp"
#include "support/util.hpp"

using namespace ati;

using ati::testing::rows;
using ati::testing::throwsCode;

TEST_CASE("trajectory construction")
{
    const Trajectory w = Trajectory::scalar({1, 2, 3});
    CHECK(w.length() == 3);
    CHECK(w.q() == 1);
    CHECK(w.m() == 1);
    CHECK(w.p() == 0);
    CHECK(w.at(2)(0) == 2);

    Matrix d = rows({{1, 10}, {2, 20}});
    const Trajectory io(d, 1, {"u", "y"});
    CHECK(io.inputs().data() == rows({{1}, {2}}));
    CHECK(io.outputs().data() == rows({{10}, {20}}));
    CHECK(io.window(1, 2) == (Vector(4) << 1, 10, 2, 20).finished());

    SUBCASE("invalid data")
    {
        CHECK(throwsCode([] { Trajectory(Matrix(0, 1), 0); }, ErrorCode::EmptyTrajectory));
        CHECK(throwsCode([] { Trajectory(Matrix(2, 1), 2); }, ErrorCode::DimensionMismatch));
        Matrix bad = Matrix::Ones(2, 1);
        bad(1, 0) = std::numeric_limits<double>::quiet_NaN();
        CHECK(throwsCode([&] { Trajectory(bad, 0); }, ErrorCode::NonFiniteEntry));
        CHECK(throwsCode([&] { (void)io.at(3); }, ErrorCode::OutOfRange));
    }
}

TEST_CASE("hankel matrix")
{
    CHECK(hankel(Trajectory::scalar({1, 2, 3, 4}), 2).entries == rows({{1, 2, 3}, {2, 3, 4}}));
    const HankelMatrix one = hankel(Trajectory::scalar({1, 2, 3}), 3);
    CHECK(one.columns() == 1);
    CHECK(one.entries == rows({{1}, {2}, {3}}));

    const Trajectory u1 = Trajectory::scalar({0.91, 0.41, -0.53, -0.99, -0.65, 0.20, 0.87, 0.97, 0.32});
    const HankelMatrix H = hankel(u1, 2);
    CHECK(H.entries.rows() == 2);
    CHECK(H.entries.cols() == 8);
    CHECK(H.entries(0, 0) == 0.91);
    CHECK(H.entries(1, 0) == 0.41);

    CHECK(throwsCode([] { hankel(Trajectory::scalar({1, 2}), 3); }, ErrorCode::DepthExceedsLength));
    CHECK(throwsCode([] { hankel(Trajectory::scalar({1, 2}), 0); }, ErrorCode::InvalidArgument));
}

TEST_CASE("hankel columns are the windows, block structure holds")
{
    std::mt19937_64 rng(11);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 30; ++trial) {
        const int T = 3 + trial % 8;
        const int q = 1 + trial % 3;
        Matrix d(T, q);
        for (int i = 0; i < T; ++i) {
            for (int j = 0; j < q; ++j) {
                d(i, j) = nd(rng);
            }
        }
        const Trajectory w(d, trial % (q + 1));
        for (int L = 1; L <= T; ++L) {
            const HankelMatrix H = hankel(w, L);
            CHECK(H.entries.rows() == q * L);
            CHECK(H.entries.cols() == T - L + 1);
            for (int j = 1; j <= T - L + 1; ++j) {
                const Trajectory r = restrict(w, j, j + L - 1);
                CHECK(H.entries.col(j - 1) == r.window(1, L));
            }
            for (int i = 1; i < L; ++i) {
                for (int j = 0; j + 1 < H.columns(); ++j) {
                    CHECK(H.entries.block(i * q, j, q, 1) == H.entries.block((i - 1) * q, j + 1, q, 1));
                }
            }
            CHECK(numericalRank(H.entries).rank <= std::min(q * L, T - L + 1));
        }
    }
}

TEST_CASE("restrict and shift")
{
    const Trajectory w = Trajectory::scalar({1, 2, 3, 4});
    CHECK(restrict(w, 2, 3).data() == rows({{2}, {3}}));
    CHECK(restrict(Trajectory::scalar({5}), 1, 1).data() == rows({{5}}));
    CHECK(throwsCode([] { restrict(Trajectory::scalar({1, 2}), 1, 3); }, ErrorCode::OutOfRange));
    CHECK(restrict(Trajectory(rows({{1, 2}, {3, 4}}), 1), 2, 2).m() == 1);

    const Trajectory s = Trajectory::scalar({1, 2, 3});
    CHECK(shift(s, 1).data() == rows({{2}, {3}}));
    CHECK(shift(s, 0).data() == s.data());
    CHECK(throwsCode([] { shift(Trajectory::scalar({1, 2}), 2); }, ErrorCode::ShiftTooLarge));

    const Trajectory long_ = Trajectory::scalar({1, 2, 3, 4, 5, 6, 7});
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; a + b < 7; ++b) {
            CHECK(shift(shift(long_, a), b).data() == shift(long_, a + b).data());
        }
    }
}

TEST_CASE("numerical rank")
{
    CHECK(numericalRank(Matrix::Identity(3, 3), 1e-10).rank == 3);
    CHECK(numericalRank(rows({{1, 1}, {1, 1}}), 1e-10).rank == 1);

    const Matrix nearly = rows({{1, 0}, {0, 1e-14}});
    // The exact rank is 2; the tiny singular value falls below the relative threshold.
    CHECK(RationalMatrix::fromDouble(nearly).rank() == 2);
    const RankResult r = numericalRank(nearly, 1e-10);
    CHECK(r.rank == 1);
    CHECK(r.singularValues.size() == 2);
    CHECK(r.singularValues[1] == doctest::Approx(1e-14).epsilon(1e-6));
    CHECK(r.gapRatio() == doctest::Approx(1e14).epsilon(1e-6));

    CHECK(defaultRankTolerance(Matrix::Zero(3, 5)) == 5 * std::numeric_limits<double>::epsilon());
    CHECK(numericalRank(Matrix::Zero(2, 2)).rank == 0);

    Matrix bad = Matrix::Ones(2, 2);
    bad(0, 1) = std::numeric_limits<double>::infinity();
    CHECK(throwsCode([&] { numericalRank(bad); }, ErrorCode::NonFiniteEntry));

    SUBCASE("invariant under permutations")
    {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> nd;
        for (int trial = 0; trial < 20; ++trial) {
            Matrix M(5, 4);
            for (int i = 0; i < 5; ++i) {
                for (int j = 0; j < 4; ++j) {
                    M(i, j) = nd(rng);
                }
            }
            M.row(4) = M.row(0) + 2 * M.row(1);
            Eigen::PermutationMatrix<Eigen::Dynamic> P(5), Q(4);
            P.setIdentity();
            Q.setIdentity();
            std::shuffle(P.indices().data(), P.indices().data() + 5, rng);
            std::shuffle(Q.indices().data(), Q.indices().data() + 4, rng);
            const Matrix permuted = P * M * Q;
            CHECK(numericalRank(permuted).rank == numericalRank(M).rank);
            CHECK(numericalRank(M).rank == 4);
        }
    }
}

TEST_CASE("ones row goes below")
{
    const Matrix M = rows({{1, 2}, {3, 4}});
    const Matrix A = appendOnesRow(M);
    CHECK(A.rows() == 3);
    CHECK(A.topRows(2) == M);
    CHECK(A.row(2) == Eigen::RowVectorXd::Ones(2));
}
