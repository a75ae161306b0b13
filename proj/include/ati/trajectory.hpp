#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "ati/error.hpp"

namespace ati {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Finite vector-valued time series w(1..T) with the first m columns as inputs.
///
/// Row t-1 of data() holds the sample w(t). All time indices in the public
/// interface are 1-based.
class Trajectory {
public:
    Trajectory() = default;
    Trajectory(Matrix data, int m, std::vector<std::string> labels = {});

    /// Scalar series helper, m defaults to 1 (pure input sequence).
    static Trajectory scalar(const std::vector<double>& values, int m = 1);
    /// Stacks (u, y) column-wise into one trajectory with m = u.q().
    static Trajectory fromInputOutput(const Trajectory& u, const Trajectory& y);

    int length() const noexcept { return static_cast<int>(data_.rows()); }
    int q() const noexcept { return static_cast<int>(data_.cols()); }
    int m() const noexcept { return m_; }
    int p() const noexcept { return q() - m_; }

    const Matrix& data() const noexcept { return data_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// w(t), 1-based.
    Vector at(int t) const;

    Trajectory inputs() const;
    Trajectory outputs() const;
    /// Stacked window w(t0..t1) as a single column vector of length q*(t1-t0+1).
    Vector window(int t0, int t1) const;

private:
    Matrix data_;
    int m_ = 0;
    std::vector<std::string> labels_;
};

struct HankelMatrix {
    Matrix entries;
    int depth = 0;
    int blockRows = 0;

    int columns() const noexcept { return static_cast<int>(entries.cols()); }
};

HankelMatrix hankel(const Trajectory& w, int depth);

/// Samples t0..t1 inclusive (1-based).
Trajectory restrict(const Trajectory& w, int t0, int t1);

/// (sigma^k w)(t) = w(t+k) on the shortened domain of length T-k.
Trajectory shift(const Trajectory& w, int k);

struct RankResult {
    int rank = 0;
    std::vector<double> singularValues;
    double threshold = 0.0;

    /// sigma_rank over the largest discarded value (or the threshold when nothing
    /// was discarded). Infinite for an exact zero gap.
    double gapRatio() const;
};

/// Tolerance used when none is supplied: max(rows, cols) * eps.
double defaultRankTolerance(const Matrix& M);

/// Counts singular values above tol * sigma_max. tol <= 0 selects the default.
RankResult numericalRank(const Matrix& M, double tol = 0.0);

/// Appends a row of ones beneath M.
Matrix appendOnesRow(const Matrix& M);

} // namespace ati
