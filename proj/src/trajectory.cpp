#include "ati/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ati {

std::string_view toString(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::EmptyTrajectory: return "EmptyTrajectory";
    case ErrorCode::DepthExceedsLength: return "DepthExceedsLength";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::ShiftTooLarge: return "ShiftTooLarge";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteEvaluation: return "NonFiniteEvaluation";
    case ErrorCode::StepTooSmall: return "StepTooSmall";
    case ErrorCode::EmptyRepresentation: return "EmptyRepresentation";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::AmbiguousContinuation: return "AmbiguousContinuation";
    case ErrorCode::ExcitationDeficient: return "ExcitationDeficient";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::InconsistentRepresentation: return "InconsistentRepresentation";
    case ErrorCode::NotRational: return "NotRational";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Trajectory::Trajectory(Matrix data, int m, std::vector<std::string> labels)
    : data_(std::move(data)), m_(m), labels_(std::move(labels))
{
    if (data_.rows() == 0 || data_.cols() == 0) {
        throw Error(ErrorCode::EmptyTrajectory, "trajectory needs T >= 1 and q >= 1");
    }
    if (m_ < 0 || m_ > q()) {
        throw Error(ErrorCode::DimensionMismatch,
            "input cardinality " + std::to_string(m_) + " outside [0, " + std::to_string(q()) + "]");
    }
    if (!labels_.empty() && static_cast<int>(labels_.size()) != q()) {
        throw Error(ErrorCode::DimensionMismatch, "label count does not match q");
    }
    if (!data_.allFinite()) {
        throw Error(ErrorCode::NonFiniteEntry, "trajectory contains non-finite samples");
    }
}

Trajectory Trajectory::scalar(const std::vector<double>& values, int m)
{
    Matrix d(static_cast<Eigen::Index>(values.size()), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        d(static_cast<Eigen::Index>(i), 0) = values[i];
    }
    return Trajectory(std::move(d), m);
}

Trajectory Trajectory::fromInputOutput(const Trajectory& u, const Trajectory& y)
{
    if (u.length() != y.length()) {
        throw Error(ErrorCode::DimensionMismatch, "input and output lengths differ");
    }
    Matrix d(u.length(), u.q() + y.q());
    d << u.data(), y.data();
    return Trajectory(std::move(d), u.q());
}

Vector Trajectory::at(int t) const
{
    if (t < 1 || t > length()) {
        throw Error(ErrorCode::OutOfRange, "time " + std::to_string(t) + " outside [1, T]");
    }
    return data_.row(t - 1).transpose();
}

Trajectory Trajectory::inputs() const
{
    if (m_ == 0) {
        throw Error(ErrorCode::DimensionMismatch, "trajectory has no inputs");
    }
    return Trajectory(data_.leftCols(m_), m_);
}

Trajectory Trajectory::outputs() const
{
    if (p() == 0) {
        throw Error(ErrorCode::DimensionMismatch, "trajectory has no outputs");
    }
    return Trajectory(data_.rightCols(p()), 0);
}

Vector Trajectory::window(int t0, int t1) const
{
    if (t0 < 1 || t1 > length() || t0 > t1) {
        throw Error(ErrorCode::OutOfRange, "window leaves [1, T]");
    }
    const int len = t1 - t0 + 1;
    Vector v(static_cast<Eigen::Index>(len) * q());
    for (int i = 0; i < len; ++i) {
        v.segment(static_cast<Eigen::Index>(i) * q(), q()) = data_.row(t0 - 1 + i).transpose();
    }
    return v;
}

HankelMatrix hankel(const Trajectory& w, int depth)
{
    const int T = w.length();
    if (T == 0) {
        throw Error(ErrorCode::EmptyTrajectory, "cannot build a Hankel matrix of an empty trajectory");
    }
    if (depth < 1) {
        throw Error(ErrorCode::InvalidArgument, "depth must be positive, got " + std::to_string(depth));
    }
    if (depth > T) {
        throw Error(ErrorCode::DepthExceedsLength,
            "depth " + std::to_string(depth) + " not in [1, " + std::to_string(T) + "]");
    }
    const int q = w.q();
    const int cols = T - depth + 1;
    HankelMatrix H;
    H.depth = depth;
    H.blockRows = q;
    H.entries.resize(static_cast<Eigen::Index>(q) * depth, cols);
    for (int i = 0; i < depth; ++i) {
        for (int j = 0; j < cols; ++j) {
            H.entries.block(static_cast<Eigen::Index>(i) * q, j, q, 1) = w.data().row(i + j).transpose();
        }
    }
    return H;
}

Trajectory restrict(const Trajectory& w, int t0, int t1)
{
    if (t0 < 1 || t1 > w.length() || t0 > t1) {
        throw Error(ErrorCode::OutOfRange,
            "[" + std::to_string(t0) + ", " + std::to_string(t1) + "] leaves [1, " + std::to_string(w.length()) + "]");
    }
    return Trajectory(w.data().middleRows(t0 - 1, t1 - t0 + 1), w.m(), w.labels());
}

Trajectory shift(const Trajectory& w, int k)
{
    if (k < 0 || k >= w.length()) {
        throw Error(ErrorCode::ShiftTooLarge, "shift " + std::to_string(k) + " needs k < T");
    }
    return Trajectory(w.data().bottomRows(w.length() - k), w.m(), w.labels());
}

double RankResult::gapRatio() const
{
    if (rank == 0) {
        return 0.0;
    }
    const double kept = singularValues[static_cast<std::size_t>(rank - 1)];
    const double dropped = static_cast<std::size_t>(rank) < singularValues.size()
        ? singularValues[static_cast<std::size_t>(rank)]
        : threshold;
    if (dropped <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return kept / dropped;
}

double defaultRankTolerance(const Matrix& M)
{
    return static_cast<double>(std::max(M.rows(), M.cols())) * std::numeric_limits<double>::epsilon();
}

RankResult numericalRank(const Matrix& M, double tol)
{
    if (M.size() == 0) {
        throw Error(ErrorCode::EmptyTrajectory, "rank of an empty matrix");
    }
    if (!M.allFinite()) {
        throw Error(ErrorCode::NonFiniteEntry, "matrix contains non-finite values");
    }
    if (tol <= 0.0) {
        tol = defaultRankTolerance(M);
    }
    Eigen::JacobiSVD<Matrix> svd(M);
    const Vector& s = svd.singularValues();
    RankResult out;
    out.singularValues.assign(s.data(), s.data() + s.size());
    const double smax = s.size() > 0 ? s(0) : 0.0;
    out.threshold = tol * smax;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > out.threshold) {
            ++out.rank;
        }
    }
    return out;
}

Matrix appendOnesRow(const Matrix& M)
{
    Matrix out(M.rows() + 1, M.cols());
    out.topRows(M.rows()) = M;
    out.row(M.rows()).setOnes();
    return out;
}

} // namespace ati
