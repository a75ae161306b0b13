#pragma once

#include "json.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ati/affine_ss.hpp"
#include "ati/expression.hpp"
#include "ati/polykernel.hpp"
#include "ati/trajectory.hpp"

namespace ati::io {

using nlohmann::json;

/// Sidecar descriptor { "m": <int>, "labels": [...] }.
struct TrajectoryDescriptor {
    int m = 0;
    std::vector<std::string> labels;
};

TrajectoryDescriptor readDescriptor(const std::string& path);

/// Reads `t,w1,...,wq` CSV. Times must run 1, 2, ... without gaps.
Trajectory readTrajectoryCsv(std::istream& in, int m);
Trajectory readTrajectoryCsv(const std::string& path, int m);
/// Plain numeric matrix with the same layout (header and time column required).
Matrix readMatrixCsv(const std::string& path);
void writeTrajectoryCsv(std::ostream& out, const Matrix& data, const std::vector<std::string>& labels = {});

/// Rounds to 12 significant digits for stable text output.
double round12(double v);
json toJson(const Matrix& M);
json toJson(const Vector& v);
json toJson(const std::vector<double>& v);

Matrix matrixFromJson(const json& j);
Vector vectorFromJson(const json& j);

AffineStateSpace systemFromJson(const json& j);
json toJson(const AffineStateSpace& sys);
json toJson(const LiftedStateSpace& sys);

Expr exprFromJson(const json& j);
json toJson(const Expr& e);
NonlinearPlant plantFromJson(const json& j);

Rational rationalFromJson(const json& j);
PolyMatrix polyMatrixFromJson(const json& j);
json toJson(const PolyMatrix& R);
AffineKernelRep kernelFromJson(const json& j);
json toJson(const AffineKernelRep& rep);

json readJsonFile(const std::string& path);

} // namespace ati::io
