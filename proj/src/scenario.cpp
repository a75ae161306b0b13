#include "ati/scenario.hpp"

#include <cstdio>
#include <sstream>

#include "ati/datadriven.hpp"
#include "ati/io.hpp"

namespace ati {

AffineStateSpace workedExampleSystem()
{
    Matrix A(2, 2);
    A << 1, 0, 0, 2;
    Matrix B(2, 1);
    B << 1, 1;
    Vector E(2);
    E << 1, 1;
    return AffineStateSpace(A, B, Matrix::Identity(2, 2), Matrix::Zero(2, 1), E, Vector::Zero(2));
}

std::vector<WorkedExperiment> workedExampleExperiments()
{
    return {
        {"offset+2 sinusoids", {0.91, 0.41, -0.53, -0.99, -0.65, 0.20, 0.87, 0.97, 0.32}},
        {"2 sinusoids", {0.640, -0.323, -1, 0.248, -0.640, 0.323, 1, -0.248}},
        {"1 sinusoid", {1, -0.12, -1, 0.12, 1, -0.12}},
    };
}

bool ScenarioReport::allPass() const
{
    for (const ScenarioRow& r : rows) {
        if (!r.pass) {
            return false;
        }
    }
    return !rows.empty();
}

ScenarioReport runWorkedExample(double tol)
{
    const AffineStateSpace sys = workedExampleSystem();
    constexpr int depth = 2;
    ScenarioReport report;
    report.title = "affine rank condition, L = 2, n = 2, m = 1";
    for (const WorkedExperiment& exp : workedExampleExperiments()) {
        const Trajectory u = Trajectory::scalar(exp.inputs);
        const Simulation sim = simulate(sys, Vector::Zero(2), u);
        const RankCheck rc = rankConditionAffine(sim.x, u, depth, tol);
        ScenarioRow row;
        row.condition = exp.name;
        row.samples = u.length();
        row.rank = rc.rank;
        row.target = rc.target;
        row.gapRatio = rc.detail.gapRatio();
        row.tolerance = rc.detail.singularValues.empty() ? 0.0 : rc.detail.threshold / rc.detail.singularValues.front();
        row.pass = rc.holds;
        report.rows.push_back(row);
    }
    return report;
}

std::string formatReport(const ScenarioReport& report)
{
    std::ostringstream os;
    char line[256];
    os << report.title << "\n";
    std::snprintf(line, sizeof line, "%-20s %3s %5s %7s %-19s %-19s %s\n", "condition", "T", "rank", "target",
        "gap_ratio", "tolerance", "result");
    os << line;
    for (const ScenarioRow& r : report.rows) {
        std::snprintf(line, sizeof line, "%-20s %3d %5d %7d %-19.12g %-19.12g %s", r.condition.c_str(), r.samples,
            r.rank, r.target, io::round12(r.gapRatio), io::round12(r.tolerance), r.pass ? "PASS" : "FAIL");
        os << line;
        if (!r.pass) {
            os << " (rank " << r.rank << " short of " << r.target << ")";
        }
        os << "\n";
    }
    return os.str();
}

nlohmann::json reportJson(const ScenarioReport& report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const ScenarioRow& r : report.rows) {
        rows.push_back({{"condition", r.condition}, {"samples", r.samples}, {"rank", r.rank}, {"target", r.target},
            {"gap_ratio", io::round12(r.gapRatio)}, {"tolerance", io::round12(r.tolerance)}, {"pass", r.pass}});
    }
    return {{"title", report.title}, {"rows", rows}, {"all_pass", report.allPass()}};
}

} // namespace ati
