#pragma once

#include <string>
#include <vector>

#include "ati/affine_ss.hpp"
#include "json.hpp"

namespace ati {

/// Two-state, single-input reference system: A = diag(1, 2), B = E = (1, 1)', C = I, D = 0, F = 0.
AffineStateSpace workedExampleSystem();

struct WorkedExperiment {
    std::string name;
    std::vector<double> inputs;
};

/// The three published input records: offset plus two sinusoids (9 samples),
/// two zero-mean sinusoids (8 samples), a single sinusoid (6 samples).
std::vector<WorkedExperiment> workedExampleExperiments();

struct ScenarioRow {
    std::string condition;
    int samples = 0;
    int rank = 0;
    int target = 0;
    double gapRatio = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

struct ScenarioReport {
    std::string title;
    std::vector<ScenarioRow> rows;

    bool allPass() const;
};

/// Re-simulates each experiment from x(1) = 0 and checks the affine rank
/// condition at depth 2 (target mL + n + 1 = 5).
ScenarioReport runWorkedExample(double tol = 0.0);

/// Fixed-column text table for golden-file comparison.
std::string formatReport(const ScenarioReport& report);
nlohmann::json reportJson(const ScenarioReport& report);

} // namespace ati
