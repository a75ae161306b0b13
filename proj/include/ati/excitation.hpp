#pragma once

#include <vector>

#include "ati/trajectory.hpp"

namespace ati {

enum class ModelClass { Linear, Affine };

/// Outcome of a rank-based excitation test, kept for reporting.
struct RankCheck {
    bool holds = false;
    int rank = 0;
    int target = 0;
    RankResult detail;
};

/// rank H_L(u) == mL, with m = u.q().
RankCheck peCheck(const Trajectory& u, int L, ModelClass cls, double tol = 0.0);

bool peOrderLinear(const Trajectory& u, int L, double tol = 0.0);
/// rank [H_L(u); 1'] == mL + 1.
bool peOrderAffine(const Trajectory& u, int L, double tol = 0.0);

struct PeScan {
    int order = 0;
    /// passes[L-1] is the test outcome at depth L, scanned over every L <= T.
    std::vector<bool> passes;
    /// False when some depth passes after an earlier failure.
    bool monotone = true;
};

/// Largest L such that every depth 1..L passes; the full pass vector is retained.
PeScan peScan(const Trajectory& u, ModelClass cls, double tol = 0.0);
int maxPeOrder(const Trajectory& u, ModelClass cls, double tol = 0.0);

/// rank [H_L(w_d); 1'] == mL + n + 1, valid when L is at least the lag.
RankCheck gapeCheck(const Trajectory& wd, int L, int n, double tol = 0.0);
/// General form rank [H_L(w_d); 1'] == d_L + 1 for a known restricted dimension d_L.
RankCheck gapeCheckGeneral(const Trajectory& wd, int L, int dL, double tol = 0.0);

/// Minimal sequence length (m+1)L - 1 for persistency of excitation of order L.
int minDataLength(int m, int L, ModelClass cls);
/// T_{n+L+1}(linear) - T_{n+L}(affine).
int samplingGap(int m);

} // namespace ati
