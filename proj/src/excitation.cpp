#include "ati/excitation.hpp"

#include <string>

namespace ati {

RankCheck peCheck(const Trajectory& u, int L, ModelClass cls, double tol)
{
    const HankelMatrix H = hankel(u, L);
    RankCheck out;
    if (cls == ModelClass::Linear) {
        out.detail = numericalRank(H.entries, tol);
        out.target = u.q() * L;
    } else {
        out.detail = numericalRank(appendOnesRow(H.entries), tol);
        out.target = u.q() * L + 1;
    }
    out.rank = out.detail.rank;
    out.holds = out.rank == out.target;
    return out;
}

bool peOrderLinear(const Trajectory& u, int L, double tol)
{
    return peCheck(u, L, ModelClass::Linear, tol).holds;
}

bool peOrderAffine(const Trajectory& u, int L, double tol)
{
    return peCheck(u, L, ModelClass::Affine, tol).holds;
}

PeScan peScan(const Trajectory& u, ModelClass cls, double tol)
{
    PeScan scan;
    bool failed = false;
    for (int L = 1; L <= u.length(); ++L) {
        const bool ok = peCheck(u, L, cls, tol).holds;
        scan.passes.push_back(ok);
        if (ok && !failed) {
            scan.order = L;
        }
        if (ok && failed) {
            scan.monotone = false;
        }
        failed = failed || !ok;
    }
    return scan;
}

int maxPeOrder(const Trajectory& u, ModelClass cls, double tol)
{
    return peScan(u, cls, tol).order;
}

RankCheck gapeCheckGeneral(const Trajectory& wd, int L, int dL, double tol)
{
    if (dL < 0) {
        throw Error(ErrorCode::InvalidArgument, "restricted dimension must be nonnegative");
    }
    const HankelMatrix H = hankel(wd, L);
    RankCheck out;
    out.detail = numericalRank(appendOnesRow(H.entries), tol);
    out.rank = out.detail.rank;
    out.target = dL + 1;
    out.holds = out.rank == out.target;
    return out;
}

RankCheck gapeCheck(const Trajectory& wd, int L, int n, double tol)
{
    if (n < 0) {
        throw Error(ErrorCode::InvalidArgument, "order must be nonnegative");
    }
    return gapeCheckGeneral(wd, L, wd.m() * L + n, tol);
}

int minDataLength(int m, int L, ModelClass /*cls*/)
{
    if (m < 1 || L < 1) {
        throw Error(ErrorCode::InvalidArgument, "minDataLength needs m >= 1 and L >= 1");
    }
    return (m + 1) * L - 1;
}

int samplingGap(int m)
{
    if (m < 1) {
        throw Error(ErrorCode::InvalidArgument, "samplingGap needs m >= 1");
    }
    // T_{n+L+1}(linear) - T_{n+L}(affine); n and L cancel.
    return minDataLength(m, 2, ModelClass::Linear) - minDataLength(m, 1, ModelClass::Affine);
}

} // namespace ati
