#pragma once

#include <functional>
#include <initializer_list>

#include "ati/error.hpp"
#include "ati/trajectory.hpp"

namespace ati::testing {

inline Matrix rows(std::initializer_list<std::initializer_list<double>> r)
{
    Matrix M(static_cast<Eigen::Index>(r.size()), static_cast<Eigen::Index>(r.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : r) {
        Eigen::Index j = 0;
        for (double v : row) {
            M(i, j++) = v;
        }
        ++i;
    }
    return M;
}

/// True when f throws ati::Error with the given code.
inline bool throwsCode(const std::function<void()>& f, ErrorCode code)
{
    try {
        f();
    } catch (const Error& e) {
        return e.code() == code;
    }
    return false;
}

} // namespace ati::testing
