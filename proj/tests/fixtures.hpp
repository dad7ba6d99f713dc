#pragma once

#include "ilfd/lienard.hpp"
#include "ilfd/perturbation.hpp"
#include "ilfd/wronskian.hpp"

namespace fixture {

// Reference system alpha = 5, beta = 4, built once per test binary.
inline const ilfd::LimitCycle& cycle() {
    static const ilfd::LimitCycle c = ilfd::find_limit_cycle(ilfd::SystemParams{});
    return c;
}

inline const ilfd::VariationalBase& base() {
    static const ilfd::VariationalBase b = ilfd::build_variational(cycle());
    return b;
}

inline ilfd::WronskianData wronskian(double rho) { return ilfd::rescale(base(), cycle(), rho); }

}  // namespace fixture
