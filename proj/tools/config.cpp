#include "config.hpp"

#include <sstream>

#include "ilfd/errors.hpp"

namespace ilfd::cli {

void RunConfig::validate() const {
    params().validate();
    if (samples < 9 || samples % 2 == 0) throw InvalidParams("samples must be odd and >= 9");
    if (tau0_points < 8) throw InvalidParams("tau0-points must be >= 8");
    if (!(romberg_rel_tol > 0 && lock_tol > 0 && bisect_tol > 0)) throw InvalidParams("tolerances must be positive");
    if (!(mu >= 0)) throw InvalidParams("mu must be >= 0");
    if (!(mu_min > 0 && mu_max > mu_min) || mu_points < 2) throw InvalidParams("need 0 < mu-min < mu-max and mu-points >= 2");
    if (steps_per_period < 16) throw InvalidParams("steps-per-period must be >= 16");
    if (threads < 1) throw InvalidParams("threads must be >= 1");
    if (omega_points < 1) throw InvalidParams("omega-points must be >= 1");
}

SystemParams RunConfig::params() const {
    SystemParams p;
    p.alpha = alpha;
    p.beta = beta;
    return p;
}

Forcing RunConfig::make_forcing() const { return Forcing::parse(forcing); }

std::vector<Resonance> RunConfig::resonance_list() const {
    std::vector<Resonance> out;
    std::stringstream ss(resonances);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(Resonance::parse(item));
    if (out.empty()) throw ParseError("empty resonance list");
    return out;
}

std::pair<double, double> RunConfig::omega_bounds() const {
    const auto c = omega_range.find_first_of(",:");
    try {
        if (c == std::string::npos) throw std::invalid_argument(omega_range);
        const double a = std::stod(omega_range.substr(0, c)), b = std::stod(omega_range.substr(c + 1));
        if (!(a > 0 && b > a)) throw InvalidParams("omega-range must be increasing and positive");
        return {a, b};
    } catch (const InvalidParams&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError("cannot parse omega-range '" + omega_range + "' (expected lo,hi)");
    }
}

ScanSettings RunConfig::scan_settings() const {
    ScanSettings s;
    s.steps_per_period = steps_per_period;
    s.lock_tol = lock_tol;
    s.bisect_abs = bisect_tol;
    s.threads = threads;
    return s;
}

}  // namespace ilfd::cli
