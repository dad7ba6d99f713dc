#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ilfd/forcing.hpp"
#include "ilfd/lienard.hpp"
#include "ilfd/perturbation.hpp"
#include "ilfd/tongue_scan.hpp"

namespace ilfd::cli {

struct RunConfig {
    double alpha = 5.0;
    double beta = 4.0;
    std::string forcing = "sin";
    std::string resonances = "2:1,4:1,1:1,3:1";
    std::string rho = "2";
    int samples = 151;  // K
    int tau0_points = 64;
    double mu = 0.1;
    double mu_min = 1e-3;
    double mu_max = 0.5;
    int mu_points = 40;
    std::string omega_range = "0.3,5";  // in units of Omega0
    int omega_points = 400;
    double romberg_rel_tol = 1e-12;
    double lock_tol = 1e-6;
    double bisect_tol = 1e-6;  // times Omega0
    int steps_per_period = 400;
    int threads = 1;
    std::string out;    // directory; empty writes to stdout
    std::string input;  // fit
    bool simulate = false;
    double fit_mu_max = 0.1;  // report --simulate

    void validate() const;  // throws InvalidParams
    SystemParams params() const;
    Forcing make_forcing() const;
    std::vector<Resonance> resonance_list() const;
    std::pair<double, double> omega_bounds() const;
    ScanSettings scan_settings() const;
};

}  // namespace ilfd::cli
