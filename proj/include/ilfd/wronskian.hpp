#pragma once

#include <vector>

#include "ilfd/lienard.hpp"
#include "ilfd/periodic_interp.hpp"
#include "ilfd/power_series.hpp"

namespace ilfd {

// F(tau) = f0 tau + Ftilde(tau), the integral of h(u0)/(rho Omega0), with Ftilde(0) = 0.
struct FloquetPhase {
    double rho_omega = 1.0;  // rho * Omega0; 1 means physical time
    double mean_h = 0.0;     // <h(u0)> over a period, time-scale free
    double f0 = 0.0;
    PeriodicSamples F_tilde;  // period T0 * rho_omega

    double F(double tau) const { return f0 * tau + F_tilde(tau); }
};

FloquetPhase compute_F(const LimitCycle& cycle, double rho_omega);

struct WronskianSettings {
    double r_c = 1e-2;
    int series_degree = 10;
    RombergOptions romberg{};
};

// Expansion 1 + sum_{j>=2} R_j t^j of w11 about a maximum of u0 (physical time),
// built from the Frobenius representation u0' (k + int c1 e^{-F} / u0'^2).
ps::Series w11_series(const SystemParams& p, double U0, int degree);

// w11 on t_i = i T0 / K, i = 0..2K, physical time, normalized to w11(0) = 1.
std::vector<double> w11_grid(const LimitCycle& cycle, const FloquetPhase& phys,
                             const WronskianSettings& settings = {});

struct PeriodicParts {
    PeriodicSamples a, b;
    double gamma = 0.0;
    double b_period_end = 0.0;  // b(T0) computed from the grid, equals b(0) ideally
    double residual_rms = 0.0;
};

// Split w11 = a + e^{-f0 t} b with a = gamma u0'. Works in whatever units the
// inputs carry: w on 2K+1 nodes over two periods, v0 on the K nodes.
PeriodicParts extract_ab(const std::vector<double>& w11, const PeriodicSamples& v0, double f0);

// Least-squares residual of w11 - e^{-f0 t} b - gamma v0 over the 0..K nodes.
double ab_residual(const std::vector<double>& w11, const PeriodicSamples& v0, double f0,
                   const PeriodicSamples& b, double b_end, double gamma);

// Everything the perturbation expansion needs at one rho, in rescaled time
// tau = rho Omega0 t. The w11 normalization uses c1 = -r1 with r1 = u0''(0) in
// physical time, so w11(0) = (rho Omega0)^2; widths do not depend on it.
struct WronskianData {
    double rho_omega = 1.0;
    double f0 = 0.0;
    double mean_h = 0.0;
    PeriodicSamples F_tilde;
    std::vector<double> w11;  // 2K+1 nodes over two periods
    PeriodicSamples a, b;
    double b_period_end = 0.0;
    double gamma = 0.0;
    double r1 = 0.0;  // physical time
    double c1 = 0.0;
    double c2 = 0.0;
    double A = 0.0;
    double A_quadrature = 0.0;
    double A_romberg = 0.0;
    double A_closed = 0.0;
    double residual_rms = 0.0;

    double period() const { return a.period(); }
    int size() const { return a.size(); }
};

struct AValues {
    double quadrature = 0.0;
    double romberg = 0.0;
    double closed_form = 0.0;
};

AValues compute_A(const WronskianData& w, const LimitCycle& cycle);

// Physical-time variational data, independent of rho.
struct VariationalBase {
    FloquetPhase phase;
    ps::Series series;
    std::vector<double> w11;
    PeriodicParts parts;
};

VariationalBase build_variational(const LimitCycle& cycle, const WronskianSettings& settings = {});

// Rescale to rho Omega0 and compute A; throws CrossCheckFailure when the
// quadrature and closed-form values of A differ by more than 1e-9 relative.
WronskianData rescale(const VariationalBase& base, const LimitCycle& cycle, double rho);

WronskianData build_wronskian(const LimitCycle& cycle, double rho,
                              const WronskianSettings& settings = {});

}  // namespace ilfd
