#pragma once

#include <vector>

#include "ilfd/forcing.hpp"
#include "ilfd/periodic_interp.hpp"
#include "ilfd/power_series.hpp"

namespace ilfd {

// u'' + u' h(u) + k(u) + mu Psi = 0 with h = 1 - beta + 3 beta u^2 and
// k = u (alpha - beta + beta u^2); omega is the drive frequency.
struct SystemParams {
    double alpha = 5.0;
    double beta = 4.0;
    double mu = 0.0;
    double omega = 1.0;
    double tau0 = 0.0;

    void validate() const;

    double h(double u) const { return 1.0 - beta + 3.0 * beta * u * u; }
    double dh(double u) const { return 6.0 * beta * u; }
    double d2h(double) const { return 6.0 * beta; }
    double k(double u) const { return u * (alpha - beta + beta * u * u); }
    double dk(double u) const { return alpha - beta + 3.0 * beta * u * u; }
    double d2k(double u) const { return 6.0 * beta * u; }
};

struct State {
    double u = 0.0;
    double v = 0.0;
    double tau = 0.0;
};

struct Deriv {
    double du = 0.0;
    double dv = 0.0;
};

// Autonomous field in physical time: (v, -v h(u) - k(u)).
Deriv rhs_unperturbed(const SystemParams& p, const State& s);

// Drive term of the rescaled equation at drive phase tau (tau0 already added).
inline double psi_bar(const SystemParams& p, double u, double v, double f, double df) {
    const double w = p.omega;
    return v * (3.0 * u * u - 1.0) * f / w + u * (u * u - 1.0) * (f / (w * w) + df / w);
}

// Field in rescaled time tau = omega t, including the drive.
Deriv rhs_perturbed(const SystemParams& p, const Forcing& f, const State& s);

template <class Rhs>
State integrate_rk4(Rhs&& rhs, State s, double h, long n_steps) {
    for (long i = 0; i < n_steps; ++i) {
        const Deriv k1 = rhs(s);
        const Deriv k2 = rhs(State{s.u + 0.5 * h * k1.du, s.v + 0.5 * h * k1.dv, s.tau + 0.5 * h});
        const Deriv k3 = rhs(State{s.u + 0.5 * h * k2.du, s.v + 0.5 * h * k2.dv, s.tau + 0.5 * h});
        const Deriv k4 = rhs(State{s.u + h * k3.du, s.v + h * k3.dv, s.tau + h});
        s.u += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
        s.v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
        s.tau += h;
    }
    return s;
}

// Local Taylor expansion of the unperturbed solution, valid on [t0, t0 + h].
struct TaylorPiece {
    double t0 = 0.0;
    double h = 0.0;
    ps::Series u, v;
    double eval_u(double t) const { return ps::eval(u, t - t0); }
    double eval_v(double t) const { return ps::eval(v, t - t0); }
};

// Coefficients of the unperturbed solution through `state` by recurrence.
void taylor_coefficients(const SystemParams& p, double u0, double v0, int degree,
                         ps::Series& u, ps::Series& v);

// Step accepted once |c_k| h^k < tol max(1, |u|) for the last three
// coefficients of both series, starting from `radius` and halving.
TaylorPiece taylor_step(const SystemParams& p, const State& s, int degree, double radius,
                        double tol = 1e-14);

struct LimitCycleSettings {
    double transient = 200.0;
    double rk4_step = 1e-3;
    int samples = 151;
    int degree = 30;
    double taylor_radius = 0.5;
    int max_newton = 50;
};

struct LimitCycle {
    SystemParams params;
    double U0 = 0.0;
    double T0 = 0.0;
    double Omega0 = 0.0;
    double r1 = 0.0;  // u0''(0) in physical time
    PeriodicSamples u, v;  // physical time, period T0
    std::vector<TaylorPiece> pieces;

    // Evaluate the cycle from its Taylor pieces at any t (reduced mod T0).
    double eval_u(double t) const;
    double eval_v(double t) const;
};

LimitCycle find_limit_cycle(const SystemParams& p, const LimitCycleSettings& settings = {});

}  // namespace ilfd
