#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ilfd/forcing.hpp"
#include "ilfd/lienard.hpp"
#include "ilfd/perturbation.hpp"

namespace ilfd {

struct ScanSettings {
    int steps_per_period = 400;   // RK4 steps per drive period
    int transient_min = 200;      // drive periods
    int observation_periods = 64;
    int max_periods = 20000;      // cap on the adaptively extended transient
    double lock_tol = 1e-6;       // strobe residual
    double ratio_tol = 1e-6;      // |omega / Omega - p / q|
    double escape = 100.0;        // |u| beyond this is Unbounded
    int phase_samples = 33;       // initial phases for the displacement function
    double settle_tol = 1e-14;    // decay of off-circle components before measuring
    double bisect_abs = 1e-6;     // times Omega0
    double bisect_rel = 1e-5;     // times the initial bracket width
    double width_floor = 1e-9;
    double initial_halfwidth = 0.02;  // relative to rho Omega0
    int staircase_periods = 200;      // observation window for the ratio
    int threads = 1;
};

enum class LockStatus { Locked, Unlocked, Unbounded };

std::string to_string(LockStatus s);

struct LockProbe {
    SystemParams params;  // mu and omega set here
    Forcing forcing = Forcing::harmonic();
    Resonance res;
    int transient_periods = 0;  // 0: max(200, 20 / (f0 rho))
    int observation_periods = 64;
    State start{2.0, 0.0, 0.0};
};

struct LockResult {
    LockStatus status = LockStatus::Unlocked;
    bool locked = false;
    double residual = 0.0;  // max_n |z_{n+p} - z_n| over the final window
    double ratio = 0.0;     // crossing-measured omega / Omega
    std::vector<double> block_residuals;  // per p-block over every window observed
    int steps_per_period = 0;
    int transient_periods = 0;  // including windows spent contracting
};

// Stroboscopic period-p test: the limit cycle supplies Omega0 and <h>.
LockResult is_locked(const LockProbe& probe, const LimitCycle& cycle, const ScanSettings& st = {});

// d(s) = phase advance over p drive periods minus 2 pi q, for initial
// points on the unperturbed cycle at phase s in [0, 1), after settling
// onto the invariant circle. Zeros of d are p:q locked orbits.
struct Displacement {
    double omega = 0.0;
    std::vector<double> d;
    double min = 0.0, max = 0.0;
    double s_min = 0.0, s_max = 0.0;
    bool unbounded = false;
};

Displacement circle_displacement(const LimitCycle& cycle, const Forcing& f, Resonance res,
                                 double mu, double omega, const ScanSettings& st = {});

struct Boundaries {
    double omega_min = 0.0;
    double omega_max = 0.0;
    int evaluations = 0;
    double width() const { return omega_max - omega_min; }
};

// Bisection on both boundaries. Throws NoBracket unless the lower end lies
// below the tongue (d > 0 for every phase) and the upper end above (d < 0).
Boundaries boundary_bisect(const LimitCycle& cycle, const Forcing& f, Resonance res, double mu,
                           std::pair<double, double> bracket, const ScanSettings& st = {});

struct TonguePoint {
    double mu = 0.0;
    double omega_min = 0.0, omega_max = 0.0;
    double width = 0.0, center = 0.0;
    bool gap = false;  // unresolved at this mu
    std::string note;
};

struct TongueResult {
    Resonance res;
    std::vector<TonguePoint> points;
    std::vector<std::pair<double, double>> widths() const;  // (mu, width), gaps skipped
};

std::vector<double> default_mu_schedule(double mu_min = 1e-3, double mu_max = 0.5, int n = 40);

TongueResult scan_tongue(const LimitCycle& cycle, const Forcing& f, Resonance res,
                         const std::vector<double>& mu_schedule, const ScanSettings& st = {});

struct StaircasePoint {
    double omega = 0.0;
    double ratio = 0.0;  // omega / Omega
    bool unbounded = false;
};

std::vector<StaircasePoint> staircase(const LimitCycle& cycle, const Forcing& f, double mu,
                                      const std::vector<double>& omegas, const ScanSettings& st = {});

// Runs fn(i) for i in [0, n) on up to `threads` workers; results must be
// written by index so the output order does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace ilfd
