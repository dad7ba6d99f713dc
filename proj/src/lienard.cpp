#include "ilfd/lienard.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ilfd/errors.hpp"

namespace ilfd {

void SystemParams::validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !(alpha > beta && beta > 1.0))
        throw InvalidParams("requires alpha > beta > 1");
    if (!(mu >= 0.0) || !std::isfinite(mu)) throw InvalidParams("requires mu >= 0");
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidParams("requires omega > 0");
}

Deriv rhs_unperturbed(const SystemParams& p, const State& s) {
    return {s.v, -s.v * p.h(s.u) - p.k(s.u)};
}

Deriv rhs_perturbed(const SystemParams& p, const Forcing& f, const State& s) {
    const double w = p.omega;
    const double ph = s.tau + p.tau0;
    double dv = -s.v * p.h(s.u) / w - p.k(s.u) / (w * w);
    if (p.mu != 0.0) dv -= p.mu * psi_bar(p, s.u, s.v, f.eval(ph), f.eval_derivative(ph));
    return {s.v, dv};
}

void taylor_coefficients(const SystemParams& p, double u0, double v0, int degree, ps::Series& u,
                         ps::Series& v) {
    const std::size_t n1 = static_cast<std::size_t>(degree + 1);
    u.assign(n1, 0.0);
    v.assign(n1, 0.0);
    ps::Series u2(n1, 0.0), u3(n1, 0.0), vu2(n1, 0.0);
    u[0] = u0;
    v[0] = v0;
    const double a = p.alpha - p.beta;
    for (int n = 0; n < degree; ++n) {
        double s2 = 0.0;
        for (int i = 0; i <= n; ++i) s2 += u[i] * u[n - i];
        u2[n] = s2;
        double s3 = 0.0, sv = 0.0;
        for (int i = 0; i <= n; ++i) {
            s3 += u2[i] * u[n - i];
            sv += v[i] * u2[n - i];
        }
        u3[n] = s3;
        vu2[n] = sv;
        const double vh = (1.0 - p.beta) * v[n] + 3.0 * p.beta * vu2[n];
        const double k = a * u[n] + p.beta * u3[n];
        u[n + 1] = v[n] / (n + 1);
        v[n + 1] = -(vh + k) / (n + 1);
    }
}

TaylorPiece taylor_step(const SystemParams& p, const State& s, int degree, double radius,
                        double tol) {
    if (degree < 4) throw InvalidParams("taylor_step: degree must be >= 4");
    TaylorPiece piece;
    piece.t0 = s.tau;
    taylor_coefficients(p, s.u, s.v, degree, piece.u, piece.v);
    const double scale = tol * std::max(1.0, std::abs(s.u));
    double h = radius;
    for (;;) {
        bool ok = true;
        for (int k = degree - 2; k <= degree && ok; ++k) {
            const double hk = std::pow(h, k);
            ok = std::abs(piece.u[k]) * hk < scale && std::abs(piece.v[k]) * hk < scale;
        }
        if (ok) break;
        h *= 0.5;
        if (h < 1e-12) throw StepUnderflow("taylor_step: step below 1e-12");
    }
    piece.h = h;
    return piece;
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Newton on v(t) = 0 inside a piece, starting from the linear guess.
double piece_root(const TaylorPiece& pc, int max_iter) {
    const double va = pc.v[0];
    const double vb = ps::eval(pc.v, pc.h);
    double s = pc.h * va / (va - vb);
    for (int it = 0; it < max_iter; ++it) {
        const double f = ps::eval(pc.v, s);
        const double d = ps::eval_derivative(pc.v, s);
        const double ds = f / d;
        s -= ds;
        if (std::abs(ds) <= 1e-16 * std::max(1.0, std::abs(s))) return s;
    }
    throw NoConvergence("find_limit_cycle: Newton on the series did not converge");
}

struct ReturnResult {
    double U;
    double T;
    std::vector<TaylorPiece> pieces;
};

// One loop around the cycle from (U, 0) back to the next maximum of u.
ReturnResult return_map(const SystemParams& p, double U, const LimitCycleSettings& st) {
    ReturnResult r;
    State s{U, 0.0, 0.0};
    bool went_negative = false;
    for (int guard = 0; guard < 1000000; ++guard) {
        TaylorPiece pc = taylor_step(p, s, st.degree, st.taylor_radius);
        const double ue = ps::eval(pc.u, pc.h);
        const double ve = ps::eval(pc.v, pc.h);
        if (s.v < 0.0 || ve < 0.0) went_negative = true;
        const bool crossing = went_negative && s.v > 0.0 && ve <= 0.0 && s.u > 0.0;
        r.pieces.push_back(pc);
        if (crossing) {
            const double dt = piece_root(pc, st.max_newton);
            r.T = pc.t0 + dt;
            r.U = ps::eval(pc.u, dt);
            return r;
        }
        s = State{ue, ve, pc.t0 + pc.h};
        // Guard against a cycle that never returns (should not happen for alpha > beta > 1).
        if (s.tau > 1e4) break;
    }
    throw NoConvergence("find_limit_cycle: orbit did not return to the section");
}

// RK4 in physical time until v changes sign from + to - with u > 0; the
// crossing time is located by bisection on the length of the last step.
State next_crossing(const SystemParams& p, State s, double h) {
    auto f = [&](const State& x) { return rhs_unperturbed(p, x); };
    for (long guard = 0; guard < 100000000L; ++guard) {
        const State n = integrate_rk4(f, s, h, 1);
        if (s.v > 0.0 && n.v <= 0.0 && s.u > 0.0) {
            double lo = 0.0, hi = h;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const State m = integrate_rk4(f, s, mid, 1);
                (m.v > 0.0 ? lo : hi) = mid;
            }
            return integrate_rk4(f, s, 0.5 * (lo + hi), 1);
        }
        s = n;
    }
    throw NoConvergence("find_limit_cycle: no section crossing found");
}

const TaylorPiece& locate(const std::vector<TaylorPiece>& pieces, double t) {
    auto it = std::upper_bound(pieces.begin(), pieces.end(), t,
                               [](double x, const TaylorPiece& pc) { return x < pc.t0; });
    if (it != pieces.begin()) --it;
    return *it;
}

}  // namespace

double LimitCycle::eval_u(double t) const {
    const double r = t - T0 * std::floor(t / T0);
    return locate(pieces, r).eval_u(r);
}

double LimitCycle::eval_v(double t) const {
    const double r = t - T0 * std::floor(t / T0);
    return locate(pieces, r).eval_v(r);
}

LimitCycle find_limit_cycle(const SystemParams& p, const LimitCycleSettings& st) {
    p.validate();
    if (st.samples < 3 || st.samples % 2 == 0)
        throw InvalidParams("find_limit_cycle: sample count must be odd and >= 3");

    // (i) transient from (2, 0)
    auto f = [&](const State& x) { return rhs_unperturbed(p, x); };
    const long n_tr = std::lround(st.transient / st.rk4_step);
    State s = integrate_rk4(f, State{2.0, 0.0, 0.0}, st.rk4_step, n_tr);
    // (ii) first maximum of u, (iii) the next one
    const State c2 = next_crossing(p, s, st.rk4_step);
    const State c3 = next_crossing(p, integrate_rk4(f, c2, st.rk4_step, 1), st.rk4_step);
    double U = c3.u;
    double T = c3.tau - c2.tau;

    // Refine on the series: iterate the return map of the section v = 0.
    ReturnResult rr;
    bool converged = false;
    for (int it = 0; it < st.max_newton; ++it) {
        rr = return_map(p, U, st);
        const double dU = rr.U - U;
        const double dT = rr.T - T;
        U = rr.U;
        T = rr.T;
        if (std::abs(dU) < 1e-15 && std::abs(dT) < 1e-13) {
            converged = true;
            break;
        }
    }
    if (!converged) throw NoConvergence("find_limit_cycle: return map did not converge");
    rr = return_map(p, U, st);

    LimitCycle c;
    c.params = p;
    c.params.mu = 0.0;
    c.U0 = U;
    c.T0 = rr.T;
    c.Omega0 = kTwoPi / c.T0;
    c.r1 = -p.k(U);
    c.pieces = std::move(rr.pieces);
    const int K = st.samples;
    std::vector<double> us(static_cast<std::size_t>(K)), vs(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        const double t = c.T0 * j / K;
        const TaylorPiece& pc = locate(c.pieces, t);
        us[j] = pc.eval_u(t);
        vs[j] = pc.eval_v(t);
    }
    vs[0] = 0.0;
    c.u = PeriodicSamples(c.T0, std::move(us));
    c.v = PeriodicSamples(c.T0, std::move(vs));
    return c;
}

}  // namespace ilfd
