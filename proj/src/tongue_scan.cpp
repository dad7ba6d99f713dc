#include "ilfd/tongue_scan.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <memory>
#include <cmath>
#include <numbers>
#include <mutex>
#include <thread>
#include <tuple>

#include "ilfd/errors.hpp"

namespace ilfd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double mean_h(const LimitCycle& c) {
    std::vector<double> h(static_cast<std::size_t>(c.u.size()));
    for (int j = 0; j < c.u.size(); ++j) h[j] = c.params.h(c.u[j]);
    return mean(PeriodicSamples(c.T0, std::move(h)));
}

// Driven field in tau = omega t with the drive tabulated at RK4 half-steps,
// so every integration starts at a multiple of the drive period.
class Driven {
public:
    Driven(const SystemParams& p, const Forcing& f, int steps)
        : p_(p), steps_(steps), h_(kTwoPi / steps), f_(2 * steps), df_(2 * steps) {
        for (int j = 0; j < 2 * steps; ++j) {
            const double t = p.tau0 + 0.5 * h_ * j;
            f_[j] = f.eval(t);
            df_[j] = f.eval_derivative(t);
        }
        iw_ = 1.0 / p.omega;
        iw2_ = iw_ * iw_;
    }

    int steps() const { return steps_; }
    double step() const { return h_; }

    Deriv rhs(double u, double v, int j) const {
        const double fv = f_[j], dfv = df_[j];
        const double forcing = v * (3.0 * u * u - 1.0) * fv * iw_ + u * (u * u - 1.0) * (fv * iw2_ + dfv * iw_);
        return {v, -v * p_.h(u) * iw_ - p_.k(u) * iw2_ - p_.mu * forcing};
    }

    // One drive period; cb(i, before, after) after every step.
    template <class CB>
    void period(State& s, CB&& cb) const {
        const double h = h_;
        const int n2 = 2 * steps_;
        for (int i = 0; i < steps_; ++i) {
            const int j0 = 2 * i, j1 = 2 * i + 1, j2 = (2 * i + 2) % n2;
            const Deriv k1 = rhs(s.u, s.v, j0);
            const Deriv k2 = rhs(s.u + 0.5 * h * k1.du, s.v + 0.5 * h * k1.dv, j1);
            const Deriv k3 = rhs(s.u + 0.5 * h * k2.du, s.v + 0.5 * h * k2.dv, j1);
            const Deriv k4 = rhs(s.u + h * k3.du, s.v + h * k3.dv, j2);
            const State before = s;
            s.u += h / 6.0 * (k1.du + 2.0 * k2.du + 2.0 * k3.du + k4.du);
            s.v += h / 6.0 * (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv);
            s.tau += h;
            cb(i, before, s);
        }
    }

    void period(State& s) const {
        period(s, [](int, const State&, const State&) {});
    }

    // Drive phase index of the end of step i.
    int end_index(int i) const { return (2 * i + 2) % (2 * steps_); }

private:
    SystemParams p_;
    int steps_;
    double h_;
    std::vector<double> f_, df_;
    double iw_ = 1.0, iw2_ = 1.0;
};

// Phase angle around the origin; increases along the flow.
double angle(const State& s, double omega, double Omega0) {
    return std::atan2(-s.v * omega / Omega0, s.u);
}

// Maps the polar angle of a point near the cycle to its time phase on the
// unperturbed cycle: phase = theta + G(theta) with G periodic.
class PhaseMap {
public:
    PhaseMap(const LimitCycle& c, int nodes = 1025) {
        const double Om = c.Omega0;
        auto theta_at = [&](double t) { return std::atan2(-c.eval_v(t) / Om, c.eval_u(t)); };
        // Lifted angle on a dense time grid, then invert node by node.
        const int M = 8 * nodes;
        std::vector<double> tt(M + 1), th(M + 1);
        double prev = 0.0;
        for (int i = 0; i <= M; ++i) {
            tt[i] = c.T0 * i / M;
            const double a = theta_at(tt[i]);
            th[i] = i == 0 ? a : th[i - 1] + std::remainder(a - prev, kTwoPi);
            prev = a;
        }
        std::vector<double> g(static_cast<std::size_t>(nodes));
        for (int m = 0; m < nodes; ++m) {
            const double target = th[0] + kTwoPi * m / nodes;
            const auto it = std::upper_bound(th.begin(), th.end(), target);
            const int i = std::clamp(static_cast<int>(it - th.begin()) - 1, 0, M - 1);
            double lo = tt[i], hi = tt[i + 1];
            double flo = th[i] - target;
            for (int k = 0; k < 60; ++k) {
                const double mid = 0.5 * (lo + hi);
                const double fm = th[i] + std::remainder(theta_at(mid) - theta_at(tt[i]), kTwoPi) - target;
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            g[m] = kTwoPi * 0.5 * (lo + hi) / c.T0 - kTwoPi * m / nodes;
        }
        offset_ = th[0];
        G_ = PeriodicSamples(kTwoPi, std::move(g));
    }
    double correction(double theta) const { return G_(theta - offset_); }

private:
    double offset_ = 0.0;
    PeriodicSamples G_;
};

// The map depends only on the cycle; reuse it across calls.
std::shared_ptr<const PhaseMap> phase_map(const LimitCycle& c) {
    static std::mutex m;
    static std::vector<std::pair<std::array<double, 4>, std::shared_ptr<const PhaseMap>>> cache;
    const std::array<double, 4> key{c.params.alpha, c.params.beta, c.T0, c.U0};
    std::lock_guard<std::mutex> g(m);
    for (auto& [k, v] : cache)
        if (k == key) return v;
    auto pm = std::make_shared<const PhaseMap>(c);
    if (cache.size() > 16) cache.erase(cache.begin());
    cache.emplace_back(key, pm);
    return pm;
}

// Time of a + to - zero of v inside a step, from cubic Hermite data.
double crossing_time(const State& a, const State& b, double da, double db, double h) {
    auto H = [&](double x) {
        const double t = x / h, t2 = t * t, t3 = t2 * t;
        return (2 * t3 - 3 * t2 + 1) * a.v + (t3 - 2 * t2 + t) * h * da + (-2 * t3 + 3 * t2) * b.v +
               (t3 - t2) * h * db;
    };
    double lo = 0.0, hi = h;
    for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (lo + hi);
        if (H(m) > 0.0) lo = m; else hi = m;
    }
    return a.tau + 0.5 * (lo + hi);
}

struct Run {
    std::vector<State> strobes;
    std::vector<double> crossings;
    bool unbounded = false;
};

Run observe(const Driven& D, State s, int transient, int window, double escape) {
    Run r;
    for (int n = 0; n < transient; ++n) {
        D.period(s);
        if (!(std::abs(s.u) <= escape)) {
            r.unbounded = true;
            return r;
        }
    }
    s.tau = 0.0;
    r.strobes.push_back(s);
    for (int n = 0; n < window; ++n) {
        D.period(s, [&](int i, const State& a, const State& b) {
            if (a.v > 0.0 && b.v <= 0.0 && a.u > 0.0) {
                const double da = D.rhs(a.u, a.v, 2 * i).dv;
                const double db = D.rhs(b.u, b.v, D.end_index(i)).dv;
                r.crossings.push_back(crossing_time(a, b, da, db, D.step()));
            }
        });
        if (!(std::abs(s.u) <= escape)) {
            r.unbounded = true;
            return r;
        }
        r.strobes.push_back(s);
    }
    return r;
}

LockResult probe_once(const LockProbe& pr, const LimitCycle& cycle, const ScanSettings& st, int steps) {
    LockResult out;
    out.steps_per_period = steps;
    const int p = pr.res.p, q = pr.res.q;
    const double f0rho = mean_h(cycle) / cycle.Omega0;
    out.transient_periods = pr.transient_periods > 0
                                ? pr.transient_periods
                                : std::max(st.transient_min, static_cast<int>(std::ceil(20.0 / f0rho)));
    int window = std::max({64, pr.observation_periods, st.observation_periods});
    window = (window + p - 1) / p * p;
    const Driven D(pr.params, pr.forcing, steps);
    const double w = pr.params.omega;
    // Observe window after window while the strobe residual is still
    // contracting; slow contraction near a tongue edge needs many periods.
    State start = pr.start;
    int transient = out.transient_periods;
    Run r;
    for (;;) {
        r = observe(D, start, transient, window + p, st.escape);
        if (r.unbounded) {
            out.status = LockStatus::Unbounded;
            return out;
        }
        const std::size_t first = out.block_residuals.size();
        out.residual = 0.0;
        for (int b = 0; b < window / p; ++b) {
            double rb = 0.0;
            for (int n = b * p; n < (b + 1) * p; ++n) {
                const State& x = r.strobes[n];
                const State& y = r.strobes[n + p];
                rb = std::max(rb, std::hypot(y.u - x.u, (y.v - x.v) * w));
            }
            out.block_residuals.push_back(rb);
            out.residual = std::max(out.residual, rb);
        }
        if (out.residual < st.lock_tol) break;
        const std::size_t half = first + (out.block_residuals.size() - first) / 2;
        const double early = *std::max_element(out.block_residuals.begin() + first, out.block_residuals.begin() + half);
        const double late = *std::max_element(out.block_residuals.begin() + half, out.block_residuals.end());
        if (!(late < 0.8 * early) || out.transient_periods + window > st.max_periods) break;
        out.transient_periods += window;
        start = r.strobes[window];
        transient = 0;
    }
    const auto& c = r.crossings;
    if (c.size() >= static_cast<std::size_t>(q) + 1) {
        const std::size_t m = (c.size() - 1) / q;
        out.ratio = (c[m * q] - c[0]) / (kTwoPi * static_cast<double>(m * q));
    }
    const bool freq_ok = std::abs(out.ratio - pr.res.rho()) < st.ratio_tol;
    out.locked = out.residual < st.lock_tol && freq_ok;
    out.status = out.locked ? LockStatus::Locked : LockStatus::Unlocked;
    return out;
}

bool monotone(const std::vector<double>& r) {
    for (std::size_t i = 1; i < r.size(); ++i)
        if (r[i] > r[i - 1] * (1.0 + 1e-3) && r[i] > 1e-12) return false;
    return true;
}

// Min and max of the interpolated displacement function.
void extrema(Displacement& d) {
    const PeriodicSamples s(1.0, d.d);
    const int n = 8 * s.size();
    int imax = 0, imin = 0;
    std::vector<double> v(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        v[i] = s(static_cast<double>(i) / n);
        if (v[i] > v[imax]) imax = i;
        if (v[i] < v[imin]) imin = i;
    }
    const double h = 1.0 / n;
    d.s_max = golden_max([&](double x) { return s(x); }, (imax - 1) * h, (imax + 1) * h, 1e-10);
    d.s_min = golden_max([&](double x) { return -s(x); }, (imin - 1) * h, (imin + 1) * h, 1e-10);
    d.max = std::max(s(d.s_max), v[imax]);
    d.min = std::min(s(d.s_min), v[imin]);
    for (double x : d.d) {
        d.max = std::max(d.max, x);
        d.min = std::min(d.min, x);
    }
}

}  // namespace

std::string to_string(LockStatus s) {
    switch (s) {
        case LockStatus::Locked: return "locked";
        case LockStatus::Unlocked: return "unlocked";
        case LockStatus::Unbounded: return "unbounded";
    }
    return "?";
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex m;
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> g(m);
                    if (!err) err = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

LockResult is_locked(const LockProbe& probe, const LimitCycle& cycle, const ScanSettings& st) {
    if (probe.params.mu < 0.0) throw InvalidParams("is_locked: mu must be >= 0");
    probe.params.validate();
    LockResult r = probe_once(probe, cycle, st, st.steps_per_period);
    if (r.status == LockStatus::Unlocked && !monotone(r.block_residuals) && r.residual < 1e-2) {
        // Possibly an integration artefact near the lock threshold.
        LockResult again = probe_once(probe, cycle, st, 2 * st.steps_per_period);
        if (again.locked) return again;
    }
    return r;
}

Displacement circle_displacement(const LimitCycle& cycle, const Forcing& f, Resonance res,
                                 double mu, double omega, const ScanSettings& st) {
    SystemParams sp = cycle.params;
    sp.mu = mu;
    sp.omega = omega;
    const int p = res.p, q = res.q;
    const Driven D(sp, f, st.steps_per_period);
    const double H = mean_h(cycle);
    const int settle = std::max(2, static_cast<int>(std::ceil(-std::log(st.settle_tol) * omega / (kTwoPi * H))));
    int n = std::max(st.phase_samples, 8 * p + 1);
    if (n % 2 == 0) ++n;
    Displacement d;
    d.omega = omega;
    d.d.assign(static_cast<std::size_t>(n), 0.0);
    std::vector<char> escaped(static_cast<std::size_t>(n), 0);
    const double Om = cycle.Omega0;
    const auto pm = phase_map(cycle);
    const PhaseMap& phase = *pm;
    parallel_for(n, st.threads, [&](int i) {
        const double t = cycle.T0 * i / n;
        State s{cycle.u(t), cycle.v(t) / omega, 0.0};
        for (int k = 0; k < settle; ++k) {
            D.period(s);
            if (!(std::abs(s.u) <= st.escape)) {
                escaped[i] = 1;
                return;
            }
        }
        double prev = angle(s, omega, Om);
        double theta = -phase.correction(prev);
        for (int k = 0; k < p; ++k)
            D.period(s, [&](int, const State&, const State& b) {
                const double a = angle(b, omega, Om);
                theta += std::remainder(a - prev, kTwoPi);
                prev = a;
            });
        if (!(std::abs(s.u) <= st.escape)) escaped[i] = 1;
        theta += phase.correction(prev);
        d.d[i] = theta - kTwoPi * q;
    });
    d.unbounded = std::any_of(escaped.begin(), escaped.end(), [](char c) { return c != 0; });
    if (d.unbounded) return d;
    extrema(d);
    return d;
}

Boundaries boundary_bisect(const LimitCycle& cycle, const Forcing& f, Resonance res, double mu,
                           std::pair<double, double> bracket, const ScanSettings& st) {
    auto [lo, hi] = bracket;
    if (!(lo < hi)) throw InvalidParams("boundary_bisect: bracket must be increasing");
    Boundaries b;
    auto eval = [&](double w) {
        ++b.evaluations;
        Displacement d = circle_displacement(cycle, f, res, mu, w, st);
        if (d.unbounded) throw NoBracket("boundary_bisect: trajectory escaped at omega = " + std::to_string(w));
        return d;
    };
    const Displacement dlo = eval(lo), dhi = eval(hi);
    if (!(dlo.min > 0.0) || !(dhi.max < 0.0))
        throw NoBracket("boundary_bisect: bracket [" + std::to_string(lo) + ", " + std::to_string(hi) +
                        "] does not enclose the " + res.str() + " tongue at mu = " + std::to_string(mu));
    const double tol = std::min(st.bisect_abs * cycle.Omega0, st.bisect_rel * (hi - lo));
    // Lower boundary: root of min d; upper boundary: root of max d. Both decrease in omega.
    double a1 = lo, b1 = hi, a2 = lo, b2 = hi;
    while (b1 - a1 > tol || b2 - a2 > tol) {
        const bool first = (b1 - a1) >= (b2 - a2);
        const double m = first ? 0.5 * (a1 + b1) : 0.5 * (a2 + b2);
        const Displacement d = eval(m);
        if (m > a1 && m < b1) (d.min > 0.0 ? a1 : b1) = m;
        if (m > a2 && m < b2) (d.max > 0.0 ? a2 : b2) = m;
    }
    b.omega_min = 0.5 * (a1 + b1);
    b.omega_max = std::max(b.omega_min, 0.5 * (a2 + b2));
    return b;
}

std::vector<std::pair<double, double>> TongueResult::widths() const {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : points)
        if (!p.gap) out.emplace_back(p.mu, p.width);
    return out;
}

std::vector<double> default_mu_schedule(double mu_min, double mu_max, int n) {
    if (!(mu_min > 0.0 && mu_max > mu_min && n >= 2))
        throw InvalidParams("mu schedule needs 0 < mu_min < mu_max and n >= 2");
    std::vector<double> mu(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) mu[i] = mu_min * std::pow(mu_max / mu_min, static_cast<double>(i) / (n - 1));
    return mu;
}

TongueResult scan_tongue(const LimitCycle& cycle, const Forcing& f, Resonance res,
                         const std::vector<double>& mu_schedule, const ScanSettings& st) {
    TongueResult out;
    out.res = res;
    const double wc = res.rho() * cycle.Omega0;
    std::optional<Boundaries> prev;
    for (double mu : mu_schedule) {
        TonguePoint pt;
        pt.mu = mu;
        double lo, hi;
        if (prev) {
            const double margin = std::max(prev->width(), 1e-7 * wc);
            lo = prev->omega_min - margin;
            hi = prev->omega_max + margin;
        } else {
            lo = wc * (1.0 - st.initial_halfwidth);
            hi = wc * (1.0 + st.initial_halfwidth);
        }
        auto bracket_and_bisect = [&](double l, double h) {
            // Widen geometrically until each end sits outside the tongue.
            for (int k = 0; k < 40; ++k) {
                const Displacement dl = circle_displacement(cycle, f, res, mu, l, st);
                const Displacement dh = circle_displacement(cycle, f, res, mu, h, st);
                if (dl.unbounded || dh.unbounded) throw NoBracket("trajectory escaped while bracketing");
                const bool ok_lo = dl.min > 0.0, ok_hi = dh.max < 0.0;
                if (ok_lo && ok_hi) break;
                const double span = h - l;
                if (!ok_lo) l -= span;
                if (!ok_hi) h += span;
                if (l <= 0.0) throw NoBracket("bracket expansion reached omega <= 0");
            }
            return std::pair{boundary_bisect(cycle, f, res, mu, {l, h}, st),
                             std::min(st.bisect_abs * cycle.Omega0, st.bisect_rel * (h - l))};
        };
        try {
            auto [b, tol] = bracket_and_bisect(lo, hi);
            // A width comparable to the bisection tolerance is not resolved
            // yet: bisect again inside a bracket scaled to the tongue.
            for (int pass = 0; pass < 3 && b.width() < 20.0 * tol; ++pass) {
                const double margin = std::max(b.width(), 1e-7 * wc) + tol;
                std::tie(b, tol) = bracket_and_bisect(b.omega_min - margin, b.omega_max + margin);
            }
            pt.omega_min = b.omega_min;
            pt.omega_max = b.omega_max;
            pt.width = b.width();
            pt.center = 0.5 * (b.omega_min + b.omega_max);
            if (pt.width < st.width_floor) {
                pt.gap = true;
                pt.note = "width below floor";
            }
            prev = b;
        } catch (const NoBracket& e) {
            pt.gap = true;
            pt.note = e.what();
            prev.reset();
        }
        out.points.push_back(pt);
    }
    return out;
}

std::vector<StaircasePoint> staircase(const LimitCycle& cycle, const Forcing& f, double mu,
                                      const std::vector<double>& omegas, const ScanSettings& st) {
    const double Om = cycle.Omega0;
    for (double w : omegas)
        if (w < 0.3 * Om * (1 - 1e-12) || w > 5.0 * Om * (1 + 1e-12))
            throw InvalidParams("staircase: omega grid must lie within [0.3, 5] Omega0");
    std::vector<StaircasePoint> out(omegas.size());
    const int transient = st.transient_min;
    const int n = st.staircase_periods;
    const auto pm = phase_map(cycle);
    parallel_for(static_cast<int>(omegas.size()), st.threads, [&](int i) {
        SystemParams sp = cycle.params;
        sp.mu = mu;
        sp.omega = omegas[i];
        const Driven D(sp, f, st.steps_per_period);
        State s{2.0, 0.0, 0.0};
        out[i].omega = omegas[i];
        for (int k = 0; k < transient; ++k) {
            D.period(s);
            if (!(std::abs(s.u) <= st.escape)) {
                out[i].unbounded = true;
                return;
            }
        }
        // Weighted Birkhoff average of the cycle-phase advance per drive
        // period; the polar angle is lifted step by step and corrected at
        // the period ends only.
        double num = 0.0, den = 0.0, prev = angle(s, sp.omega, Om);
        double corr = pm->correction(prev);
        for (int k = 0; k < n; ++k) {
            double adv = -corr;
            D.period(s, [&](int, const State&, const State& b) {
                const double a = angle(b, sp.omega, Om);
                adv += std::remainder(a - prev, kTwoPi);
                prev = a;
            });
            corr = pm->correction(prev);
            adv += corr;
            if (!(std::abs(s.u) <= st.escape)) {
                out[i].unbounded = true;
                return;
            }
            const double t = (k + 0.5) / n;
            const double wgt = std::exp(-1.0 / (t * (1.0 - t)));
            num += wgt * adv;
            den += wgt;
        }
        out[i].ratio = kTwoPi / (num / den);
    });
    return out;
}

}  // namespace ilfd
