#include "ilfd/wronskian.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "ilfd/errors.hpp"

namespace ilfd {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

FloquetPhase compute_F(const LimitCycle& cycle, double rho_omega) {
    const int K = cycle.u.size();
    std::vector<double> h(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) h[j] = cycle.params.h(cycle.u[j]);
    const PeriodicSamples hs(cycle.T0, std::move(h));
    const auto X = integrate_periodic_nodes(hs);
    FloquetPhase ph;
    ph.rho_omega = rho_omega;
    ph.mean_h = X[K] / cycle.T0;
    ph.f0 = ph.mean_h / rho_omega;
    std::vector<double> Ft(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) Ft[j] = X[j] - ph.mean_h * cycle.T0 * j / K;
    Ft[0] = 0.0;
    ph.F_tilde = PeriodicSamples(cycle.T0 * rho_omega, std::move(Ft));
    return ph;
}

ps::Series w11_series(const SystemParams& p, double U0, int M) {
    if (M < 2) throw InvalidParams("w11_series: degree must be >= 2");
    const int D = M + 2;
    ps::Series u, v;
    taylor_coefficients(p, U0, 0.0, D, u, v);
    // u0' = s d(s)
    ps::Series d(v.begin() + 1, v.end());
    d.resize(static_cast<std::size_t>(M + 1));
    // h(u0) and F = int_0^s h(u0)
    ps::Series hu = ps::mul(u, u, M);
    for (auto& c : hu) c *= 3.0 * p.beta;
    hu[0] += 1.0 - p.beta;
    ps::Series F = ps::integral(hu);
    F.resize(static_cast<std::size_t>(M + 1));
    ps::Series minusF(F);
    for (auto& c : minusF) c = -c;
    // e^{-F} / u0'^2 = s^{-2} g(s)
    const ps::Series g = ps::mul(ps::exp(minusF, M), ps::reciprocal(ps::mul(d, d, M), M), M);
    // g[1] is the residue of the integrand; it vanishes because w11 is regular.
    const double c1 = -p.k(U0) * -1.0;  // c1 = -r1 with r1 = -k(U0)
    ps::Series P(static_cast<std::size_t>(M + 1), 0.0);
    P[0] = -g[0];
    for (int n = 2; n <= M; ++n) P[n] = g[n] / (n - 1);
    ps::Series w = ps::mul(d, P, M);
    for (auto& c : w) c *= c1;
    // Add k2 u0' so that w'(0) = 0.
    const double k2 = -w[1] / d[0];
    for (int n = 1; n <= M; ++n) w[n] += k2 * d[n - 1];
    w[1] = 0.0;
    return w;
}

std::vector<double> w11_grid(const LimitCycle& cycle, const FloquetPhase& phys,
                             const WronskianSettings& st) {
    const int K = cycle.u.size();
    const double T0 = cycle.T0;
    const double h = T0 / K;
    const double rc = st.r_c;
    const double half = 0.5 * T0;
    if (!(rc > 0.0) || 2.0 * rc >= half - h)
        throw SingularitySpacing("w11_grid: r_c = " + std::to_string(rc) +
                                 " leaves no room between the singular sets (need 2 r_c < T0/2 - h)");
    if (std::abs(phys.rho_omega - 1.0) > 0.0)
        throw InvalidParams("w11_grid: expects the physical-time phase (rho_omega = 1)");

    const ps::Series wser = w11_series(cycle.params, cycle.U0, st.series_degree);
    const double c1 = -cycle.r1;
    const double H = phys.mean_h;
    const PeriodicSamples& vs = cycle.v;
    auto ud = [&](double t) { return vs(t); };
    auto integrand = [&](double t) {
        const double d = ud(t);
        return c1 * std::exp(-(H * t + phys.F_tilde(t))) / (d * d);
    };
    auto centre = [&](int j) { return j * half; };
    auto weight = [&](int j) { return (j % 2 == 0 ? 1.0 : -1.0) * std::exp(-j * H * half); };
    auto series_value = [&](int j, double k2, double t) {
        return k2 * ud(t) + weight(j) * ps::eval(wser, t - centre(j));
    };

    std::vector<double> out(static_cast<std::size_t>(2 * K + 1));
    out[0] = 1.0;
    bool in_series = true;
    int jcur = 0;
    double k2 = 0.0;
    double G = 0.0;  // w / u0' while integrating
    double x = 0.0;
    const int jmax = 4;
    for (int i = 1; i <= 2 * K; ++i) {
        const double t = i * h;
        for (;;) {
            if (in_series) {
                const double e = centre(jcur) + rc;
                if (t <= e) {  // case A
                    out[i] = series_value(jcur, k2, t);
                    break;
                }
                // leaving s_j (cases B, D)
                G = series_value(jcur, k2, e) / ud(e);
                x = e;
                in_series = false;
                continue;
            }
            const int jn = jcur + 1;
            const double n = jn <= jmax ? centre(jn) - rc : std::numeric_limits<double>::infinity();
            if (t < n) {  // case E, or the tail of B
                G += romberg(integrand, x, t, st.romberg);
                x = t;
                out[i] = G * ud(t);
                break;
            }
            // entering s_{j+1} (cases C, D): continuity fixes k2
            G += romberg(integrand, x, n, st.romberg);
            const double wn = G * ud(n);
            k2 = (wn - weight(jn) * ps::eval(wser, -rc)) / ud(n);
            jcur = jn;
            in_series = true;
        }
    }
    return out;
}

double ab_residual(const std::vector<double>& w, const PeriodicSamples& v0, double f0,
                   const PeriodicSamples& b, double b_end, double gamma) {
    const int K = v0.size();
    const double T = v0.period();
    double acc = 0.0;
    for (int i = 0; i <= K; ++i) {
        const double t = T * i / K;
        const double bi = i < K ? b[i] : b_end;
        const double r = w[i] - std::exp(-f0 * t) * bi - gamma * v0[i % K];
        acc += r * r;
    }
    return std::sqrt(acc / (K + 1));
}

PeriodicParts extract_ab(const std::vector<double>& w, const PeriodicSamples& v0, double f0) {
    const int K = v0.size();
    if (static_cast<int>(w.size()) != 2 * K + 1)
        throw InvalidParams("extract_ab: w11 must hold 2K+1 values over two periods");
    const double T = v0.period();
    const double den = -std::expm1(-f0 * T);
    std::vector<double> b(static_cast<std::size_t>(K + 1));
    for (int i = 0; i <= K; ++i) b[i] = std::exp(f0 * T * i / K) * (w[i] - w[i + K]) / den;
    double num = 0.0, nrm = 0.0;
    for (int i = 0; i <= K; ++i) {
        const double vi = v0[i % K];
        num += vi * (w[i] - std::exp(-f0 * T * i / K) * b[i]);
        nrm += vi * vi;
    }
    PeriodicParts r;
    r.gamma = num / nrm;
    r.b_period_end = b[K];
    b.pop_back();
    std::vector<double> a(v0.values());
    for (double& x : a) x *= r.gamma;
    r.a = PeriodicSamples(T, std::move(a));
    r.b = PeriodicSamples(T, std::move(b));
    r.residual_rms = ab_residual(w, v0, f0, r.b, r.b_period_end, r.gamma);
    return r;
}

VariationalBase build_variational(const LimitCycle& cycle, const WronskianSettings& st) {
    VariationalBase base;
    base.phase = compute_F(cycle, 1.0);
    base.series = w11_series(cycle.params, cycle.U0, st.series_degree);
    base.w11 = w11_grid(cycle, base.phase, st);
    base.parts = extract_ab(base.w11, cycle.v, base.phase.mean_h);
    return base;
}

AValues compute_A(const WronskianData& w, const LimitCycle& cycle) {
    const int K = w.size();
    const double lam = w.rho_omega;
    const SystemParams& p = cycle.params;
    std::vector<double> x(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        const double u = cycle.u[j];
        const double v = cycle.v[j] / lam;
        x[j] = std::exp(w.F_tilde[j]) * w.b[j] * (v * p.h(u) + 2.0 / lam * p.k(u));
    }
    const PeriodicSamples xs(w.period(), std::move(x));
    AValues r;
    r.quadrature = integrate_periodic(xs, xs.period()) / xs.period();
    r.romberg = romberg_split([&](double t) { return xs(t); }, 0.0, xs.period()) / xs.period();
    r.closed_form = lam * w.c1;
    return r;
}

WronskianData rescale(const VariationalBase& base, const LimitCycle& cycle, double rho) {
    if (!(rho > 0.0)) throw InvalidParams("rescale: rho must be positive");
    const double lam = rho * cycle.Omega0;
    const double l2 = lam * lam;
    WronskianData w;
    w.rho_omega = lam;
    w.mean_h = base.phase.mean_h;
    w.f0 = base.phase.mean_h / lam;
    const double P = cycle.T0 * lam;
    w.F_tilde = PeriodicSamples(P, base.phase.F_tilde.values());
    w.w11 = base.w11;
    for (double& x : w.w11) x *= l2;
    std::vector<double> a(base.parts.a.values()), b(base.parts.b.values());
    for (double& x : a) x *= l2;
    for (double& x : b) x *= l2;
    w.a = PeriodicSamples(P, std::move(a));
    w.b = PeriodicSamples(P, std::move(b));
    w.b_period_end = base.parts.b_period_end * l2;
    w.gamma = base.parts.gamma * l2 * lam;
    w.residual_rms = base.parts.residual_rms * l2;
    w.r1 = cycle.r1;
    w.c1 = -cycle.r1;
    w.c2 = 1.0 / cycle.r1;
    const AValues A = compute_A(w, cycle);
    w.A_quadrature = A.quadrature;
    w.A_romberg = A.romberg;
    w.A_closed = A.closed_form;
    w.A = A.quadrature;
    const double rel = std::abs(A.quadrature - A.closed_form) / std::abs(A.closed_form);
    if (!(rel <= 1e-9))
        throw CrossCheckFailure("compute_A: quadrature and closed form of A differ by " +
                                std::to_string(rel) + " (relative)");
    return w;
}

WronskianData build_wronskian(const LimitCycle& cycle, double rho, const WronskianSettings& st) {
    return rescale(build_variational(cycle, st), cycle, rho);
}

}  // namespace ilfd
