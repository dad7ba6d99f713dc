#include "ilfd/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ilfd/errors.hpp"

namespace ilfd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

void check_rho(const WronskianData& w, const LimitCycle& cycle, Resonance res) {
    const double lam = res.rho() * cycle.Omega0;
    if (std::abs(w.rho_omega - lam) > 1e-12 * lam)
        throw InvalidParams("Wronskian data was built for a different rho than " + res.str());
}

// Harmonics nu with |fhat_nu| above the round-off floor.
int effective_harmonic(const Forcing& f) {
    double mx = 0.0;
    for (auto& [nu, c] : f.coefficients()) mx = std::max(mx, std::abs(c));
    int top = 1;
    for (auto& [nu, c] : f.coefficients())
        if (std::abs(c) > 1e-17 * mx) top = std::max(top, nu);
    return top;
}

struct Kbar {
    double k1, k2;
};

// Kbar_{1n}, Kbar_{2n} with the factor n Omega0 = nu rho Omega0.
Kbar kbar(const KernelFunctions& k, int n, double nOmega) {
    const auto a = k.coefficient(1, n);
    const auto b = k.coefficient(2, n);
    return {-(a.imag() + b.imag()) + nOmega * b.real(), (a.real() + b.real()) + nOmega * b.imag()};
}

template <class G>
void extremize(G&& g, int points, double tol, double& fmax, double& tmax, double& fmin,
               double& tmin) {
    std::vector<double> vals(static_cast<std::size_t>(points));
    const double d = kTwoPi / points;
    for (int i = 0; i < points; ++i) vals[i] = g(i * d);
    const int imax = static_cast<int>(std::max_element(vals.begin(), vals.end()) - vals.begin());
    const int imin = static_cast<int>(std::min_element(vals.begin(), vals.end()) - vals.begin());
    tmax = golden_max(g, (imax - 1) * d, (imax + 1) * d, tol);
    fmax = std::max(g(tmax), vals[imax]);
    tmin = golden_max([&](double t) { return -g(t); }, (imin - 1) * d, (imin + 1) * d, tol);
    fmin = std::min(g(tmin), vals[imin]);
    tmax = std::fmod(tmax + kTwoPi, kTwoPi);
    tmin = std::fmod(tmin + kTwoPi, kTwoPi);
}

}  // namespace

Resonance::Resonance(int p_, int q_) : p(p_), q(q_) {
    if (p < 1 || q < 1) throw InvalidParams("resonance p:q needs p, q >= 1");
    if (std::gcd(p, q) != 1) throw InvalidParams("resonance " + str() + " is not in lowest terms");
}

std::string Resonance::str() const { return std::to_string(p) + ":" + std::to_string(q); }

Resonance Resonance::parse(const std::string& s) {
    const auto sep = s.find_first_of(":/");
    try {
        std::size_t pos = 0;
        if (sep == std::string::npos) {
            const int p = std::stoi(s, &pos);
            if (pos != s.size()) throw std::invalid_argument(s);
            return Resonance(p, 1);
        }
        const std::string a = s.substr(0, sep), b = s.substr(sep + 1);
        const int p = std::stoi(a, &pos);
        if (pos != a.size()) throw std::invalid_argument(s);
        const int q = std::stoi(b, &pos);
        if (pos != b.size()) throw std::invalid_argument(s);
        return Resonance(p, q);
    } catch (const InvalidParams& e) {
        throw ParseError(e.what());
    } catch (const std::exception&) {
        throw ParseError("cannot parse resonance '" + s + "' (expected p:q)");
    }
}

std::complex<double> KernelFunctions::coefficient(int i, int n) const {
    const int M = max_harmonic();
    if (std::abs(n) > M) return 0.0;
    return (i == 1 ? K1hat : K2hat)[static_cast<std::size_t>(n + M)];
}

KernelFunctions kernel_functions(const LimitCycle& cycle, const WronskianData& w, Resonance res) {
    check_rho(w, cycle, res);
    const int K = w.size();
    std::vector<double> k1(static_cast<std::size_t>(K)), k2(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        const double u = cycle.u[j];
        const double eb = std::exp(w.F_tilde[j]) * w.b[j];
        k1[j] = eb * cycle.v[j] * (3.0 * u * u - 1.0);  // rho Omega0 v0 = physical velocity
        k2[j] = eb * u * (u * u - 1.0);
    }
    KernelFunctions k;
    k.res = res;
    k.rho_omega = w.rho_omega;
    k.K1 = PeriodicSamples(w.period(), std::move(k1));
    k.K2 = PeriodicSamples(w.period(), std::move(k2));
    k.K1hat = fourier_coefficients(k.K1);
    k.K2hat = fourier_coefficients(k.K2);
    return k;
}

std::vector<SelectionPair> selection_rule(Resonance res, const Forcing& f, int max_nu) {
    if (max_nu <= 0) max_nu = f.max_harmonic();
    std::vector<SelectionPair> out;
    for (auto& [nu, c] : f.coefficients()) {
        if (nu > max_nu || c == 0.0) continue;
        const long num = static_cast<long>(nu) * res.p;
        if (num % (2L * res.q) != 0) continue;
        const int np = static_cast<int>(num / (2L * res.q));
        out.push_back({nu, -np});
        out.push_back({nu, np});
    }
    return out;
}

std::vector<SelectionTriple> second_order_selection(Resonance res, const Forcing& f, int max_nu) {
    if (max_nu <= 0) max_nu = f.max_harmonic();
    std::vector<int> support;
    for (auto& [nu, c] : f.coefficients())
        if (nu <= max_nu && c != 0.0) {
            support.push_back(-nu);
            support.push_back(nu);
        }
    std::sort(support.begin(), support.end());
    std::vector<SelectionTriple> out;
    for (int a : support)
        for (int b : support) {
            const long s = std::abs(static_cast<long>(a) + b) * res.p;
            if (s % (2L * res.q) != 0) continue;
            const int np = static_cast<int>(s / (2L * res.q));
            out.push_back({a, b, np});
            if (np != 0) out.push_back({a, b, -np});
        }
    return out;
}

bool opens_second_order_width(const std::vector<SelectionTriple>& t) {
    return std::any_of(t.begin(), t.end(), [](const SelectionTriple& x) { return x.nu_prime != 0; });
}

double FirstOrderData::eval(double t) const {
    double acc = 0.0;
    for (const auto& x : terms)
        if (x.selected) acc += x.fhat * (x.D1 * std::cos(x.nu * t) + x.D2 * std::sin(x.nu * t));
    return acc / A;
}

double FirstOrderData::eval_all(double t) const {
    double acc = 0.0;
    for (const auto& x : terms) acc += x.fhat * (x.D1 * std::cos(x.nu * t) + x.D2 * std::sin(x.nu * t));
    return acc / A;
}

std::pair<double, double> FirstOrderData::nonlinear_interval(double mu) const {
    const double l = rho_omega;
    return {l / (1.0 + l * mu * eps_max), l / (1.0 + l * mu * eps_min)};
}

FirstOrderData first_order_unchecked(const LimitCycle& cycle, const WronskianData& w,
                                     const KernelFunctions& k, const Forcing& f,
                                     const FirstOrderSettings& st) {
    const Resonance res = k.res;
    check_rho(w, cycle, res);
    const double lam = w.rho_omega;
    const double l2 = lam * lam;
    const double L = kTwoPi * res.p;
    FirstOrderData d;
    d.res = res;
    d.rho_omega = lam;
    d.A = w.A;

    const int top = effective_harmonic(f);
    double scale = 0.0;
    for (double x : k.K1.values()) scale = std::max(scale, std::abs(x));
    for (double x : k.K2.values()) scale = std::max(scale, std::abs(x));
    RombergOptions ro = st.romberg;
    ro.abs_tol = std::max(ro.abs_tol, 1e-15 * scale * L);

    for (auto& [nu, c] : f.coefficients()) {
        if (nu > top) continue;
        const long num = static_cast<long>(nu) * res.p;
        if (num % res.q != 0) continue;  // nu rho not an integer: no resonant term
        const int n = static_cast<int>(num / res.q);
        FirstOrderTerm t;
        t.nu = nu;
        t.fhat = c;
        t.selected = (n % 2 == 0);
        for (int i = 1; i <= 2; ++i) {
            const auto kh = k.coefficient(i, n);
            t.B_fourier[i - 1][0] = -kh.imag() / l2;
            t.B_fourier[i - 1][1] = kh.real() / l2;
        }
        if (st.quadrature_path) {
            for (int i = 1; i <= 2; ++i) {
                const PeriodicSamples& Ki = i == 1 ? k.K1 : k.K2;
                const double s1 = romberg_split([&](double x) { return Ki(x) * std::sin(nu * x); }, 0.0, L, ro);
                const double s2 = romberg_split([&](double x) { return Ki(x) * std::cos(nu * x); }, 0.0, L, ro);
                t.B[i - 1][0] = s1 / (L * l2);
                t.B[i - 1][1] = s2 / (L * l2);
            }
        } else {
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) t.B[i][j] = t.B_fourier[i][j];
        }
        for (auto* B : {&t.B, &t.B_fourier}) {
            (*B)[2][0] = nu * lam * (*B)[1][1];
            (*B)[2][1] = -nu * lam * (*B)[1][0];
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j)
                d.cross_check = std::max(d.cross_check, std::abs(t.B[i][j] - t.B_fourier[i][j]));
        t.D1 = -(t.B[0][0] + t.B[1][0] + t.B[2][0]);
        t.D2 = -(t.B[0][1] + t.B[1][1] + t.B[2][1]);
        const Kbar kb = kbar(k, n, nu * lam);
        t.Kbar1 = kb.k1;
        t.Kbar2 = kb.k2;
        d.terms.push_back(t);
    }
    if (st.quadrature_path && d.cross_check > st.cross_check_tol)
        throw CrossCheckFailure("first_order: quadrature and Fourier values of B differ by " +
                                std::to_string(d.cross_check));

    const bool any = std::any_of(d.terms.begin(), d.terms.end(),
                                 [](const FirstOrderTerm& t) { return t.selected; });
    if (any) {
        extremize([&](double t) { return d.eval(t); }, st.tau0_points, st.golden_tol, d.eps_max,
                  d.tau_max, d.eps_min, d.tau_min);
    }
    d.width = l2 * (d.eps_max - d.eps_min);
    d.theta1 = std::atan(-l2 * d.eps_min);
    d.theta2 = std::atan(l2 * d.eps_max);
    d.Q = d.eps_max - d.eps_min;
    const int step = res.p % 2 == 0 ? res.q : 2 * res.q;
    d.nu0 = step;
    d.nu1 = 2 * step;
    const int n0 = d.nu0 * res.p / res.q;
    const Kbar kb0 = kbar(k, n0, d.nu0 * lam);
    d.Kbar_nu0 = std::hypot(kb0.k1, kb0.k2);
    d.Q0 = 2.0 / (std::abs(d.A) * l2) * std::abs(f.coefficient(d.nu0)) * d.Kbar_nu0;
    return d;
}

FirstOrderData first_order(const LimitCycle& cycle, const WronskianData& w,
                           const KernelFunctions& k, const Forcing& f,
                           const FirstOrderSettings& st) {
    FirstOrderData d = first_order_unchecked(cycle, w, k, f, st);
    if (!(d.eps_max - d.eps_min >= 1e-13))
        throw DegenerateExtremum("first_order: D1 is flat for " + k.res.str() +
                                 "; the width starts at higher order");
    return d;
}

WidthBound width_bound(Resonance res, const Forcing& f, const KernelFunctions& k,
                       const LimitCycle& cycle) {
    const double l2 = k.rho_omega * k.rho_omega;
    std::vector<double> xs, ys;
    for (int n = 2; n <= 20; n += 2) {
        const double g = std::max(std::abs(k.coefficient(1, n)), std::abs(k.coefficient(2, n))) / l2;
        if (g <= 0.0) continue;
        xs.push_back(n);
        ys.push_back(std::log(g));
    }
    if (xs.size() < 2) throw InvalidParams("width_bound: kernel grid too coarse for the rate fit");
    const double nx = static_cast<double>(xs.size());
    const double sx = std::accumulate(xs.begin(), xs.end(), 0.0);
    const double sy = std::accumulate(ys.begin(), ys.end(), 0.0);
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    WidthBound b;
    b.xi1 = -(nx * sxy - sx * sy) / (nx * sxx - sx * sx);
    for (std::size_t i = 0; i < xs.size(); ++i) b.Gamma = std::max(b.Gamma, std::exp(ys[i] + b.xi1 * xs[i]));
    const double Om = cycle.Omega0;
    const double Phi = f.decay_amplitude(), xi = f.decay_rate();
    const double x = std::exp(-(xi + b.xi1));
    b.C = 4.0 * Phi * b.Gamma * Om * (2.0 + Om) / (std::abs(cycle.r1) * (1.0 - x) * (1.0 - x));
    const double p = res.p, q = res.q;
    b.value = b.C * p * p / q * std::exp(-b.xi1 * p) * std::exp(-xi * q);
    return b;
}

ScalingConstant scaling_constant_theory(const LimitCycle& cycle, const VariationalBase& base,
                                        const Forcing& poisson, int p) {
    if (poisson.kind() != Forcing::Kind::PoissonKernel)
        throw InvalidParams("scaling constants need Poisson-kernel forcing");
    const Resonance res(p, 1);
    const WronskianData w = rescale(base, cycle, res.rho());
    const KernelFunctions k = kernel_functions(cycle, w, res);
    const int n = p % 2 == 0 ? p : 2 * p;
    const Kbar kb = kbar(k, n, n * cycle.Omega0);
    const double l2 = w.rho_omega * w.rho_omega;
    const double K = std::hypot(kb.k1, kb.k2) / l2;
    ScalingConstant s;
    s.p = p;
    s.c = 2.0 * p * cycle.Omega0 * poisson.decay_amplitude() * K / std::abs(cycle.r1);
    s.denominator_base = p % 2 == 0 ? 2 : 4;
    return s;
}

double scaling_law(int p, int q, double c) {
    const double base = p % 2 == 0 ? 2.0 : 4.0;
    return c / (q * std::pow(base, q));
}

ScalingConstant scaling_constant_fit(int p, const std::vector<std::pair<int, double>>& slopes) {
    if (slopes.empty()) throw TooFewPoints("scaling_constant_fit: no data");
    // Relative least squares: minimize sum (s_q / g_q - c)^2 / weight, i.e. a log-mean.
    double acc = 0.0;
    for (auto& [q, s] : slopes) {
        if (!(s > 0.0)) throw InvalidParams("scaling_constant_fit: widths must be positive");
        acc += std::log(s / scaling_law(p, q, 1.0));
    }
    ScalingConstant r;
    r.p = p;
    r.c = std::exp(acc / static_cast<double>(slopes.size()));
    r.denominator_base = p % 2 == 0 ? 2 : 4;
    return r;
}

OrbitGrid orbit_grid(const LimitCycle& cycle, const WronskianData& w, Resonance res,
                     const Forcing& f, int min_points) {
    check_rho(w, cycle, res);
    const int K = w.size();
    const int top = effective_harmonic(f);
    int N = K * res.q;
    if (N % 2 == 0) ++N;
    if (4 * top * res.p > N) N = K * res.q + 2 * top * res.p + 1;
    N = std::max(N, min_points);
    if (N % 2 == 0) ++N;
    OrbitGrid g;
    g.params = cycle.params;
    g.lam = w.rho_omega;
    g.L = kTwoPi * res.p;
    const SystemParams& P = cycle.params;
    std::vector<double> u(N), v(N), a2(N), Ft(N), b(N);
    const bool aligned = (N == K * res.q);
    for (int n = 0; n < N; ++n) {
        const double tau = g.L * n / N;
        if (aligned) {
            const int j = n % K;
            u[n] = cycle.u[j];
            v[n] = cycle.v[j];
            Ft[n] = w.F_tilde[j];
            b[n] = w.b[j];
        } else {
            const double t = tau / g.lam;
            u[n] = cycle.u(t);
            v[n] = cycle.v(t);
            Ft[n] = w.F_tilde(tau);
            b[n] = w.b(tau);
        }
        a2[n] = -(v[n] * P.h(u[n]) + P.k(u[n])) / (g.lam * g.lam);
        v[n] /= g.lam;
    }
    g.u = PeriodicSamples(g.L, std::move(u));
    g.v = PeriodicSamples(g.L, std::move(v));
    g.a2 = PeriodicSamples(g.L, std::move(a2));
    g.Ft = PeriodicSamples(g.L, std::move(Ft));
    g.b = PeriodicSamples(g.L, std::move(b));
    return g;
}

namespace {

// -H_1 along the unperturbed orbit.
std::vector<double> psi1(const OrbitGrid& g, const SystemParams& P, const Forcing& f, double tau0,
                         double eps1) {
    const int N = g.size();
    const double s = 1.0 / g.lam;
    std::vector<double> out(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const double tau = g.L * n / N + tau0;
        const double u = g.u[n], v = g.v[n];
        const double fv = f.eval(tau), dfv = f.eval_derivative(tau);
        out[n] = -(eps1 * (v * P.h(u) + 2.0 * s * P.k(u)) + s * v * (3.0 * u * u - 1.0) * fv +
                   u * (u * u - 1.0) * (s * s * fv + s * dfv));
    }
    return out;
}

}  // namespace

U1Solution u1_solution(const OrbitGrid& g, const WronskianData& w, const Forcing& f, double tau0,
                       double eps1) {
    const int N = g.size();
    const double f0 = w.f0, L = g.L;
    const std::vector<double> psi = psi1(g, g.params, f, tau0, eps1);
    std::vector<double> x2(static_cast<std::size_t>(N)), x1(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const double e = std::exp(g.Ft[n]);
        x2[n] = e * g.b[n] * psi[n];
        x1[n] = e * g.v[n] * psi[n];
    }
    U1Solution s;
    s.tau0 = tau0;
    s.eps1 = eps1;
    s.compat_mean = std::accumulate(x2.begin(), x2.end(), 0.0) / N;
    if (std::abs(s.compat_mean) > 1e-9)
        throw CompatibilityViolated("u1_solution: <e^F b Psi1> = " + std::to_string(s.compat_mean) +
                                    " at tau0 = " + std::to_string(tau0));
    for (double& x : x2) x -= s.compat_mean;
    const auto Q2 = integrate_periodic_nodes(PeriodicSamples(L, x2));
    const auto Y = integrate_exp_weighted_nodes(PeriodicSamples(L, x1), -f0);
    s.Q1_0 = Y[static_cast<std::size_t>(N)] / std::expm1(f0 * L);
    const double Wr0 = -g.a2[0] * w.w11[0];
    std::vector<double> P(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        const double tau = L * n / N;
        const double q1 = std::exp(-f0 * tau) * (Y[n] + s.Q1_0);
        P[n] = (g.b[n] * q1 - g.v[n] * Q2[n]) / Wr0;
    }
    PeriodicSamples Ps(L, std::move(P));
    const PeriodicSamples dP = differentiate(Ps);
    const double C = -dP[0] / g.a2[0];
    std::vector<double> u1(static_cast<std::size_t>(N)), v1(static_cast<std::size_t>(N));
    for (int n = 0; n < N; ++n) {
        u1[n] = Ps[n] + C * g.v[n];
        v1[n] = dP[n] + C * g.a2[n];
    }
    s.u1 = PeriodicSamples(L, std::move(u1));
    s.v1 = PeriodicSamples(L, std::move(v1));
    return s;
}

double u1_residual(const OrbitGrid& g, const Forcing& f, const U1Solution& s) {
    const SystemParams& P = g.params;
    const std::vector<double> psi = psi1(g, P, f, s.tau0, s.eps1);
    const PeriodicSamples a1 = differentiate(s.v1);
    const double lam = g.lam;
    double r = 0.0;
    for (int n = 0; n < g.size(); ++n) {
        const double u = g.u[n], v = g.v[n];
        const double lhs = a1[n] + s.v1[n] * P.h(u) / lam +
                           s.u1[n] * (P.dh(u) * v / lam + P.dk(u) / (lam * lam));
        r = std::max(r, std::abs(lhs - psi[n]));
    }
    return r;
}

double second_order_value(const OrbitGrid& g, const WronskianData& w, const Forcing& f,
                          double tau0, double eps1, double* xi_tilde, double* xi_bar,
                          U1Solution* keep) {
    const SystemParams& P = g.params;
    U1Solution s = u1_solution(g, w, f, tau0, eps1);
    const int N = g.size();
    const double sc = 1.0 / g.lam, e1 = eps1;
    double acc_t = 0.0, acc_b = 0.0;
    for (int n = 0; n < N; ++n) {
        const double tau = g.L * n / N + tau0;
        const double u0 = g.u[n], v0 = g.v[n], u1 = s.u1[n], v1 = s.v1[n];
        const double fv = f.eval(tau), dfv = f.eval_derivative(tau);
        const double h = P.h(u0), dh = P.dh(u0), d2h = P.d2h(u0);
        const double k = P.k(u0), dk = P.dk(u0), d2k = P.d2k(u0);
        const double c3 = 3.0 * u0 * u0 - 1.0, c2 = u0 * (u0 * u0 - 1.0);
        // Second-order terms of the expanded equation: those without u1, then the rest.
        const double r_tilde = e1 * e1 * k + e1 * v0 * c3 * fv + 2.0 * sc * e1 * c2 * fv + e1 * c2 * dfv;
        const double r_bar = sc * (v1 * dh * u1 + v0 * d2h * u1 * u1 / 2.0) +
                             e1 * (v1 * h + v0 * dh * u1) + sc * sc * d2k * u1 * u1 / 2.0 +
                             2.0 * sc * e1 * dk * u1 + sc * (v1 * c3 + 6.0 * u0 * v0 * u1) * fv +
                             sc * sc * c3 * u1 * fv + sc * c3 * u1 * dfv;
        const double eb = std::exp(g.Ft[n]) * g.b[n];
        acc_t -= eb * r_tilde;
        acc_b -= eb * r_bar;
    }
    acc_t /= N;
    acc_b /= N;
    if (xi_tilde) *xi_tilde = acc_t;
    if (xi_bar) *xi_bar = acc_b;
    if (keep) *keep = std::move(s);
    return (acc_t + acc_b) / w.A;
}

SecondOrderData second_order(const LimitCycle& cycle, const WronskianData& w, const Forcing& f,
                             Resonance res, const FirstOrderData* first,
                             const SecondOrderSettings& st) {
    const OrbitGrid g = orbit_grid(cycle, w, res, f);
    SecondOrderData d;
    d.res = res;
    d.rho_omega = w.rho_omega;
    auto eps = [&](double t) { return first ? first->eval(t) : 0.0; };
    auto val = [&](double t) { return second_order_value(g, w, f, t, eps(t)); };
    const int M = st.tau0_points;
    for (int i = 0; i < M; ++i) {
        const double t = kTwoPi * i / M;
        double xt = 0, xb = 0;
        U1Solution keep;
        d.tau0.push_back(t);
        d.D2.push_back(second_order_value(g, w, f, t, eps(t), &xt, &xb, st.keep_u1 ? &keep : nullptr));
        d.xi_tilde.push_back(xt);
        d.xi_bar.push_back(xb);
        if (st.keep_u1) d.u1.push_back(std::move(keep));
    }
    const int Mo = M % 2 == 1 ? M : M - 1;  // odd sample count for the coefficient table
    const int H = (Mo - 1) / 2;
    for (int nu = -H; nu <= H; ++nu) {
        std::complex<double> c = 0.0;
        for (int i = 0; i < M; ++i) c += d.D2[i] * std::polar(1.0, -nu * d.tau0[i]);
        d.D2_coeffs.push_back(c / static_cast<double>(M));
    }
    d.mean = std::accumulate(d.D2.begin(), d.D2.end(), 0.0) / M;
    const int imax = static_cast<int>(std::max_element(d.D2.begin(), d.D2.end()) - d.D2.begin());
    const int imin = static_cast<int>(std::min_element(d.D2.begin(), d.D2.end()) - d.D2.begin());
    const double h = kTwoPi / M;
    d.tau_max = golden_max(val, (imax - 1) * h, (imax + 1) * h, st.golden_tol);
    d.D2_max = std::max(val(d.tau_max), d.D2[imax]);
    d.tau_min = golden_max([&](double t) { return -val(t); }, (imin - 1) * h, (imin + 1) * h, st.golden_tol);
    d.D2_min = std::min(val(d.tau_min), d.D2[imin]);
    d.tau_max = std::fmod(d.tau_max + kTwoPi, kTwoPi);
    d.tau_min = std::fmod(d.tau_min + kTwoPi, kTwoPi);
    d.width = w.rho_omega * w.rho_omega * (d.D2_max - d.D2_min);
    return d;
}

}  // namespace ilfd
