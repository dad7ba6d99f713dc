#pragma once

#include <complex>
#include <string>
#include <vector>

#include "ilfd/forcing.hpp"
#include "ilfd/lienard.hpp"
#include "ilfd/periodic_interp.hpp"
#include "ilfd/wronskian.hpp"

namespace ilfd {

struct Resonance {
    int p = 1;
    int q = 1;

    Resonance() = default;
    Resonance(int p_, int q_);  // throws InvalidParams unless p, q >= 1 and coprime
    double rho() const { return static_cast<double>(p) / q; }
    std::string str() const;
    static Resonance parse(const std::string& s);  // "p:q", "p/q" or "p"
};

// K1 = e^Ft b rho Omega0 v0 (3u0^2 - 1), K2 = e^Ft b u0 (u0^2 - 1) over one
// period 2 pi rho, with their Fourier coefficients (harmonic n of Omega0).
struct KernelFunctions {
    Resonance res;
    double rho_omega = 1.0;
    PeriodicSamples K1, K2;
    std::vector<std::complex<double>> K1hat, K2hat;  // index n + (K-1)/2

    int max_harmonic() const { return (K1.size() - 1) / 2; }
    std::complex<double> coefficient(int i, int n) const;  // zero beyond the grid
};

KernelFunctions kernel_functions(const LimitCycle& cycle, const WronskianData& w, Resonance res);

struct SelectionPair {
    int nu = 0;
    int nu_prime = 0;
};

// Pairs (nu, nu') with 2|nu'| q = |nu| p and fhat_nu != 0, nu = 1..max_nu
// (defaults to the forcing's highest harmonic).
std::vector<SelectionPair> selection_rule(Resonance res, const Forcing& f, int max_nu = 0);

struct SelectionTriple {
    int nu1 = 0;
    int nu2 = 0;
    int nu_prime = 0;
};

// Triples with 2|nu'| q = |nu1 + nu2| p and fhat_nu1 fhat_nu2 != 0 (signed nu).
std::vector<SelectionTriple> second_order_selection(Resonance res, const Forcing& f, int max_nu = 0);

// True when some admissible triple has nu' != 0, i.e. D2 depends on tau0.
bool opens_second_order_width(const std::vector<SelectionTriple>& t);

struct FirstOrderTerm {
    int nu = 0;
    double fhat = 0.0;
    double B[3][2] = {};          // by quadrature
    double B_fourier[3][2] = {};  // from the kernel coefficients
    double D1 = 0.0, D2 = 0.0;
    double Kbar1 = 0.0, Kbar2 = 0.0;  // at n = nu rho
    bool selected = false;            // nu rho even: enters D1(tau0)
};

struct FirstOrderData {
    Resonance res;
    double rho_omega = 1.0;
    double A = 0.0;
    std::vector<FirstOrderTerm> terms;  // every nu with nu rho an integer
    double eps_max = 0.0, eps_min = 0.0;
    double tau_max = 0.0, tau_min = 0.0;
    double width = 0.0;                 // Delta_1 omega
    double theta1 = 0.0, theta2 = 0.0;  // radians
    int nu0 = 0, nu1 = 0;
    double Q = 0.0, Q0 = 0.0;
    double Kbar_nu0 = 0.0;  // Kbar_{nu0 rho}(rho)
    double cross_check = 0.0;  // max |B - B_fourier|

    double eval(double tau0) const;  // D1(tau0), selected terms only
    double eval_all(double tau0) const;  // including nu rho odd
    // Endpoints of the locking interval from the undeveloped map.
    std::pair<double, double> nonlinear_interval(double mu) const;
};

struct FirstOrderSettings {
    int tau0_points = 64;
    double golden_tol = 1e-8;
    double cross_check_tol = 1e-9;
    bool quadrature_path = true;
    RombergOptions romberg{};
};

// Throws DegenerateExtremum when D1 is flat (max - min < 1e-13).
FirstOrderData first_order(const LimitCycle& cycle, const WronskianData& w,
                           const KernelFunctions& k, const Forcing& f,
                           const FirstOrderSettings& settings = {});

// Same data without the degeneracy check; width is zero when D1 vanishes.
FirstOrderData first_order_unchecked(const LimitCycle& cycle, const WronskianData& w,
                                     const KernelFunctions& k, const Forcing& f,
                                     const FirstOrderSettings& settings = {});

struct WidthBound {
    double xi1 = 0.0;    // kernel decay rate per harmonic
    double Gamma = 0.0;  // kernel envelope (rho-free normalization)
    double C = 0.0;
    double value = 0.0;  // bound on |Delta omega| / mu
};

WidthBound width_bound(Resonance res, const Forcing& f, const KernelFunctions& k,
                       const LimitCycle& cycle);

struct ScalingConstant {
    int p = 0;
    double c = 0.0;
    int denominator_base = 0;  // 4 for p odd (2^{2q}), 2 for p even (2^q)
};

// c(p) from the leading first-order term with Poisson forcing: the width of
// p:q is c(p) mu / (q 2^{2q}) for odd p and c(p) mu / (q 2^q) for even p.
ScalingConstant scaling_constant_theory(const LimitCycle& cycle, const VariationalBase& base,
                                        const Forcing& poisson, int p);

// Least-squares fit of measured width slopes (q, Delta omega / mu) to the same law.
ScalingConstant scaling_constant_fit(int p, const std::vector<std::pair<int, double>>& slopes);

double scaling_law(int p, int q, double c);  // c / (q 2^{2q}) or c / (q 2^q)

struct U1Solution {
    double tau0 = 0.0;
    double eps1 = 0.0;
    PeriodicSamples u1, v1;  // over [0, 2 pi p]
    double compat_mean = 0.0;
    double Q1_0 = 0.0;
};

// Sampling grid on [0, 2 pi p] shared by the second-order machinery.
struct OrbitGrid {
    SystemParams params;
    double L = 0.0;  // 2 pi p
    double lam = 0.0;
    PeriodicSamples u, v, a2;  // u0, du0/dtau, d2u0/dtau2 (rescaled time)
    PeriodicSamples Ft, b;
    int size() const { return u.size(); }
};

OrbitGrid orbit_grid(const LimitCycle& cycle, const WronskianData& w, Resonance res,
                     const Forcing& f, int min_points = 0);

// Periodic first-order correction of the orbit, normalized by du1/dtau(0) = 0.
// Throws CompatibilityViolated when <e^Ft b Psi_1> exceeds 1e-9.
U1Solution u1_solution(const OrbitGrid& g, const WronskianData& w, const Forcing& f,
                       double tau0, double eps1);

// Residual of the first-order variational equation for u1, sup norm.
double u1_residual(const OrbitGrid& g, const Forcing& f, const U1Solution& s);

struct SecondOrderSettings {
    int tau0_points = 64;
    double golden_tol = 1e-8;
    bool keep_u1 = false;
};

struct SecondOrderData {
    Resonance res;
    double rho_omega = 1.0;
    std::vector<double> tau0;
    std::vector<double> D2;
    std::vector<double> xi_tilde;  // <e^Ft b Xi~_2> per tau0
    std::vector<double> xi_bar;    // <e^Ft b Xi-_2> per tau0
    std::vector<std::complex<double>> D2_coeffs;  // over tau0, index nu + M
    std::vector<U1Solution> u1;  // filled when keep_u1
    double D2_max = 0.0, D2_min = 0.0, tau_max = 0.0, tau_min = 0.0;
    double mean = 0.0;   // D_{2,0}
    double width = 0.0;  // Delta_2 omega
};

// D2(tau0) on a tau0 grid (refined by golden section near its extrema).
// `first` supplies eps1 = D1(tau0); pass nullptr when the first order vanishes.
SecondOrderData second_order(const LimitCycle& cycle, const WronskianData& w, const Forcing& f,
                             Resonance res, const FirstOrderData* first,
                             const SecondOrderSettings& settings = {});

double second_order_value(const OrbitGrid& g, const WronskianData& w, const Forcing& f,
                          double tau0, double eps1, double* xi_tilde = nullptr,
                          double* xi_bar = nullptr, U1Solution* keep = nullptr);

// Golden-section maximization of g on [a, b] to |b - a| < tol.
template <class G>
double golden_max(G&& g, double a, double b, double tol) {
    const double r = 0.6180339887498949;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = g(x1), f2 = g(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = g(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = g(x1);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace ilfd
