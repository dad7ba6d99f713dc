#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fixtures.hpp"
#include "ilfd/errors.hpp"
#include "ilfd/perturbation.hpp"

using namespace ilfd;
constexpr double pi = std::numbers::pi;

namespace {

struct Setup {
    Resonance res;
    WronskianData w;
    KernelFunctions k;
    FirstOrderData d;
};

Setup setup(int p, int q = 1, const Forcing& f = Forcing::harmonic()) {
    const Resonance r(p, q);
    WronskianData w = fixture::wronskian(r.rho());
    KernelFunctions k = kernel_functions(fixture::cycle(), w, r);
    FirstOrderData d = first_order_unchecked(fixture::cycle(), w, k, f);
    return {r, w, k, d};
}

double omega0() { return fixture::cycle().Omega0; }

}  // namespace

TEST_CASE("resonance parsing") {
    CHECK(Resonance::parse("2:1").p == 2);
    CHECK(Resonance::parse("3/5").q == 5);
    CHECK(Resonance::parse("4").q == 1);
    CHECK(Resonance(3, 5).str() == "3:5");
    CHECK_THROWS_AS(Resonance::parse("2:4"), ParseError);
    CHECK_THROWS_AS(Resonance::parse("x"), ParseError);
    CHECK_THROWS_AS(Resonance(0, 1), InvalidParams);
}

TEST_CASE("kernel coefficients: odd harmonics vanish, even ones decay") {
    for (int p : {1, 2, 3}) {
        const Setup s = setup(p);
        for (int n = 1; n <= 21; n += 2) {
            CHECK(std::abs(s.k.coefficient(1, n)) < 1e-10);
            CHECK(std::abs(s.k.coefficient(2, n)) < 1e-10);
        }
        for (int i = 1; i <= 2; ++i) {
            // Log-magnitude falls on average over 2..20 and stays within a band of a line.
            std::vector<double> x, y;
            for (int n = 2; n <= 20; n += 2) {
                const double m = std::abs(s.k.coefficient(i, n));
                CHECK(m > 0.0);
                x.push_back(n);
                y.push_back(std::log(m));
            }
            const double n = x.size();
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (std::size_t j = 0; j < x.size(); ++j) sx += x[j], sy += y[j], sxx += x[j] * x[j], sxy += x[j] * y[j];
            const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx), icpt = (sy - slope * sx) / n;
            CHECK(slope < -0.1);
            double band = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) band = std::max(band, std::abs(y[j] - slope * x[j] - icpt));
            CHECK(band < 3.0);
        }
    }
}

TEST_CASE("K2 vanishes where u0 is 0 or +-1") {
    const Setup s = setup(2);
    const LimitCycle& c = fixture::cycle();
    // First zero of u0 after the maximum, by bisection on the Taylor pieces.
    double lo = 0.0, hi = 0.5 * c.T0;
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (lo + hi);
        (c.eval_u(m) > 0 ? lo : hi) = m;
    }
    CHECK(std::abs(s.k.K2(lo * s.w.rho_omega)) < 1e-8);
}

TEST_CASE("selection rule") {
    const Forcing h = Forcing::harmonic();
    CHECK(selection_rule(Resonance(3, 1), h).empty());
    CHECK(selection_rule(Resonance(1, 1), h).empty());
    const auto two = selection_rule(Resonance(2, 1), h);
    REQUIRE(two.size() == 2);
    CHECK(two[0].nu == 1);
    CHECK(std::abs(two[0].nu_prime) == 1);
    CHECK(two[0].nu_prime == -two[1].nu_prime);

    const Forcing P = Forcing::poisson(2.0);
    const auto r35 = selection_rule(Resonance(3, 5), P, 12);
    REQUIRE(!r35.empty());
    CHECK(r35.front().nu == 10);
    CHECK(std::abs(r35.front().nu_prime) == 3);
    for (const auto& s : r35) CHECK(2 * std::abs(s.nu_prime) * 5 == s.nu * 3);
    CHECK(selection_rule(Resonance(1, 4), h).empty());
    CHECK(selection_rule(Resonance(3, 5), h).empty());
}

TEST_CASE("second-order selection") {
    const Forcing h = Forcing::harmonic();
    for (int p : {1, 3, 5}) CHECK(opens_second_order_width(second_order_selection(Resonance(p, 1), h)));
    CHECK(!opens_second_order_width(second_order_selection(Resonance(1, 2), h)));
    CHECK(!opens_second_order_width(second_order_selection(Resonance(1, 4), h)));
    CHECK(!opens_second_order_width(second_order_selection(Resonance(3, 5), h)));
    // nu1 + nu2 = 0 only appears with nu' = 0.
    for (const auto& t : second_order_selection(Resonance(1, 2), h)) {
        CHECK(t.nu1 + t.nu2 == 0);
        CHECK(t.nu_prime == 0);
    }
}

TEST_CASE("first-order data at 2:1") {
    const Setup s = setup(2);
    REQUIRE(s.d.terms.size() >= 1);
    const FirstOrderTerm& t = s.d.terms.front();
    CHECK(t.nu == 1);
    CHECK(t.selected);
    CHECK(std::abs(t.D1 - 8.11989e-2) < 1e-6);
    CHECK(std::abs(t.D2 - (-5.20174e-1)) < 1e-6);
    CHECK(std::abs(s.d.eps_max - 0.0327381) < 1e-7);
    const double lam2 = std::pow(2.0 * omega0(), 2);
    CHECK(std::abs(lam2 * s.d.eps_max - 0.37785) < 1e-5);
    CHECK(std::abs(s.d.width - 0.75570) < 1e-5);
    // Single harmonic: the extremum is |D| / A, and the angles agree.
    CHECK(s.d.eps_max == doctest::Approx(std::hypot(t.D1, t.D2) / s.d.A).epsilon(1e-10));
    CHECK(s.d.eps_min == doctest::Approx(-s.d.eps_max).epsilon(1e-10));
    CHECK(s.d.theta1 == doctest::Approx(s.d.theta2).epsilon(1e-10));
    CHECK(std::tan(s.d.theta1) == doctest::Approx(lam2 * s.d.eps_max).epsilon(1e-6));
}

TEST_CASE("first-order data at 4:1 and 1:1") {
    const Setup s = setup(4);
    const FirstOrderTerm& t = s.d.terms.front();
    CHECK(std::abs(t.D1 - (-3.79022e-2)) < 1e-6);
    CHECK(std::abs(t.D2 - 2.74434e-1) < 1e-6);
    CHECK(std::abs(s.d.eps_max - 8.6137e-3) < 1e-7);
    CHECK(std::abs(std::pow(4.0 * omega0(), 2) * s.d.eps_max - 0.39766) < 1e-5);

    const Setup o = setup(1);
    CHECK(std::abs(o.d.terms.front().D1) < 1e-9);
    CHECK(std::abs(o.d.terms.front().D2) < 1e-9);
    CHECK_THROWS_AS(first_order(fixture::cycle(), o.w, o.k, Forcing::harmonic()), DegenerateExtremum);
}

TEST_CASE("first-order invariants") {
    for (int p : {2, 4, 6}) {
        const Setup s = setup(p);
        // Zero mean over tau0 by trapezoid on a periodic grid.
        double m = 0.0;
        const int n = 256;
        for (int j = 0; j < n; ++j) m += s.d.eval(2 * pi * j / n);
        CHECK(std::abs(m / n) < 1e-10);
        for (const auto& t : s.d.terms) {
            const double nl = t.nu * s.res.rho() * omega0();
            CHECK(t.B[2][0] == doctest::Approx(nl * t.B[1][1]).epsilon(1e-10));
            CHECK(t.B[2][1] == doctest::Approx(-nl * t.B[1][0]).epsilon(1e-10));
        }
        CHECK(s.d.cross_check < 1e-9);
        CHECK(s.d.A == doctest::Approx(-fixture::cycle().r1 * p * omega0()).epsilon(1e-10));
    }
}

TEST_CASE("both B paths give the same slopes") {
    const Setup s = setup(2);
    FirstOrderSettings st;
    st.quadrature_path = false;
    const FirstOrderData d2 = first_order(fixture::cycle(), s.w, s.k, Forcing::harmonic(), st);
    CHECK(std::abs(d2.width - s.d.width) < 1e-10);
    const Forcing P = Forcing::poisson(2.0);
    const FirstOrderData a = first_order(fixture::cycle(), s.w, s.k, P);
    const FirstOrderData b = first_order(fixture::cycle(), s.w, s.k, P, st);
    CHECK(a.cross_check < 1e-9);
    CHECK(std::abs(a.width - b.width) < 1e-10);
}

TEST_CASE("selection soundness") {
    const Forcing h = Forcing::harmonic();
    for (auto [p, q] : {std::pair{1, 1}, {3, 1}, {5, 1}, {1, 2}, {3, 2}}) {
        const Resonance r(p, q);
        REQUIRE(selection_rule(r, h).empty());
        const Setup s = setup(p, q);
        CHECK(std::abs(s.d.width) < 1e-11);
    }
}

TEST_CASE("nonlinear locking interval reduces to the linear width") {
    const Setup s = setup(2);
    const double mu = 1e-4;
    const auto [lo, hi] = s.d.nonlinear_interval(mu);
    CHECK(lo < 2 * omega0());
    CHECK(hi > 2 * omega0());
    CHECK((hi - lo) / mu == doctest::Approx(s.d.width).epsilon(1e-3));
}

TEST_CASE("width bound") {
    const Forcing h = Forcing::harmonic();
    const LimitCycle& c = fixture::cycle();
    const Setup s = setup(2);
    const WidthBound b = width_bound(s.res, h, s.k, c);
    CHECK(b.value > s.d.width);
    CHECK(b.xi1 > 0.0);
    const Forcing P = Forcing::poisson(2.0);
    double prev = 1e300;
    for (int q = 1; q <= 9; q += 2) {
        const Resonance r(2, q);
        const double v = width_bound(r, P, kernel_functions(c, fixture::wronskian(r.rho()), r), c).value;
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
    }
    // q -> q + ln 2 / xi at least halves the bound; use an integer step above that.
    const int step = static_cast<int>(std::ceil(std::log(2.0) / P.decay_rate()));
    const Resonance r1(2, 1), r2(2, 1 + 2 * step);
    const double v1 = width_bound(r1, P, kernel_functions(c, fixture::wronskian(r1.rho()), r1), c).value;
    const double v2 = width_bound(r2, P, kernel_functions(c, fixture::wronskian(r2.rho()), r2), c).value;
    CHECK(v2 <= 0.5 * v1);
}

TEST_CASE("scaling law") {
    CHECK(scaling_law(1, 2, 1.0) == doctest::Approx(1.0 / (2 * 16)));
    CHECK(scaling_law(2, 3, 1.0) == doctest::Approx(1.0 / (3 * 8)));
    const ScalingConstant fit = scaling_constant_fit(1, {{1, 0.5 / 4}, {3, 0.5 / (3 * 64)}});
    CHECK(fit.c == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.denominator_base == 4);
    CHECK(scaling_constant_fit(2, {{1, 0.3}}).denominator_base == 2);
}

TEST_CASE("scaling constant theory versus empirical estimates") {
    // Our first-order evaluation of c(p) lands near the fitted slopes.
    const Forcing P = Forcing::poisson(2.0);
    const double emp[] = {0.5867, 1.255, 0.05326};
    for (int p = 1; p <= 3; ++p) {
        const ScalingConstant s = scaling_constant_theory(fixture::cycle(), fixture::base(), P, p);
        CHECK(s.denominator_base == (p % 2 ? 4 : 2));
        CHECK(s.c == doctest::Approx(emp[p - 1]).epsilon(0.2));
    }
}

namespace {

// Oracle: march the u1 equation with RK4 using the cycle's Taylor pieces.
double u1_return_gap(const OrbitGrid& g, const Forcing& f, const U1Solution& s) {
    const LimitCycle& c = fixture::cycle();
    const SystemParams& P = c.params;
    const double lam = g.lam, e = s.eps1;
    SystemParams pl = P;
    pl.omega = lam;
    auto rhs = [&](const State& x) {
        const double t = x.tau / lam;
        const double u = c.eval_u(t), v = c.eval_v(t) / lam;
        const double ph = x.tau + s.tau0;
        const double psi = -e * (v * P.h(u) + 2.0 * P.k(u) / lam) - psi_bar(pl, u, v, f.eval(ph), f.eval_derivative(ph));
        return Deriv{x.v, psi - x.v * P.h(u) / lam - x.u * (P.dh(u) * v / lam + P.dk(u) / (lam * lam))};
    };
    const long n = 40000;
    const State end = integrate_rk4(rhs, State{s.u1[0], s.v1[0], 0.0}, g.L / n, n);
    return std::hypot(end.u - s.u1[0], end.v - s.v1[0]);
}

}  // namespace

TEST_CASE("first-order orbit correction") {
    const Forcing h = Forcing::harmonic();
    for (int p : {1, 2, 3}) {
        const Setup s = setup(p);
        const OrbitGrid g = orbit_grid(fixture::cycle(), s.w, s.res, h);
        for (double tau0 : {0.0, 1.3}) {
            const double e1 = p % 2 == 0 ? s.d.eval(tau0) : 0.0;
            const U1Solution u = u1_solution(g, s.w, h, tau0, e1);
            CHECK(std::abs(u.compat_mean) < 1e-9);
            CHECK(std::abs(u.v1[0]) < 1e-8);
            CHECK(u1_residual(g, h, u) < 1e-6);
            CHECK(u1_return_gap(g, h, u) < 1e-7);
            if (p == 2) {
                // Only odd multiples of 1/2 in the frequency appear.
                for (int m = 0; m < 40; m += 2) CHECK(std::abs(fourier_coefficient(u.u1, m)) < 1e-9);
            }
            CHECK_THROWS_AS(u1_solution(g, s.w, h, tau0, e1 + 0.05), CompatibilityViolated);
        }
    }
}

TEST_CASE("second-order widths for odd rho") {
    const Forcing h = Forcing::harmonic();
    const LimitCycle& c = fixture::cycle();
    const SecondOrderData one = second_order(c, fixture::wronskian(1.0), h, Resonance(1, 1), nullptr);
    CHECK(std::abs(one.width - 4.8246e-2) < 1e-4);
    const SecondOrderData three = second_order(c, fixture::wronskian(3.0), h, Resonance(3, 1), nullptr);
    CHECK(std::abs(three.width - 1.0269e-1) < 2e-4);
    CHECK(one.D2_max > one.D2_min);
    CHECK(std::abs(one.mean) > 0.0);
}

TEST_CASE("second order at 2:1 bends the centre line but does not dominate") {
    const Setup s = setup(2);
    const SecondOrderData d = second_order(fixture::cycle(), s.w, Forcing::harmonic(), s.res, &s.d);
    CHECK(std::isfinite(d.width));
    CHECK(std::abs(d.mean) > 1e-6);
    const double mu = 0.05;
    CHECK(d.width * mu < 0.1 * s.d.width);
}
