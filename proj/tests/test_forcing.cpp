#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "ilfd/errors.hpp"
#include "ilfd/forcing.hpp"

using ilfd::Forcing;
constexpr double pi = std::numbers::pi;

namespace {

double poisson_closed(double lam, double t) {
    return (lam * lam - 1) * std::sin(t) / (lam * lam + 1 - 2 * lam * std::cos(t));
}

}  // namespace

TEST_CASE("harmonic drive values") {
    const Forcing f = Forcing::harmonic();
    CHECK(f.eval(pi / 2) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.eval_derivative(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(f.coefficients().size() == 1);
    CHECK(f.max_harmonic() == 1);
}

TEST_CASE("poisson kernel: closed form, zero at origin, series oracle") {
    const Forcing f = Forcing::poisson(2.0);
    CHECK(std::abs(f.eval(0.0)) < 1e-16);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> U(-10.0, 10.0);
    for (int i = 0; i < 50; ++i) {
        const double t = U(rng);
        CHECK(std::abs(f.eval(t) - poisson_closed(2.0, t)) < 1e-14);
        // Independent truncated series through nu = 60 with real amplitudes (lam^2 - 1)/lam lam^-nu.
        double s = 0.0;
        for (int nu = 1; nu <= 60; ++nu) s += 1.5 * std::pow(2.0, -nu) * std::sin(nu * t);
        CHECK(std::abs(f.eval(t) - s) < 1e-12);
    }
}

TEST_CASE("poisson derivative matches central difference at pi") {
    const Forcing f = Forcing::poisson(2.0);
    const double h = 1e-6;
    const double fd = (poisson_closed(2.0, pi + h) - poisson_closed(2.0, pi - h)) / (2 * h);
    CHECK(std::abs(f.eval_derivative(pi) - fd) < 1e-8);
}

TEST_CASE("periodicity and oddness") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (const Forcing& f : {Forcing::harmonic(), Forcing::poisson(2.0), Forcing::poisson(3.5),
                             Forcing::series({{1, 1.0}, {3, 0.2}, {4, -0.05}})}) {
        for (int i = 0; i < 40; ++i) {
            const double t = U(rng);
            CHECK(std::abs(f.eval(t + 2 * pi) - f.eval(t)) < 1e-13);
            CHECK(std::abs(f.eval_derivative(t + 2 * pi) - f.eval_derivative(t)) < 1e-12);
            CHECK(std::abs(f.eval(-t) + f.eval(t)) < 1e-13);
        }
    }
}

TEST_CASE("stored coefficients respect the envelope") {
    for (const Forcing& f : {Forcing::harmonic(), Forcing::poisson(2.0), Forcing::poisson(1.3),
                             Forcing::series({{1, 0.5}, {2, 0.3}, {5, 0.01}})}) {
        for (auto [nu, c] : f.coefficients())
            CHECK(std::abs(c) <= f.decay_amplitude() * std::exp(-f.decay_rate() * nu) * (1 + 1e-12));
    }
}

TEST_CASE("truncate") {
    const Forcing p = Forcing::poisson(2.0);
    const Forcing t1 = p.truncate(1);
    CHECK(t1.kind() == Forcing::Kind::Series);
    REQUIRE(t1.coefficients().size() == 1);
    CHECK(t1.coefficient(1) == doctest::Approx(0.75).epsilon(1e-15));

    const Forcing h5 = Forcing::harmonic().truncate(5);
    CHECK(h5.coefficients() == Forcing::harmonic().coefficients());
    for (double t : {0.1, 1.0, 2.5}) CHECK(h5.eval(t) == doctest::Approx(std::sin(t)).epsilon(1e-15));

    for (int N : {2, 5, 10, 20}) {
        const Forcing tn = p.truncate(N);
        const double x = std::exp(-p.decay_rate());
        const double bound = p.decay_amplitude() * std::exp(-p.decay_rate() * N) / (1 - x);
        for (int i = 0; i < 64; ++i) {
            const double t = 2 * pi * i / 64;
            CHECK(std::abs(tn.eval(t) - p.eval(t)) <= bound * (1 + 1e-9) + 1e-15);
        }
    }
}

TEST_CASE("odd extension of coefficients") {
    const Forcing f = Forcing::series({{2, 0.4}});
    CHECK(f.coefficient(2) == 0.4);
    CHECK(f.coefficient(-2) == -0.4);
    CHECK(f.coefficient(3) == 0.0);
}

TEST_CASE("parse forcing specifications") {
    CHECK(Forcing::parse("sin").kind() == Forcing::Kind::Harmonic);
    CHECK(Forcing::parse("harmonic").kind() == Forcing::Kind::Harmonic);
    const Forcing p = Forcing::parse("poisson:lambda=3");
    CHECK(p.kind() == Forcing::Kind::PoissonKernel);
    CHECK(p.lambda() == 3.0);
    CHECK(Forcing::parse("poisson:λ=2").lambda() == 2.0);
    CHECK(Forcing::parse("poisson").lambda() == 2.0);
    const Forcing s = Forcing::parse("series:1=1.0,2=0.25");
    CHECK(s.coefficient(2) == 0.25);
    CHECK_THROWS_AS(Forcing::parse("cos"), ilfd::ParseError);
    CHECK_THROWS_AS(Forcing::parse("series:1=abc"), ilfd::ParseError);
    CHECK_THROWS_AS(Forcing::parse("poisson:lambda=0.5"), ilfd::Error);
}
