#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "ilfd/errors.hpp"

namespace ilfd {

// Values of a periodic function at the K uniform nodes j*T/K, j = 0..K-1.
// K must be odd so the Dirichlet kernel has period one.
class PeriodicSamples {
public:
    PeriodicSamples() = default;
    PeriodicSamples(double period, std::vector<double> values);

    double period() const noexcept { return period_; }
    int size() const noexcept { return static_cast<int>(values_.size()); }
    const std::vector<double>& values() const noexcept { return values_; }
    double operator[](int j) const { return values_[static_cast<std::size_t>(j)]; }
    double node(int j) const noexcept { return period_ * j / size(); }

    // Trigonometric interpolant through the samples.
    double operator()(double t) const;

    // Precomputed sin/cos(pi j / K), shared between copies.
    const std::vector<double>& cos_table() const { return tables_->c; }
    const std::vector<double>& sin_table() const { return tables_->s; }

private:
    struct Tables {
        std::vector<double> c, s;
    };
    double period_ = 0.0;
    std::vector<double> values_;
    std::shared_ptr<const Tables> tables_;
};

// Sample f at the K nodes of [0, period).
PeriodicSamples sample(const std::function<double(double)>& f, double period, int K);

// sin(K pi t) / (K sin pi t); a sixth-order series is used within 1e-4 of an integer.
double dirichlet_kernel(double t, int K);

double interpolate(const PeriodicSamples& s, double t);

// J_K(t) = int_0^t I_K: the kernel antiderivative.
double kernel_antiderivative(double t, int K);

// int_0^tau e^{-zeta s} I_K(s) ds in kernel units (period one).
double kernel_exp_antiderivative(double zeta, double tau, int K);

// Exact integral from 0 to T of the interpolant.
double integrate_periodic(const PeriodicSamples& s, double T);

// Integral from 0 to each node t_k of the interpolant, k = 0..K (K+1 values,
// the last being the integral over a full period).
std::vector<double> integrate_periodic_nodes(const PeriodicSamples& s);

// int_0^T e^{-zeta t} x(t) dt for the interpolant x.
double integrate_exp_weighted(const PeriodicSamples& s, double zeta, double T);

// Same integral evaluated at all nodes t_k, k = 0..K.
std::vector<double> integrate_exp_weighted_nodes(const PeriodicSamples& s, double zeta);

// Discrete Fourier coefficient (1/K) sum_j x_j exp(-2 pi i m j / K).
std::complex<double> fourier_coefficient(const PeriodicSamples& s, int m);

// All coefficients m = -(K-1)/2 .. (K-1)/2, stored at index m + (K-1)/2.
std::vector<std::complex<double>> fourier_coefficients(const PeriodicSamples& s);

// Derivative of the interpolant evaluated at the nodes.
PeriodicSamples differentiate(const PeriodicSamples& s);

// Pointwise product and linear combinations on a shared grid.
PeriodicSamples multiply(const PeriodicSamples& a, const PeriodicSamples& b);

double mean(const PeriodicSamples& s);

struct RombergOptions {
    double rel_tol = 1e-12;
    double abs_tol = 0.0;
    int max_levels = 20;
    int min_levels = 4;
};

template <class G>
double romberg(G&& g, double a, double b, const RombergOptions& opt = {}) {
    std::vector<double> prev, cur;
    double h = b - a;
    prev.push_back(0.5 * h * (g(a) + g(b)));
    for (int n = 1; n <= opt.max_levels; ++n) {
        h *= 0.5;
        double acc = 0.0;
        const long m = 1L << (n - 1);
        for (long i = 0; i < m; ++i) acc += g(a + (2 * i + 1) * h);
        cur.assign(static_cast<std::size_t>(n + 1), 0.0);
        cur[0] = 0.5 * prev[0] + h * acc;
        double f = 1.0;
        for (int k = 1; k <= n; ++k) {
            f *= 4.0;
            cur[k] = cur[k - 1] + (cur[k - 1] - prev[k - 1]) / (f - 1.0);
        }
        const double diff = std::abs(cur[n] - prev[n - 1]);
        if (n >= opt.min_levels &&
            (diff <= opt.rel_tol * std::abs(cur[n]) || diff <= opt.abs_tol))
            return cur[n];
        std::swap(prev, cur);
    }
    throw NoConvergence("romberg: no convergence after " + std::to_string(opt.max_levels) +
                        " levels");
}

// Integral split at a + z (b - a), for integrands whose total may be near zero.
inline constexpr double kRombergSplit = 0.4872;

template <class G>
double romberg_split(G&& g, double a, double b, const RombergOptions& opt = {},
                     double z = kRombergSplit) {
    const double c = a + z * (b - a);
    return romberg(g, a, c, opt) + romberg(g, c, b, opt);
}

}  // namespace ilfd
