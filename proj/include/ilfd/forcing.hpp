#pragma once

#include <map>
#include <optional>
#include <string>

namespace ilfd {

// Periodic drive f(tau) = sum_nu fhat_nu sin(nu tau), odd by construction.
class Forcing {
public:
    enum class Kind { Harmonic, PoissonKernel, Series };

    static Forcing harmonic();
    // (lambda^2 - 1) sin tau / (lambda^2 + 1 - 2 lambda cos tau), lambda > 1.
    static Forcing poisson(double lambda, int harmonics = 64);
    static Forcing series(std::map<int, double> coefficients);

    // "sin", "poisson:lambda=2" (also "poisson:λ=2"), "series:1=1.0,3=0.2".
    static Forcing parse(const std::string& spec);

    double eval(double tau) const;
    double eval_derivative(double tau) const;

    // Keep harmonics nu <= N; the result is always a plain series.
    Forcing truncate(int N) const;

    Kind kind() const noexcept { return kind_; }
    bool has_closed_form() const noexcept { return kind_ != Kind::Series; }
    double lambda() const noexcept { return lambda_; }
    const std::map<int, double>& coefficients() const noexcept { return coeffs_; }
    double coefficient(int nu) const;  // odd extension: fhat_{-nu} = -fhat_nu
    int max_harmonic() const;

    // Envelope |fhat_nu| <= decay_amplitude * exp(-decay_rate * nu).
    double decay_amplitude() const noexcept { return phi_; }
    double decay_rate() const noexcept { return xi_; }

    std::string describe() const;

private:
    Kind kind_ = Kind::Series;
    double lambda_ = 0.0;
    std::map<int, double> coeffs_;
    double phi_ = 1.0;
    double xi_ = 1.0;
    void fit_envelope();
};

}  // namespace ilfd
