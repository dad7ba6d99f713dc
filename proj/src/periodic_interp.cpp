#include "ilfd/periodic_interp.hpp"

#include <numbers>
#include <string>

namespace ilfd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSeriesCut = 1e-4;
// Nodes closer than this use the direct quotient instead of the angle-addition form.
constexpr double kNearCut = 2e-2;

double kernel_series(double delta, int K) {
    const double k2 = static_cast<double>(K) * K;
    const double x2 = kPi * kPi * delta * delta;
    const double c2 = -(k2 - 1.0) / 6.0;
    const double c4 = (k2 - 1.0) * (3.0 * k2 - 7.0) / 360.0;
    const double c6 = -(k2 - 1.0) * (3.0 * k2 * k2 - 18.0 * k2 + 31.0) / 15120.0;
    return 1.0 + x2 * (c2 + x2 * (c4 + x2 * c6));
}

// Reduce t to (-1/2, 1/2].
double centred_fraction(double t) { return t - std::round(t); }

void require_odd(int K, const char* who) {
    if (K < 1 || K % 2 == 0)
        throw InvalidParams(std::string(who) + ": sample count must be odd and positive, got " +
                            std::to_string(K));
}

// sin(k pi s) and sin(2 pi i x), i = 1..m, by the three-term recurrence.
void sine_harmonics(double x, int m, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(m + 1));
    out[0] = 0.0;
    if (m == 0) return;
    const double th = 2.0 * kPi * x;
    const double c = std::cos(th);
    out[1] = std::sin(th);
    if (m >= 2) out[2] = 2.0 * c * out[1];
    for (int i = 3; i <= m; ++i) out[i] = 2.0 * c * out[i - 1] - out[i - 2];
}

void cosine_harmonics(double x, int m, std::vector<double>& out) {
    out.resize(static_cast<std::size_t>(m + 1));
    out[0] = 1.0;
    if (m == 0) return;
    const double th = 2.0 * kPi * x;
    const double c = std::cos(th);
    out[1] = c;
    for (int i = 2; i <= m; ++i) out[i] = 2.0 * c * out[i - 1] - out[i - 2];
}

}  // namespace

PeriodicSamples::PeriodicSamples(double period, std::vector<double> values)
    : period_(period), values_(std::move(values)) {
    require_odd(size(), "PeriodicSamples");
    if (!(period > 0.0) || !std::isfinite(period))
        throw InvalidParams("PeriodicSamples: period must be positive");
    auto t = std::make_shared<Tables>();
    const int K = size();
    t->c.resize(static_cast<std::size_t>(K));
    t->s.resize(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) {
        t->c[j] = std::cos(kPi * j / K);
        t->s[j] = std::sin(kPi * j / K);
    }
    tables_ = std::move(t);
}

double PeriodicSamples::operator()(double t) const { return interpolate(*this, t); }

PeriodicSamples sample(const std::function<double(double)>& f, double period, int K) {
    std::vector<double> v(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) v[j] = f(period * j / K);
    return PeriodicSamples(period, std::move(v));
}

double dirichlet_kernel(double t, int K) {
    require_odd(K, "dirichlet_kernel");
    const double d = centred_fraction(t);
    if (std::abs(d) < kSeriesCut) return kernel_series(d, K);
    return std::sin(K * kPi * d) / (K * std::sin(kPi * d));
}

double interpolate(const PeriodicSamples& s, double t) {
    const int K = s.size();
    const double u = t / s.period();
    const double x = u - std::floor(u);  // in [0, 1)

    // sin(K pi x) with the product K*x split exactly so the phase carries no
    // rounding beyond that of x itself.
    const double y_hi = K * x;
    const double y_lo = std::fma(static_cast<double>(K), x, -y_hi);
    const double n = std::round(y_hi);
    const double r = (y_hi - n) + y_lo;
    const double sin_kx = (static_cast<long>(n) % 2 == 0 ? 1.0 : -1.0) * std::sin(kPi * r);
    const double sx = std::sin(kPi * x);
    const double cx = std::cos(kPi * x);

    const auto& C = s.cos_table();
    const auto& S = s.sin_table();
    const auto& v = s.values();
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
        const double d = centred_fraction(x - static_cast<double>(j) / K);
        double w;
        if (std::abs(d) < kSeriesCut) {
            w = kernel_series(d, K);
        } else if (std::abs(d) < kNearCut) {
            w = std::sin(K * kPi * d) / (K * std::sin(kPi * d));
        } else {
            const double den = sx * C[j] - cx * S[j];  // sin(pi (x - j/K))
            w = ((j % 2 == 0) ? sin_kx : -sin_kx) / (K * den);
        }
        acc += v[j] * w;
    }
    return acc;
}

double kernel_antiderivative(double t, int K) {
    require_odd(K, "kernel_antiderivative");
    const int m = (K - 1) / 2;
    static thread_local std::vector<double> sn;
    sine_harmonics(centred_fraction(t), m, sn);
    double acc = 0.0;
    for (int i = m; i >= 1; --i) acc += sn[i] / i;
    return t / K + acc / (K * kPi);
}

double kernel_exp_antiderivative(double zeta, double tau, int K) {
    require_odd(K, "kernel_exp_antiderivative");
    const int m = (K - 1) / 2;
    static thread_local std::vector<double> sn, cn;
    const double fr = centred_fraction(tau);
    sine_harmonics(fr, m, sn);
    cosine_harmonics(fr, m, cn);
    const double e = std::exp(-zeta * tau);
    double acc = 0.0;
    for (int i = m; i >= 1; --i) {
        const double w = 2.0 * kPi * i;
        acc += (zeta + e * (w * sn[i] - zeta * cn[i])) / (zeta * zeta + w * w);
    }
    const double base = (std::abs(zeta * tau) < 1e-8) ? tau * (1.0 - 0.5 * zeta * tau)
                                                        : -std::expm1(-zeta * tau) / zeta;
    return (base + 2.0 * acc) / K;
}

double integrate_periodic(const PeriodicSamples& s, double T) {
    const int K = s.size();
    const double x = T / s.period();
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
        const double jk = static_cast<double>(j) / K;
        acc += s[j] * (kernel_antiderivative(x - jk, K) + kernel_antiderivative(jk, K));
    }
    return s.period() * acc;
}

std::vector<double> integrate_periodic_nodes(const PeriodicSamples& s) {
    const int K = s.size();
    // J_K at multiples of 1/K; J_K(-t) = -J_K(t) and J_K(t + 1) = J_K(t) + 1/K.
    std::vector<double> J(static_cast<std::size_t>(K + 1));
    for (int m = 0; m <= K; ++m) J[m] = kernel_antiderivative(static_cast<double>(m) / K, K);
    auto Jm = [&](int m) { return m >= 0 ? J[m] : -J[-m]; };
    std::vector<double> out(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) {
        double acc = 0.0;
        for (int j = 0; j < K; ++j) acc += s[j] * (Jm(k - j) + J[j]);
        out[k] = s.period() * acc;
    }
    return out;
}

double integrate_exp_weighted(const PeriodicSamples& s, double zeta, double T) {
    if (std::abs(zeta) < 1e-12)
        throw DegenerateWeight("integrate_exp_weighted: |zeta| < 1e-12, use integrate_periodic");
    const int K = s.size();
    const double T0 = s.period();
    const double z = zeta * T0;
    const double x = T / T0;
    double acc = 0.0;
    for (int j = 0; j < K; ++j) {
        const double jk = static_cast<double>(j) / K;
        acc += s[j] * std::exp(-z * jk) *
               (kernel_exp_antiderivative(z, x - jk, K) - kernel_exp_antiderivative(z, -jk, K));
    }
    return T0 * acc;
}

std::vector<double> integrate_exp_weighted_nodes(const PeriodicSamples& s, double zeta) {
    if (std::abs(zeta) < 1e-12)
        throw DegenerateWeight("integrate_exp_weighted: |zeta| < 1e-12, use integrate_periodic");
    const int K = s.size();
    const double T0 = s.period();
    const double z = zeta * T0;
    // E at (k - j)/K for k - j in [-(K-1), K].
    std::vector<double> E(static_cast<std::size_t>(2 * K));
    for (int m = -(K - 1); m <= K; ++m)
        E[m + K - 1] = kernel_exp_antiderivative(z, static_cast<double>(m) / K, K);
    auto Em = [&](int m) { return E[m + K - 1]; };
    std::vector<double> w(static_cast<std::size_t>(K));
    for (int j = 0; j < K; ++j) w[j] = s[j] * std::exp(-z * j / K);
    std::vector<double> out(static_cast<std::size_t>(K + 1));
    for (int k = 0; k <= K; ++k) {
        double acc = 0.0;
        for (int j = 0; j < K; ++j) acc += w[j] * (Em(k - j) - Em(-j));
        out[k] = T0 * acc;
    }
    return out;
}

std::complex<double> fourier_coefficient(const PeriodicSamples& s, int m) {
    const int K = s.size();
    std::complex<double> acc = 0.0;
    for (int j = 0; j < K; ++j) {
        const long r = (static_cast<long>(m) * j) % K;
        const double th = -2.0 * kPi * static_cast<double>(r) / K;
        acc += s[j] * std::complex<double>(std::cos(th), std::sin(th));
    }
    return acc / static_cast<double>(K);
}

std::vector<std::complex<double>> fourier_coefficients(const PeriodicSamples& s) {
    const int K = s.size();
    const int M = (K - 1) / 2;
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(K));
    for (int r = 0; r < K; ++r) roots[r] = std::polar(1.0, -2.0 * kPi * r / K);
    std::vector<std::complex<double>> out(static_cast<std::size_t>(K));
    for (int m = -M; m <= M; ++m) {
        std::complex<double> acc = 0.0;
        const int mm = ((m % K) + K) % K;
        for (int j = 0; j < K; ++j) acc += s[j] * roots[(static_cast<long>(mm) * j) % K];
        out[m + M] = acc / static_cast<double>(K);
    }
    return out;
}

PeriodicSamples differentiate(const PeriodicSamples& s) {
    const int K = s.size();
    const int M = (K - 1) / 2;
    const auto c = fourier_coefficients(s);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(K));
    for (int r = 0; r < K; ++r) roots[r] = std::polar(1.0, 2.0 * kPi * r / K);
    const double w0 = 2.0 * kPi / s.period();
    std::vector<double> out(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) {
        std::complex<double> acc = 0.0;
        for (int m = -M; m <= M; ++m) {
            const int mm = ((m % K) + K) % K;
            acc += c[m + M] * std::complex<double>(0.0, w0 * m) *
                   roots[(static_cast<long>(mm) * k) % K];
        }
        out[k] = acc.real();
    }
    return PeriodicSamples(s.period(), std::move(out));
}

PeriodicSamples multiply(const PeriodicSamples& a, const PeriodicSamples& b) {
    if (a.size() != b.size()) throw InvalidParams("multiply: grid size mismatch");
    std::vector<double> v(a.values());
    for (int j = 0; j < a.size(); ++j) v[j] *= b[j];
    return PeriodicSamples(a.period(), std::move(v));
}

double mean(const PeriodicSamples& s) {
    double acc = 0.0;
    for (double x : s.values()) acc += x;
    return acc / s.size();
}

}  // namespace ilfd
