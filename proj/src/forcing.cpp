#include "ilfd/forcing.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ilfd/errors.hpp"

namespace ilfd {

Forcing Forcing::harmonic() {
    Forcing f;
    f.kind_ = Kind::Harmonic;
    f.coeffs_ = {{1, 1.0}};
    f.xi_ = 1.0;
    f.phi_ = std::exp(1.0);
    return f;
}

Forcing Forcing::poisson(double lambda, int harmonics) {
    if (!(lambda > 1.0) || !std::isfinite(lambda))
        throw InvalidParams("poisson forcing requires lambda > 1");
    if (harmonics < 1) throw InvalidParams("poisson forcing needs at least one harmonic");
    Forcing f;
    f.kind_ = Kind::PoissonKernel;
    f.lambda_ = lambda;
    const double amp = (lambda * lambda - 1.0) / lambda;
    for (int nu = 1; nu <= harmonics; ++nu) f.coeffs_[nu] = amp * std::pow(lambda, -nu);
    f.phi_ = amp;
    f.xi_ = std::log(lambda);
    return f;
}

Forcing Forcing::series(std::map<int, double> coefficients) {
    Forcing f;
    for (auto& [nu, c] : coefficients) {
        if (nu < 1) throw InvalidParams("series forcing: harmonic index must be >= 1");
        if (!std::isfinite(c)) throw InvalidParams("series forcing: non-finite coefficient");
        if (c != 0.0) f.coeffs_[nu] = c;
    }
    if (f.coeffs_.empty()) throw InvalidParams("series forcing: no nonzero coefficient");
    f.fit_envelope();
    return f;
}

// Rate from a log-linear fit (or 1 for a single harmonic), amplitude raised
// until every coefficient sits under the envelope.
void Forcing::fit_envelope() {
    xi_ = 1.0;
    if (coeffs_.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(coeffs_.size());
        for (auto& [nu, c] : coeffs_) {
            const double y = std::log(std::abs(c));
            sx += nu;
            sy += y;
            sxx += double(nu) * nu;
            sxy += nu * y;
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        if (slope < 0.0) xi_ = -slope;
        else xi_ = 1e-3;
    }
    phi_ = 0.0;
    for (auto& [nu, c] : coeffs_) phi_ = std::max(phi_, std::abs(c) * std::exp(xi_ * nu));
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("forcing spec '" + ctx + "': bad number '" + s + "'");
    }
}

}  // namespace

Forcing Forcing::parse(const std::string& raw) {
    const std::string spec = trim(raw);
    if (spec == "sin" || spec == "harmonic") return harmonic();
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (head == "poisson") {
        if (body.empty()) return poisson(2.0);
        const auto eq = body.find('=');
        if (eq == std::string::npos) return poisson(to_double(trim(body), spec));
        const std::string key = trim(body.substr(0, eq));
        if (key != "lambda" && key != "λ" && key != "l")
            throw ParseError("forcing spec '" + spec + "': unknown key '" + key + "'");
        return poisson(to_double(trim(body.substr(eq + 1)), spec));
    }
    if (head == "series") {
        std::map<int, double> c;
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw ParseError("forcing spec '" + spec + "': expected nu=value, got '" + item + "'");
            const double nu = to_double(trim(item.substr(0, eq)), spec);
            if (nu != std::floor(nu) || nu < 1)
                throw ParseError("forcing spec '" + spec + "': harmonic index must be a positive integer");
            c[static_cast<int>(nu)] = to_double(trim(item.substr(eq + 1)), spec);
        }
        try {
            return series(std::move(c));
        } catch (const InvalidParams& e) {
            throw ParseError(std::string("forcing spec '") + spec + "': " + e.what());
        }
    }
    throw ParseError("unknown forcing spec '" + spec + "' (expected sin, poisson:lambda=L or series:...)");
}

double Forcing::eval(double tau) const {
    switch (kind_) {
        case Kind::Harmonic:
            return std::sin(tau);
        case Kind::PoissonKernel: {
            const double l = lambda_;
            return (l * l - 1.0) * std::sin(tau) / (l * l + 1.0 - 2.0 * l * std::cos(tau));
        }
        case Kind::Series:
            break;
    }
    double acc = 0.0;
    for (auto& [nu, c] : coeffs_) acc += c * std::sin(nu * tau);
    return acc;
}

double Forcing::eval_derivative(double tau) const {
    switch (kind_) {
        case Kind::Harmonic:
            return std::cos(tau);
        case Kind::PoissonKernel: {
            const double l = lambda_;
            const double c = std::cos(tau);
            const double d = l * l + 1.0 - 2.0 * l * c;
            return (l * l - 1.0) * ((l * l + 1.0) * c - 2.0 * l) / (d * d);
        }
        case Kind::Series:
            break;
    }
    double acc = 0.0;
    for (auto& [nu, c] : coeffs_) acc += nu * c * std::cos(nu * tau);
    return acc;
}

Forcing Forcing::truncate(int N) const {
    if (N < 1) throw InvalidParams("truncate: N must be >= 1");
    Forcing f;
    for (auto& [nu, c] : coeffs_)
        if (nu <= N) f.coeffs_[nu] = c;
    // The envelope of the parent still bounds the kept coefficients.
    f.phi_ = phi_;
    f.xi_ = xi_;
    return f;
}

double Forcing::coefficient(int nu) const {
    if (nu == 0) return 0.0;
    const auto it = coeffs_.find(std::abs(nu));
    if (it == coeffs_.end()) return 0.0;
    return nu > 0 ? it->second : -it->second;
}

int Forcing::max_harmonic() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

std::string Forcing::describe() const {
    char buf[64];
    switch (kind_) {
        case Kind::Harmonic:
            return "sin";
        case Kind::PoissonKernel:
            std::snprintf(buf, sizeof buf, "poisson:lambda=%.17g", lambda_);
            return buf;
        case Kind::Series:
            break;
    }
    std::string s = "series:";
    bool first = true;
    for (auto& [nu, c] : coeffs_) {
        std::snprintf(buf, sizeof buf, "%s%d=%.17g", first ? "" : ",", nu, c);
        s += buf;
        first = false;
    }
    return s;
}

}  // namespace ilfd
