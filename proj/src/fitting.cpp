#include "ilfd/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ilfd/errors.hpp"

namespace ilfd {

namespace {

struct Basis {
    double g, gb, gbb;
};

Basis basis(ModelKind m, double x, double b) {
    if (m == ModelKind::Monomial) {
        const double l = std::log(x), g = std::pow(x, b);
        return {g, g * l, g * l * l};
    }
    const double g = std::exp(b * x);
    return {g, x * g, x * x * g};
}

double residual_original(const DataSet& d, ModelKind m, double a, double b, bool weighted) {
    double s = 0.0;
    for (auto [x, y] : d) {
        const double w = weighted ? 1.0 / x : 1.0;
        const double r = w * (y - a * basis(m, x, b).g);
        s += r * r;
    }
    return s;
}

}  // namespace

double Objective::value(double a, double b) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = w[i] * (y[i] - a * basis(model, x[i], b).g);
        s += r * r;
    }
    return s;
}

std::array<double, 2> Objective::gradient(double a, double b) const {
    double ga = 0.0, gb = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Basis B = basis(model, x[i], b);
        const double w2 = w[i] * w[i], r = y[i] - a * B.g;
        ga -= 2.0 * w2 * r * B.g;
        gb -= 2.0 * w2 * r * a * B.gb;
    }
    return {ga, gb};
}

std::array<double, 3> Objective::hessian(double a, double b) const {
    double haa = 0.0, hab = 0.0, hbb = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const Basis B = basis(model, x[i], b);
        const double w2 = w[i] * w[i], r = y[i] - a * B.g;
        haa += 2.0 * w2 * B.g * B.g;
        hab += 2.0 * w2 * (a * B.g * B.gb - r * B.gb);
        hbb += 2.0 * w2 * (a * a * B.gb * B.gb - r * a * B.gbb);
    }
    return {haa, hab, hbb};
}

double Objective::optimal_a(double b) const {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double g = basis(model, x[i], b).g, w2 = w[i] * w[i];
        num += w2 * y[i] * g;
        den += w2 * g * g;
    }
    return den > 0.0 ? num / den : 0.0;
}

namespace {

bool newton_run(const Objective& obj, double& a, double& b, const FitSettings& st, int& iters) {
    double F = obj.value(a, b);
    for (iters = 0; iters < st.max_iterations; ++iters) {
        const auto g = obj.gradient(a, b);
        if (std::hypot(g[0], g[1]) < st.grad_tol) return true;
        const auto H = obj.hessian(a, b);
        const double det = H[0] * H[2] - H[1] * H[1];
        double da, db;
        if (H[0] > 0.0 && det > 0.0) {
            da = -(H[2] * g[0] - H[1] * g[1]) / det;
            db = -(-H[1] * g[0] + H[0] * g[1]) / det;
        } else {
            // Not convex here: steepest descent scaled by the diagonal.
            da = -g[0] / std::max(std::abs(H[0]), 1e-300);
            db = -g[1] / std::max(std::abs(H[2]), 1e-300);
        }
        double t = 1.0;
        bool moved = false;
        for (int k = 0; k <= st.max_halvings; ++k, t *= 0.5) {
            const double an = a + t * da, bn = b + t * db;
            const double Fn = obj.value(an, bn);
            if (std::isfinite(Fn) && Fn <= F) {
                moved = an != a || bn != b;
                a = an;
                b = bn;
                F = Fn;
                break;
            }
        }
        if (!moved) {
            // No representable decrease left: accept if the gradient is at round-off level.
            const auto g2 = obj.gradient(a, b);
            return std::hypot(g2[0], g2[1]) < 1e-10;
        }
    }
    const auto g = obj.gradient(a, b);
    return std::hypot(g[0], g[1]) < st.grad_tol;
}

}  // namespace

std::pair<double, double> newton_minimize(const Objective& obj, double a0, double b0,
                                          const FitSettings& st, int* iterations) {
    double a = a0, b = b0;
    int it = 0;
    if (newton_run(obj, a, b, st, it)) {
        if (iterations) *iterations = it;
        return {a, b};
    }
    // Restart from the best point of a coarse grid in b.
    double best_b = b0, best_F = std::numeric_limits<double>::infinity();
    const bool mono = obj.model == ModelKind::Monomial;
    for (int i = 0; i <= 240; ++i) {
        const double bb = mono ? 0.05 * i : -12.0 + 0.1 * i;
        const double aa = obj.optimal_a(bb);
        const double F = obj.value(aa, bb);
        if (F < best_F) {
            best_F = F;
            best_b = bb;
        }
    }
    a = obj.optimal_a(best_b);
    b = best_b;
    int it2 = 0;
    if (!newton_run(obj, a, b, st, it2))
        throw NewtonDiverged("Newton iteration did not converge in " + std::to_string(st.max_iterations) +
                             " iterations");
    if (iterations) *iterations = it + it2;
    return {a, b};
}

std::pair<double, double> log_linear_fit(const DataSet& data, ModelKind model) {
    double n = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : data) {
        if (!(y > 0.0) || (model == ModelKind::Monomial && !(x > 0.0))) continue;
        const double X = model == ModelKind::Monomial ? std::log(x) : x, Y = std::log(y);
        n += 1;
        sx += X;
        sy += Y;
        sxx += X * X;
        sxy += X * Y;
    }
    if (n < 2) throw TooFewPoints("log-linear fit needs two positive points");
    const double b = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double la = (sy - b * sx) / n;
    return {std::exp(la), b};
}

FitResult fit_monomial(const DataSet& raw, const FitSettings& st) {
    DataSet data;
    for (auto [mu, w] : raw)
        if (mu > 0.0 && std::abs(w) >= st.zero_floor && std::isfinite(w)) data.emplace_back(mu, w);
    std::sort(data.begin(), data.end());
    if (static_cast<int>(data.size()) < st.min_points)
        throw TooFewPoints("fit_monomial: " + std::to_string(data.size()) + " usable points, need " +
                           std::to_string(st.min_points));
    double cap = st.initial_cap;
    for (auto [mu, w] : data)
        if (w < st.small_width) cap = std::max(cap, mu);
    for (;;) {
        DataSet sel;
        for (auto p : data)
            if (p.first <= cap * (1 + 1e-12)) sel.push_back(p);
        if (static_cast<int>(sel.size()) < st.min_points)
            throw TooFewPoints("fit_monomial: fewer than " + std::to_string(st.min_points) +
                               " points below mu_fit = " + std::to_string(cap));
        double xs = 0.0, ys = 0.0;
        for (auto [x, y] : sel) {
            xs = std::max(xs, x);
            ys = std::max(ys, std::abs(y));
        }
        Objective obj;
        for (auto [x, y] : sel) {
            obj.x.push_back(x / xs);
            obj.y.push_back(y / ys);
            obj.w.push_back(xs / x);
        }
        DataSet norm;
        for (std::size_t i = 0; i < obj.x.size(); ++i) norm.emplace_back(obj.x[i], obj.y[i]);
        auto [a0, b0] = log_linear_fit(norm);
        int it = 0;
        auto [a, b] = newton_minimize(obj, a0, b0, st, &it);
        FitResult r;
        r.N_fit = static_cast<int>(sel.size());
        r.residual = obj.value(a, b) / r.N_fit;
        if (r.residual > st.residual_tol) {
            cap *= st.shrink;
            continue;
        }
        const auto g = obj.gradient(a, b);
        r.grad_norm = std::hypot(g[0], g[1]);
        r.iterations = it;
        r.a_normalized = a;
        r.b = b;
        r.a = a * ys / std::pow(xs, b);
        r.mu_fit = cap;
        r.x_scale = xs;
        r.y_scale = ys;
        return r;
    }
}

FitComparison compare_linear_vs_nonlinear(const DataSet& data, const FitSettings& st) {
    const FitResult nl = fit_monomial(data, st);
    DataSet sel;
    for (auto p : data)
        if (p.first > 0.0 && p.first <= nl.mu_fit * (1 + 1e-12) && std::abs(p.second) >= st.zero_floor)
            sel.push_back(p);
    const auto [al, bl] = log_linear_fit(sel);
    FitComparison c;
    c.points = static_cast<int>(sel.size());
    c.a_linear = al;
    c.b_linear = bl;
    c.a_nonlinear = nl.a;
    c.b_nonlinear = nl.b;
    c.residual_linear = residual_original(sel, ModelKind::Monomial, al, bl, true);
    c.residual_nonlinear = residual_original(sel, ModelKind::Monomial, nl.a, nl.b, true);
    return c;
}

FitComparison compare_exponential(const DataSet& data, const FitSettings& st) {
    DataSet sel;
    for (auto p : data)
        if (p.second > 0.0) sel.push_back(p);
    if (static_cast<int>(sel.size()) < 2) throw TooFewPoints("compare_exponential: need positive data");
    const auto [al, bl] = log_linear_fit(sel, ModelKind::Exponential);
    Objective obj;
    obj.model = ModelKind::Exponential;
    for (auto [x, y] : sel) {
        obj.x.push_back(x);
        obj.y.push_back(y);
        obj.w.push_back(1.0);
    }
    FitSettings s = st;
    s.grad_tol = std::max(st.grad_tol, 1e-12 * (1.0 + obj.value(al, bl)));
    const auto [an, bn] = newton_minimize(obj, al, bl, s);
    FitComparison c;
    c.points = static_cast<int>(sel.size());
    c.a_linear = al;
    c.b_linear = bl;
    c.a_nonlinear = an;
    c.b_nonlinear = bn;
    c.residual_linear = residual_original(sel, ModelKind::Exponential, al, bl, false);
    c.residual_nonlinear = residual_original(sel, ModelKind::Exponential, an, bn, false);
    return c;
}

}  // namespace ilfd
