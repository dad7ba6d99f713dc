#include "ilfd/power_series.hpp"

#include <algorithm>
#include <cmath>

#include "ilfd/errors.hpp"

namespace ilfd::ps {

namespace {
double at(const Series& a, int i) { return i < static_cast<int>(a.size()) ? a[i] : 0.0; }
}  // namespace

Series mul(const Series& a, const Series& b, int degree) {
    Series c(static_cast<std::size_t>(degree + 1), 0.0);
    for (int i = 0; i <= degree && i < static_cast<int>(a.size()); ++i)
        for (int j = 0; i + j <= degree && j < static_cast<int>(b.size()); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Series reciprocal(const Series& a, int degree) {
    if (a.empty() || a[0] == 0.0) throw InvalidParams("reciprocal: zero constant term");
    Series r(static_cast<std::size_t>(degree + 1), 0.0);
    r[0] = 1.0 / a[0];
    for (int n = 1; n <= degree; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += at(a, k) * r[n - k];
        r[n] = -acc / a[0];
    }
    return r;
}

// e = exp(a) satisfies e' = a' e.
Series exp(const Series& a, int degree) {
    Series e(static_cast<std::size_t>(degree + 1), 0.0);
    e[0] = std::exp(at(a, 0));
    for (int n = 1; n <= degree; ++n) {
        double acc = 0.0;
        for (int k = 1; k <= n; ++k) acc += k * at(a, k) * e[n - k];
        e[n] = acc / n;
    }
    return e;
}

Series derivative(const Series& a) {
    if (a.size() <= 1) return {0.0};
    Series d(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) d[i - 1] = static_cast<double>(i) * a[i];
    return d;
}

Series integral(const Series& a) {
    Series s(a.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) s[i + 1] = a[i] / static_cast<double>(i + 1);
    return s;
}

double eval(const Series& a, double t) {
    double acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * t + *it;
    return acc;
}

double eval_derivative(const Series& a, double t) {
    double acc = 0.0;
    for (std::size_t i = a.size(); i-- > 1;) acc = acc * t + static_cast<double>(i) * a[i];
    return acc;
}

}  // namespace ilfd::ps
