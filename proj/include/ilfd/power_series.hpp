#pragma once

#include <vector>

// Truncated power-series arithmetic on coefficient vectors c[0] + c[1] t + ...
namespace ilfd::ps {

using Series = std::vector<double>;

Series mul(const Series& a, const Series& b, int degree);
Series reciprocal(const Series& a, int degree);  // requires a[0] != 0
Series exp(const Series& a, int degree);
Series derivative(const Series& a);
Series integral(const Series& a);  // zero constant term
double eval(const Series& a, double t);
double eval_derivative(const Series& a, double t);

}  // namespace ilfd::ps
