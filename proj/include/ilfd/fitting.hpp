#pragma once

#include <array>
#include <utility>
#include <vector>

namespace ilfd {

using DataSet = std::vector<std::pair<double, double>>;  // (mu, width)

enum class ModelKind { Monomial, Exponential };  // a x^b or a e^{b x}

// F(a, b) = sum w_i^2 (y_i - a g(x_i, b))^2 with analytic derivatives.
struct Objective {
    ModelKind model = ModelKind::Monomial;
    std::vector<double> x, y, w;

    double value(double a, double b) const;
    std::array<double, 2> gradient(double a, double b) const;
    std::array<double, 3> hessian(double a, double b) const;  // (aa, ab, bb)
    // Best a for fixed b (linear least squares).
    double optimal_a(double b) const;
};

struct FitSettings {
    double residual_tol = 1e-3;   // on normalized data, F / N
    double shrink = 0.8;          // mu_fit reduction per rejected fit
    int min_points = 8;
    double zero_floor = 1e-11;    // widths treated as numerically zero
    double small_width = 1e-4;    // sets the initial fit interval
    double initial_cap = 0.1;
    double grad_tol = 1e-12;
    int max_iterations = 100;
    int max_halvings = 30;
};

struct FitResult {
    double a = 0.0;
    double b = 0.0;
    double mu_fit = 0.0;
    int N_fit = 0;
    double residual = 0.0;    // F / N in normalized units
    int iterations = 0;
    double grad_norm = 0.0;   // normalized units
    double a_normalized = 0.0;
    double x_scale = 1.0, y_scale = 1.0;
};

// Newton minimization of the objective from (a0, b0); throws NewtonDiverged.
std::pair<double, double> newton_minimize(const Objective& obj, double a0, double b0,
                                          const FitSettings& st, int* iterations = nullptr);

// Weighted fit of width = a mu^b with W = 1/mu on an adaptively shrunk interval.
FitResult fit_monomial(const DataSet& data, const FitSettings& st = {});

// Linear regression of log y on log x (or of log y on x for the exponential model).
std::pair<double, double> log_linear_fit(const DataSet& data, ModelKind model = ModelKind::Monomial);

struct FitComparison {
    double a_linear = 0.0, b_linear = 0.0;
    double a_nonlinear = 0.0, b_nonlinear = 0.0;
    double residual_linear = 0.0;     // sum (W (y - model))^2, original units
    double residual_nonlinear = 0.0;
    int points = 0;
};

FitComparison compare_linear_vs_nonlinear(const DataSet& data, const FitSettings& st = {});

// y = a exp(b x) fitted without weights, both ways.
FitComparison compare_exponential(const DataSet& data, const FitSettings& st = {});

}  // namespace ilfd
