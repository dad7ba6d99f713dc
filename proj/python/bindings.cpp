#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ilfd/errors.hpp"
#include "ilfd/fitting.hpp"
#include "ilfd/forcing.hpp"
#include "ilfd/lienard.hpp"
#include "ilfd/perturbation.hpp"
#include "ilfd/tongue_scan.hpp"
#include "ilfd/wronskian.hpp"

namespace py = pybind11;
using namespace ilfd;

namespace {

std::vector<double> values(const PeriodicSamples& s) { return s.values(); }

}  // namespace

PYBIND11_MODULE(_ilfd, m) {
    m.doc() = "Frequency locking of a driven Lienard oscillator";

    static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const InvalidParams& e) {
            PyErr_SetString(PyExc_ValueError, (e.kind() + ": " + e.what()).c_str());
        } catch (const Error& e) {
            PyErr_SetString(base.ptr(), (e.kind() + ": " + e.what()).c_str());
        }
    });

    py::class_<SystemParams>(m, "SystemParams")
        .def(py::init([](double alpha, double beta, double mu, double omega) {
                 SystemParams p;
                 p.alpha = alpha;
                 p.beta = beta;
                 p.mu = mu;
                 p.omega = omega;
                 p.validate();
                 return p;
             }),
             py::arg("alpha") = 5.0, py::arg("beta") = 4.0, py::arg("mu") = 0.0, py::arg("omega") = 1.0)
        .def_readwrite("alpha", &SystemParams::alpha)
        .def_readwrite("beta", &SystemParams::beta)
        .def_readwrite("mu", &SystemParams::mu)
        .def_readwrite("omega", &SystemParams::omega);

    py::class_<Forcing>(m, "Forcing")
        .def_static("harmonic", &Forcing::harmonic)
        .def_static("poisson", &Forcing::poisson, py::arg("lam"), py::arg("harmonics") = 64)
        .def_static("series", &Forcing::series)
        .def_static("parse", &Forcing::parse)
        .def("__call__", &Forcing::eval)
        .def("derivative", &Forcing::eval_derivative)
        .def("truncate", &Forcing::truncate)
        .def("coefficient", &Forcing::coefficient)
        .def_property_readonly("coefficients", &Forcing::coefficients)
        .def("__repr__", &Forcing::describe);

    py::class_<Resonance>(m, "Resonance")
        .def(py::init<int, int>(), py::arg("p"), py::arg("q") = 1)
        .def_static("parse", &Resonance::parse)
        .def_readonly("p", &Resonance::p)
        .def_readonly("q", &Resonance::q)
        .def_property_readonly("rho", &Resonance::rho)
        .def("__repr__", &Resonance::str);

    py::class_<LimitCycle>(m, "LimitCycle")
        .def_readonly("U0", &LimitCycle::U0)
        .def_readonly("T0", &LimitCycle::T0)
        .def_readonly("Omega0", &LimitCycle::Omega0)
        .def_readonly("r1", &LimitCycle::r1)
        .def_property_readonly("u", [](const LimitCycle& c) { return values(c.u); })
        .def_property_readonly("v", [](const LimitCycle& c) { return values(c.v); })
        .def("eval_u", &LimitCycle::eval_u)
        .def("eval_v", &LimitCycle::eval_v);

    m.def("find_limit_cycle", [](double alpha, double beta, int samples) {
        SystemParams p;
        p.alpha = alpha;
        p.beta = beta;
        LimitCycleSettings s;
        s.samples = samples;
        return find_limit_cycle(p, s);
    }, py::arg("alpha") = 5.0, py::arg("beta") = 4.0, py::arg("samples") = 151);

    py::class_<VariationalBase>(m, "VariationalBase");
    m.def("build_variational", [](const LimitCycle& c) { return build_variational(c); });

    py::class_<WronskianData>(m, "WronskianData")
        .def_readonly("rho_omega", &WronskianData::rho_omega)
        .def_readonly("f0", &WronskianData::f0)
        .def_readonly("gamma", &WronskianData::gamma)
        .def_readonly("A", &WronskianData::A)
        .def_readonly("A_romberg", &WronskianData::A_romberg)
        .def_readonly("A_closed", &WronskianData::A_closed)
        .def_readonly("w11", &WronskianData::w11)
        .def_property_readonly("a", [](const WronskianData& w) { return values(w.a); })
        .def_property_readonly("b", [](const WronskianData& w) { return values(w.b); });
    m.def("rescale", &rescale, py::arg("base"), py::arg("cycle"), py::arg("rho"));

    py::class_<KernelFunctions>(m, "KernelFunctions")
        .def("coefficient", &KernelFunctions::coefficient)
        .def_property_readonly("max_harmonic", &KernelFunctions::max_harmonic);
    m.def("kernel_functions", &kernel_functions);

    py::class_<FirstOrderData>(m, "FirstOrderData")
        .def_readonly("A", &FirstOrderData::A)
        .def_readonly("width", &FirstOrderData::width)
        .def_readonly("eps_max", &FirstOrderData::eps_max)
        .def_readonly("eps_min", &FirstOrderData::eps_min)
        .def_readonly("theta1", &FirstOrderData::theta1)
        .def_readonly("theta2", &FirstOrderData::theta2)
        .def_readonly("Q", &FirstOrderData::Q)
        .def_readonly("Q0", &FirstOrderData::Q0)
        .def_property_readonly("D", [](const FirstOrderData& d) {
            std::vector<std::tuple<int, double, double>> out;
            for (const auto& t : d.terms) out.emplace_back(t.nu, t.D1, t.D2);
            return out;
        })
        .def("__call__", &FirstOrderData::eval)
        .def("nonlinear_interval", &FirstOrderData::nonlinear_interval);
    m.def("first_order", [](const LimitCycle& c, const WronskianData& w, const KernelFunctions& k,
                            const Forcing& f) { return first_order_unchecked(c, w, k, f); });

    py::class_<SecondOrderData>(m, "SecondOrderData")
        .def_readonly("width", &SecondOrderData::width)
        .def_readonly("mean", &SecondOrderData::mean)
        .def_readonly("tau0", &SecondOrderData::tau0)
        .def_readonly("D2", &SecondOrderData::D2);
    m.def("second_order", [](const LimitCycle& c, const WronskianData& w, const Forcing& f, Resonance r,
                             const FirstOrderData* first) { return second_order(c, w, f, r, first); },
          py::arg("cycle"), py::arg("w"), py::arg("forcing"), py::arg("res"), py::arg("first") = nullptr);

    m.def("selection_rule", [](Resonance r, const Forcing& f) {
        std::vector<std::pair<int, int>> out;
        for (auto s : selection_rule(r, f)) out.emplace_back(s.nu, s.nu_prime);
        return out;
    });

    py::class_<ScanSettings>(m, "ScanSettings")
        .def(py::init<>())
        .def_readwrite("steps_per_period", &ScanSettings::steps_per_period)
        .def_readwrite("threads", &ScanSettings::threads)
        .def_readwrite("bisect_abs", &ScanSettings::bisect_abs);

    py::class_<TonguePoint>(m, "TonguePoint")
        .def_readonly("mu", &TonguePoint::mu)
        .def_readonly("omega_min", &TonguePoint::omega_min)
        .def_readonly("omega_max", &TonguePoint::omega_max)
        .def_readonly("width", &TonguePoint::width)
        .def_readonly("center", &TonguePoint::center)
        .def_readonly("gap", &TonguePoint::gap);
    py::class_<TongueResult>(m, "TongueResult")
        .def_readonly("points", &TongueResult::points)
        .def("widths", &TongueResult::widths);
    m.def("scan_tongue", &scan_tongue, py::arg("cycle"), py::arg("forcing"), py::arg("res"),
          py::arg("mu_schedule"), py::arg("settings") = ScanSettings{});
    m.def("is_locked", [](const LimitCycle& c, const Forcing& f, Resonance r, double mu, double omega) {
        LockProbe pr;
        pr.params = c.params;
        pr.params.mu = mu;
        pr.params.omega = omega;
        pr.forcing = f;
        pr.res = r;
        const LockResult res = is_locked(pr, c);
        return py::make_tuple(res.locked, res.residual, res.ratio);
    });
    m.def("staircase", [](const LimitCycle& c, const Forcing& f, double mu, const std::vector<double>& om) {
        std::vector<std::pair<double, double>> out;
        for (auto p : staircase(c, f, mu, om)) out.emplace_back(p.omega, p.ratio);
        return out;
    });

    py::class_<FitResult>(m, "FitResult")
        .def_readonly("a", &FitResult::a)
        .def_readonly("b", &FitResult::b)
        .def_readonly("mu_fit", &FitResult::mu_fit)
        .def_readonly("N_fit", &FitResult::N_fit)
        .def_readonly("residual", &FitResult::residual);
    m.def("fit_monomial", [](const DataSet& d) { return fit_monomial(d); });
}
