#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <ostream>

#include "ilfd/csv.hpp"
#include "ilfd/errors.hpp"
#include "ilfd/fitting.hpp"
#include "ilfd/perturbation.hpp"
#include "ilfd/tongue_scan.hpp"
#include "ilfd/wronskian.hpp"

namespace ilfd::cli {

namespace {

using csv::fmt;

// Runs body on stdout or on DIR/name when an output directory is set.
void emit(const RunConfig& cfg, std::ostream& out, const std::string& name,
          const std::function<void(std::ostream&)>& body) {
    if (cfg.out.empty()) {
        body(out);
        return;
    }
    std::filesystem::create_directories(cfg.out);
    const auto path = std::filesystem::path(cfg.out) / name;
    std::ofstream f(path);
    if (!f) throw ParseError("cannot write '" + path.string() + "'");
    body(f);
}

struct Pipeline {
    SystemParams params;
    LimitCycle cycle;
    VariationalBase base;

    explicit Pipeline(const RunConfig& cfg) : params(cfg.params()) {
        LimitCycleSettings ls;
        ls.samples = cfg.samples;
        cycle = find_limit_cycle(params, ls);
        WronskianSettings ws;
        ws.romberg.rel_tol = cfg.romberg_rel_tol;
        base = build_variational(cycle, ws);
    }
};

void common_meta(csv::Writer& w, const RunConfig& cfg) {
    w.meta("alpha", cfg.alpha).meta("beta", cfg.beta);
}

std::string cell(double x) { return fmt(x); }
std::string cell(int x) { return std::to_string(x); }

struct Theory {
    int order = 0;  // 0: width opens beyond second order
    double coefficient = std::nan("");
    FirstOrderData first;
    bool has_first = false;
};

Theory theory(const Pipeline& P, const Forcing& f, Resonance r, const RunConfig& cfg) {
    Theory t;
    const WronskianData w = rescale(P.base, P.cycle, r.rho());
    const KernelFunctions k = kernel_functions(P.cycle, w, r);
    FirstOrderSettings fs;
    fs.tau0_points = cfg.tau0_points;
    fs.romberg.rel_tol = cfg.romberg_rel_tol;
    t.first = first_order_unchecked(P.cycle, w, k, f, fs);
    t.has_first = true;
    if (!selection_rule(r, f).empty()) {
        t.order = 1;
        t.coefficient = t.first.width;
    } else if (opens_second_order_width(second_order_selection(r, f))) {
        SecondOrderSettings ss;
        ss.tau0_points = cfg.tau0_points;
        t.order = 2;
        t.coefficient = second_order(P.cycle, w, f, r, &t.first, ss).width;
    }
    return t;
}

std::vector<double> mu_schedule(const RunConfig& cfg, double mu_max) {
    return default_mu_schedule(cfg.mu_min, mu_max, cfg.mu_points);
}

std::vector<TongueResult> scan_all(const Pipeline& P, const Forcing& f, const std::vector<Resonance>& rs,
                                   const std::vector<double>& mus, const RunConfig& cfg) {
    std::vector<TongueResult> res(rs.size());
    ScanSettings st = cfg.scan_settings();
    const int outer = std::min<int>(cfg.threads, static_cast<int>(rs.size()));
    st.threads = outer > 1 ? 1 : cfg.threads;
    parallel_for(static_cast<int>(rs.size()), outer,
                 [&](int i) { res[i] = scan_tongue(P.cycle, f, rs[i], mus, st); });
    return res;
}

void write_tongues(csv::Writer& w, const std::vector<TongueResult>& results) {
    for (const auto& t : results) {
        int gaps = 0;
        for (const auto& p : t.points) gaps += p.gap;
        w.meta("gaps_" + t.res.str(), std::to_string(gaps));
    }
    w.header({"p", "q", "mu", "omega_min", "omega_max", "width"});
    for (const auto& t : results)
        for (const auto& p : t.points)
            if (!p.gap)
                w.row({cell(t.res.p), cell(t.res.q), cell(p.mu), cell(p.omega_min), cell(p.omega_max), cell(p.width)});
}

std::map<std::pair<int, int>, DataSet> group_widths(const csv::Table& t) {
    std::map<std::pair<int, int>, DataSet> g;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const int p = static_cast<int>(t.number(i, "p")), q = static_cast<int>(t.number(i, "q"));
        g[{p, q}].emplace_back(t.number(i, "mu"), t.number(i, "width"));
    }
    return g;
}

}  // namespace

void cmd_limit_cycle(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const LimitCycle& c = P.cycle;
    emit(cfg, out, "limit_cycle.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        common_meta(w, cfg);
        w.meta("T0", c.T0).meta("U0", c.U0).meta("Omega0", c.Omega0).meta("r1", c.r1);
        w.header({"t", "u", "v"});
        for (int j = 0; j < c.u.size(); ++j) w.row(std::vector<double>{c.u.node(j), c.u[j], c.v[j]});
    });
}

void cmd_wronskian(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const Resonance r = Resonance::parse(cfg.rho);
    const WronskianData w = rescale(P.base, P.cycle, r.rho());
    emit(cfg, out, "wronskian.csv", [&](std::ostream& os) {
        csv::Writer wr(os);
        common_meta(wr, cfg);
        wr.meta("rho", r.str()).meta("f0", w.f0).meta("gamma", w.gamma).meta("A", w.A);
        wr.meta("A_romberg", w.A_romberg).meta("A_closed", w.A_closed).meta("residual_rms", w.residual_rms);
        wr.header({"tau", "w11", "a", "b", "F_tilde"});
        for (int j = 0; j < w.size(); ++j)
            wr.row(std::vector<double>{w.a.node(j), w.w11[j], w.a[j], w.b[j], w.F_tilde[j]});
    });
}

void cmd_coeffs(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const Forcing f = cfg.make_forcing();
    const Resonance r = Resonance::parse(cfg.rho);
    const WronskianData w = rescale(P.base, P.cycle, r.rho());
    const KernelFunctions k = kernel_functions(P.cycle, w, r);
    FirstOrderSettings fs;
    fs.tau0_points = cfg.tau0_points;
    fs.romberg.rel_tol = cfg.romberg_rel_tol;
    const FirstOrderData d1 = first_order_unchecked(P.cycle, w, k, f, fs);
    SecondOrderSettings ss;
    ss.tau0_points = cfg.tau0_points;
    const SecondOrderData d2 = second_order(P.cycle, w, f, r, &d1, ss);
    const double l2 = w.rho_omega * w.rho_omega;
    // Leading term: the lowest selected harmonic.
    double D1 = 0.0, D2 = 0.0;
    for (const auto& t : d1.terms)
        if (t.selected) {
            D1 = t.D1;
            D2 = t.D2;
            break;
        }
    emit(cfg, out, "coeffs.csv", [&](std::ostream& os) {
        csv::Writer wr(os);
        common_meta(wr, cfg);
        wr.meta("forcing", f.describe()).meta("rho", r.str());
        wr.header({"p", "q", "A", "D1", "D2", "M", "width1", "theta1", "theta2", "width2", "D2_mean"});
        wr.row({cell(r.p), cell(r.q), cell(w.A), cell(D1), cell(D2), cell(0.5 * d1.Q), cell(d1.width),
                cell(d1.theta1), cell(d1.theta2), cell(d2.width), cell(l2 * d2.mean)});
    });
    if (cfg.out.empty()) out << '\n';
    emit(cfg, out, "kcoeffs.csv", [&](std::ostream& os) {
        csv::Writer wr(os);
        common_meta(wr, cfg);
        wr.meta("rho", r.str());
        wr.header({"n", "K1_re", "K1_im", "K2_re", "K2_im", "abs_K1", "abs_K2"});
        for (int n = 0; n <= k.max_harmonic(); ++n) {
            const auto a = k.coefficient(1, n), b = k.coefficient(2, n);
            wr.row({cell(n), cell(a.real()), cell(a.imag()), cell(b.real()), cell(b.imag()), cell(std::abs(a)),
                    cell(std::abs(b))});
        }
    });
}

void cmd_tongues(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const Forcing f = cfg.make_forcing();
    const auto rs = cfg.resonance_list();
    const auto results = scan_all(P, f, rs, mu_schedule(cfg, cfg.mu_max), cfg);
    emit(cfg, out, "tongues.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        common_meta(w, cfg);
        w.meta("forcing", f.describe()).meta("Omega0", P.cycle.Omega0);
        write_tongues(w, results);
    });
}

void cmd_staircase(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const Forcing f = cfg.make_forcing();
    const auto [lo, hi] = cfg.omega_bounds();
    std::vector<double> om(static_cast<std::size_t>(cfg.omega_points));
    for (int i = 0; i < cfg.omega_points; ++i)
        om[i] = P.cycle.Omega0 * (cfg.omega_points == 1 ? lo : lo + (hi - lo) * i / (cfg.omega_points - 1));
    const auto pts = staircase(P.cycle, f, cfg.mu, om, cfg.scan_settings());
    emit(cfg, out, "staircase.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        common_meta(w, cfg);
        w.meta("forcing", f.describe()).meta("mu", cfg.mu).meta("Omega0", P.cycle.Omega0);
        w.header({"omega", "ratio"});
        for (const auto& p : pts) w.row(std::vector<double>{p.omega, p.unbounded ? std::nan("") : p.ratio});
    });
}

void cmd_fit(const RunConfig& cfg, std::ostream& out) {
    if (cfg.input.empty()) throw ParseError("fit needs --input FILE");
    const auto groups = group_widths(csv::read_file(cfg.input));
    emit(cfg, out, "fit.csv", [&](std::ostream& os) {
        csv::Writer w(os);
        w.meta("input", cfg.input);
        for (const auto& [pq, data] : groups) {
            try {
                const FitResult r = fit_monomial(data);
                w.meta("residual_" + std::to_string(pq.first) + ":" + std::to_string(pq.second), r.residual);
            } catch (const Error& e) {
                w.meta("skipped_" + std::to_string(pq.first) + ":" + std::to_string(pq.second), e.kind());
            }
        }
        w.header({"p", "q", "a", "b", "mu_fit", "N_fit"});
        for (const auto& [pq, data] : groups) {
            FitResult r;
            try {
                r = fit_monomial(data);
            } catch (const Error&) {
                continue;
            }
            w.row({cell(pq.first), cell(pq.second), cell(r.a), cell(r.b), cell(r.mu_fit), cell(r.N_fit)});
        }
    });
}

void cmd_report(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    const Pipeline P(cfg);
    const Forcing f = cfg.make_forcing();
    const LimitCycle& c = P.cycle;
    const WronskianData w2 = rescale(P.base, c, 2.0);
    char buf[256];
    out << "cross-check (alpha=" << cfg.alpha << ", beta=" << cfg.beta << ", rho=2)\n";
    auto line = [&](const char* name, double v, int digits) {
        std::snprintf(buf, sizeof buf, "  %s = %.*g  [%s]\n", name, digits, v, fmt(v).c_str());
        out << buf;
    };
    line("T0", c.T0, 9);
    line("Omega0", c.Omega0, 9);
    line("U0", c.U0, 12);
    line("f0", w2.f0, 12);
    line("gamma", w2.gamma, 12);
    line("A", w2.A_quadrature, 12);
    line("A_closed", w2.A_closed, 12);
    std::snprintf(buf, sizeof buf, "  A relative difference = %.3e\n",
                  std::abs(w2.A_quadrature - w2.A_closed) / std::abs(w2.A_closed));
    out << buf << '\n';

    const auto rs = cfg.resonance_list();
    std::vector<Theory> th;
    for (const auto& r : rs) th.push_back(theory(P, f, r, cfg));
    std::vector<TongueResult> scans;
    if (cfg.simulate) scans = scan_all(P, f, rs, mu_schedule(cfg, cfg.fit_mu_max), cfg);

    csv::Writer wr(out);
    wr.meta("forcing", f.describe());
    std::vector<std::string> cols{"p", "q", "order", "theory_coefficient"};
    if (cfg.simulate) {
        for (const char* s : {"sim_a", "sim_b", "mu_fit", "N_fit"}) cols.emplace_back(s);
    }
    wr.header(cols);
    for (std::size_t i = 0; i < rs.size(); ++i) {
        std::vector<std::string> row{cell(rs[i].p), cell(rs[i].q), th[i].order ? cell(th[i].order) : ">2",
                                     cell(th[i].coefficient)};
        if (cfg.simulate) {
            try {
                const FitResult fr = fit_monomial(scans[i].widths());
                for (auto s : {cell(fr.a), cell(fr.b), cell(fr.mu_fit), cell(fr.N_fit)}) row.push_back(s);
            } catch (const Error&) {
                for (int k = 0; k < 4; ++k) row.push_back("nan");
            }
        }
        wr.row(row);
    }
}

}  // namespace ilfd::cli
