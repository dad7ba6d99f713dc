#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"
#include "ilfd/errors.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& msg) {
    std::cerr << "error: kind=" << kind << " message=" << msg << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace ilfd::cli;
    RunConfig cfg;
    CLI::App app{"Frequency locking of a driven Lienard oscillator"};
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--alpha", cfg.alpha);
    app.add_option("--beta", cfg.beta);
    app.add_option("--forcing", cfg.forcing, "sin | poisson:lambda=L | series:1=c1,3=c3");
    app.add_option("--resonances", cfg.resonances, "comma-separated p:q list");
    app.add_option("--rho", cfg.rho, "resonance p/q for coeffs and wronskian");
    app.add_option("--samples", cfg.samples, "interpolation nodes per period (odd)");
    app.add_option("--tau0-points", cfg.tau0_points);
    app.add_option("--mu", cfg.mu, "drive amplitude for staircase");
    app.add_option("--mu-min", cfg.mu_min);
    app.add_option("--mu-max", cfg.mu_max);
    app.add_option("--mu-points", cfg.mu_points);
    app.add_option("--omega-range", cfg.omega_range, "lo,hi in units of Omega0");
    app.add_option("--omega-points", cfg.omega_points);
    app.add_option("--romberg-rel-tol", cfg.romberg_rel_tol);
    app.add_option("--lock-tol", cfg.lock_tol);
    app.add_option("--bisect-tol", cfg.bisect_tol, "boundary tolerance in units of Omega0");
    app.add_option("--steps-per-period", cfg.steps_per_period);
    app.add_option("--threads", cfg.threads);
    app.add_option("--out", cfg.out, "output directory (default: stdout)");
    app.add_option("--input", cfg.input, "tongues CSV for fit");
    app.add_flag("--simulate", cfg.simulate, "report: also scan and fit the tongues");
    app.add_option("--fit-mu-max", cfg.fit_mu_max, "report --simulate: largest mu scanned");

    struct Cmd {
        const char* name;
        const char* help;
        void (*run)(const RunConfig&, std::ostream&);
    };
    const Cmd cmds[] = {
        {"limit-cycle", "unperturbed limit cycle samples", cmd_limit_cycle},
        {"wronskian", "Floquet data at --rho", cmd_wronskian},
        {"coeffs", "kernel coefficients and width predictions at --rho", cmd_coeffs},
        {"tongues", "simulated tongue boundaries", cmd_tongues},
        {"staircase", "measured frequency ratio over an omega grid", cmd_staircase},
        {"fit", "monomial fits of a tongues CSV", cmd_fit},
        {"report", "cross-check block and width table", cmd_report},
    };
    for (const auto& c : cmds) app.add_subcommand(c.name, c.help);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        return fail(1, "ParseError", e.what());
    }

    try {
        for (const auto& c : cmds)
            if (app.got_subcommand(c.name)) c.run(cfg, std::cout);
    } catch (const ilfd::InvalidParams& e) {
        return fail(1, e.kind(), e.what());
    } catch (const ilfd::ParseError& e) {
        return fail(1, e.kind(), e.what());
    } catch (const ilfd::Error& e) {
        return fail(2, e.kind(), e.what());
    } catch (const std::exception& e) {
        return fail(2, "Internal", e.what());
    }
    return 0;
}
