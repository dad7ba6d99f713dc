#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "ilfd/csv.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out, err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Run run(const std::string& args) {
    static int counter = 0;
    const fs::path dir = ILFD_TEST_TMP;
    fs::create_directories(dir);
    const std::string tag = std::to_string(counter++);
    const fs::path o = dir / ("out" + tag), e = dir / ("err" + tag);
    const std::string cmd = std::string(ILFD_CLI_PATH) + " " + args + " >" + o.string() + " 2>" + e.string();
    const int st = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

fs::path tmp(const std::string& name) { return fs::path(ILFD_TEST_TMP) / name; }

}  // namespace

TEST_CASE("report contains the cross-check block") {
    const Run r = run("report --alpha 5 --beta 4 --forcing sin");
    REQUIRE(r.code == 0);
    CHECK(r.out.find("T0 = 3.69893987") != std::string::npos);
    CHECK(r.out.find("A_closed") != std::string::npos);
    CHECK(r.out.find("theory_coefficient") != std::string::npos);
}

TEST_CASE("parameter and parse errors exit 1") {
    const Run r = run("limit-cycle --alpha 4 --beta 5");
    CHECK(r.code == 1);
    CHECK(r.err.find("requires alpha > beta > 1") != std::string::npos);
    CHECK(r.err.find("kind=InvalidParams") != std::string::npos);

    const Run u = run("limit-cycle --no-such-option 3");
    CHECK(u.code == 1);
    CHECK(u.err.find("kind=ParseError") != std::string::npos);

    CHECK(run("coeffs --rho 2:4").code == 1);
    CHECK(run("coeffs --forcing cosine").code == 1);
    CHECK(run("").code == 1);
}

TEST_CASE("numerical failure exits 2") {
    const Run r = run("coeffs --rho 2 --romberg-rel-tol 1e-300");
    CHECK(r.code == 2);
    CHECK(r.err.find("kind=NoConvergence") != std::string::npos);
}

TEST_CASE("limit cycle and wronskian output") {
    const Run r = run("limit-cycle");
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    const ilfd::csv::Table t = ilfd::csv::read(is);
    CHECK(std::stod(t.meta.at("T0")) == doctest::Approx(3.698939867513906).epsilon(1e-12));
    CHECK(t.rows.size() == 151);

    const Run w = run("wronskian --rho 2");
    REQUIRE(w.code == 0);
    std::istringstream iw(w.out);
    const ilfd::csv::Table tw = ilfd::csv::read(iw);
    CHECK(std::stod(tw.meta.at("gamma")) == doctest::Approx(-54.855909271256).epsilon(1e-8));
    CHECK(tw.column("w11") >= 0);
}

TEST_CASE("coefficients are deterministic and match the first-order slope") {
    const fs::path d1 = tmp("c1"), d2 = tmp("c2");
    REQUIRE(run("coeffs --rho 2 --out " + d1.string()).code == 0);
    REQUIRE(run("coeffs --rho 2 --threads 3 --out " + d2.string()).code == 0);
    for (const char* f : {"coeffs.csv", "kcoeffs.csv"}) {
        REQUIRE(fs::exists(d1 / f));
        CHECK(slurp(d1 / f) == slurp(d2 / f));
    }
    const ilfd::csv::Table t = ilfd::csv::read_file((d1 / "coeffs.csv").string());
    CHECK(t.number(0, "width1") == doctest::Approx(0.7556989).epsilon(1e-6));
    CHECK(t.number(0, "M") == doctest::Approx(0.0327381).epsilon(1e-5));
}

TEST_CASE("tongues to fit round trip") {
    const fs::path d1 = tmp("t1"), d2 = tmp("t2");
    const std::string args = "tongues --resonances 2:1 --mu-min 0.005 --mu-max 0.05 --mu-points 10 --threads 2 --out ";
    REQUIRE(run(args + d1.string()).code == 0);
    REQUIRE(run(args + d2.string()).code == 0);
    const fs::path csv = d1 / "tongues.csv";
    REQUIRE(fs::exists(csv));
    CHECK(slurp(csv) == slurp(d2 / "tongues.csv"));

    const Run f = run("fit --input " + csv.string());
    REQUIRE(f.code == 0);
    std::istringstream is(f.out);
    const ilfd::csv::Table t = ilfd::csv::read(is);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.cell(0, "p") == "2");
    CHECK(t.number(0, "a") == doctest::Approx(0.7556).epsilon(0.05));
    CHECK(std::abs(t.number(0, "b") - 1.0) < 0.03);
    CHECK(t.number(0, "N_fit") == 10);
}

TEST_CASE("staircase output") {
    const Run r = run("staircase --mu 0.1 --omega-range 1.95,2.05 --omega-points 5");
    REQUIRE(r.code == 0);
    std::istringstream is(r.out);
    const ilfd::csv::Table t = ilfd::csv::read(is);
    REQUIRE(t.rows.size() == 5);
    CHECK(t.number(2, "ratio") == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("config file with flag override") {
    const fs::path cfg = tmp("bad.cfg");
    fs::create_directories(cfg.parent_path());
    std::ofstream(cfg) << "alpha=4\nbeta=5\n";
    CHECK(run("limit-cycle --config " + cfg.string()).code == 1);
    const Run ok = run("limit-cycle --config " + cfg.string() + " --alpha 5 --beta 4");
    CHECK(ok.code == 0);
    CHECK(ok.out.find("3.6989398675") != std::string::npos);
}
