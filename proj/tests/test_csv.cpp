#include <sstream>

#include "doctest.h"
#include "ilfd/csv.hpp"
#include "ilfd/errors.hpp"

using namespace ilfd;

TEST_CASE("number formatting") {
    CHECK(csv::fmt(1.0) == "1.00000000000000e+00");
    CHECK(csv::fmt(-0.0327381) == "-3.27381000000000e-02");
    CHECK(std::stod(csv::fmt(0.1)) == 0.1);
}

TEST_CASE("write and read back") {
    std::ostringstream os;
    csv::Writer(os).meta("alpha", 5.0).meta("forcing", "sin").header({"p", "q", "mu", "width"}).row(
        std::vector<std::string>{"2", "1", csv::fmt(0.01), csv::fmt(0.007557)});
    std::istringstream is(os.str());
    const csv::Table t = csv::read(is);
    CHECK(t.meta.at("forcing") == "sin");
    CHECK(std::stod(t.meta.at("alpha")) == 5.0);
    REQUIRE(t.rows.size() == 1);
    CHECK(t.column("mu") == 2);
    CHECK(t.number(0, "width") == 0.007557);
    CHECK(t.cell(0, "p") == "2");
    CHECK_THROWS_AS(t.column("nope"), ParseError);
}

TEST_CASE("malformed input") {
    std::ostringstream os;
    csv::Writer w(os);
    w.header({"a", "b"});
    CHECK_THROWS(w.row(std::vector<double>{1.0}));
    std::istringstream bad("a,b\n1\n");
    CHECK_THROWS_AS(csv::read(bad), ParseError);
    std::istringstream text("a,b\n1,x\n");
    const csv::Table t = csv::read(text);
    CHECK_THROWS_AS(t.number(0, "b"), ParseError);
    CHECK_THROWS_AS(csv::read_file("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("negative zero prints as zero") { CHECK(csv::fmt(-0.0) == "0.00000000000000e+00"); }
