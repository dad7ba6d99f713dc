#include "ilfd/csv.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ilfd/errors.hpp"

namespace ilfd::csv {

std::string fmt(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.14e", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

Writer& Writer::meta(const std::string& key, const std::string& value) {
    os_ << "# " << key << '=' << value << '\n';
    return *this;
}

Writer& Writer::meta(const std::string& key, double value) { return meta(key, fmt(value)); }

Writer& Writer::header(const std::vector<std::string>& cols) {
    ncols_ = cols.size();
    return row(cols);
}

Writer& Writer::row(const std::vector<std::string>& cells) {
    if (ncols_ && cells.size() != ncols_) throw ParseError("csv: row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
    return *this;
}

Writer& Writer::row(const std::vector<double>& cells) {
    std::vector<std::string> s;
    s.reserve(cells.size());
    for (double x : cells) s.push_back(fmt(x));
    return row(s);
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

Table read(std::istream& is) {
    Table t;
    std::string line;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto body = line.substr(line.find_first_not_of("# "));
            const auto eq = body.find('=');
            if (eq != std::string::npos) t.meta[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        auto cells = split(line);
        if (t.columns.empty()) {
            t.columns = std::move(cells);
        } else {
            if (cells.size() != t.columns.size())
                throw ParseError("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(t.columns.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.columns.empty()) throw ParseError("csv: no header row");
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open '" + path + "'");
    return read(f);
}

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    throw ParseError("csv: missing column '" + name + "'");
}

const std::string& Table::cell(std::size_t row, const std::string& col) const {
    return rows.at(row).at(static_cast<std::size_t>(column(col)));
}

double Table::number(std::size_t row, const std::string& col) const {
    const std::string& s = cell(row, col);
    try {
        std::size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return x;
    } catch (const std::exception&) {
        throw ParseError("csv: '" + s + "' in column " + col + " is not a number");
    }
}

}  // namespace ilfd::csv
