#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace ilfd::csv {

std::string fmt(double x);  // "%.14e"

// Writes "# key=value" metadata, then a header row, then data rows.
class Writer {
public:
    explicit Writer(std::ostream& os) : os_(os) {}
    Writer& meta(const std::string& key, const std::string& value);
    Writer& meta(const std::string& key, double value);
    Writer& header(const std::vector<std::string>& cols);
    Writer& row(const std::vector<std::string>& cells);
    Writer& row(const std::vector<double>& cells);

private:
    std::ostream& os_;
    std::size_t ncols_ = 0;
};

struct Table {
    std::map<std::string, std::string> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // throws ParseError if absent
    double number(std::size_t row, const std::string& col) const;
    const std::string& cell(std::size_t row, const std::string& col) const;
};

Table read(std::istream& is);
Table read_file(const std::string& path);

}  // namespace ilfd::csv
