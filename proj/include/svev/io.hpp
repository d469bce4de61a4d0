#pragma once

#include <map>
#include <string>
#include <vector>

namespace svev {

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_double(double v);
double parse_double(const std::string& s, const std::string& what);
long parse_long(const std::string& s, const std::string& what);

// "key=value" per line; '#' starts a comment; blank lines ignored.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_value_file(const std::string& path);
void write_key_value_file(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
void write_csv(const std::string& path, const CsvTable& t);
CsvTable read_csv(const std::string& path);

struct GridSpec {
    double min = 0.0;
    double max = 1.0;
    int count = 2;
    bool log = false;
};
std::vector<double> make_grid(const GridSpec& g);

}  // namespace svev
