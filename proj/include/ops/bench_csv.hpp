#pragma once

// CSV schema for experiment results.  Header is fixed; seconds are printed
// with max_digits10 precision so a parsed file reproduces the rows exactly.

#include <cstdint>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ops/calendar.hpp"

namespace ops {

struct ResultRow {
    std::string instance;
    std::string method;
    int run = 0;
    std::uint64_t seed = 0;
    Time makespan = 0;
    double seconds = 0.0;
    std::uint64_t iterations = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kResultsHeader = "instance,method,run,seed,makespan,seconds,iterations";

inline std::string results_to_csv(const std::vector<ResultRow>& rows) {
    std::ostringstream out;
    out << kResultsHeader << '\n';
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    for (const auto& r : rows)
        out << r.instance << ',' << r.method << ',' << r.run << ',' << r.seed << ',' << r.makespan
            << ',' << r.seconds << ',' << r.iterations << '\n';
    return out.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char ch : line) {
        if (ch == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(field);
    return fields;
}

inline std::vector<ResultRow> results_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kResultsHeader)
        throw std::runtime_error("results csv: unexpected header");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 7) throw std::runtime_error("results csv: malformed row: " + line);
        ResultRow r;
        r.instance = f[0];
        r.method = f[1];
        r.run = std::stoi(f[2]);
        r.seed = std::stoull(f[3]);
        r.makespan = std::stoll(f[4]);
        r.seconds = std::stod(f[5]);
        r.iterations = std::stoull(f[6]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace ops
