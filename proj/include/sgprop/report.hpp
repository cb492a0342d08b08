#pragma once

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace sgprop {

// One table row: mirrors the "time-steps & matvecs & Relative L2 Error"
// layout plus run metadata.
struct RunReport {
    std::string method;   // semiglobal | rk4 | rk45
    std::string example;  // advection | oscillator | gpe
    int steps = 0;
    int m = 0;  // semiglobal only
    int k = 0;  // semiglobal only
    std::int64_t matvecs = 0;
    double rel_l2_error = std::numeric_limits<double>::quiet_NaN();
    double wall_seconds = 0.0;
    std::string status = "ok";
};

inline std::string csv_header() {
    return "method,example,steps,m,k,matvecs,rel_l2_error,wall_seconds,status";
}

inline std::string to_csv_row(const RunReport& r) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), "%s,%s,%d,%d,%d,%" PRId64 ",%.17g,%.17g,%s",
                  r.method.c_str(), r.example.c_str(), r.steps, r.m, r.k, r.matvecs,
                  r.rel_l2_error, r.wall_seconds, r.status.c_str());
    return buf;
}

inline std::string to_csv(const std::vector<RunReport>& rows) {
    std::string out = csv_header();
    out += '\n';
    for (const auto& r : rows) {
        out += to_csv_row(r);
        out += '\n';
    }
    return out;
}

inline std::vector<RunReport> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != csv_header())
        throw std::invalid_argument("parse_csv: missing or wrong header");
    std::vector<RunReport> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) f.push_back(field);
        if (f.size() != 9) throw std::invalid_argument("parse_csv: bad row: " + line);
        RunReport r;
        r.method = f[0];
        r.example = f[1];
        r.steps = std::stoi(f[2]);
        r.m = std::stoi(f[3]);
        r.k = std::stoi(f[4]);
        r.matvecs = std::stoll(f[5]);
        r.rel_l2_error = std::stod(f[6]);
        r.wall_seconds = std::stod(f[7]);
        r.status = f[8];
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace sgprop
