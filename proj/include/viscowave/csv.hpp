#pragma once

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "viscowave/acoustics.hpp"
#include "viscowave/error.hpp"

namespace viscowave {

inline constexpr const char* kCurveHeader = "omega,kappa_R,kappa_I,atten,phase_velocity";

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline void write_curve_csv(std::ostream& os, const AttenuationCurve& c) {
    os << kCurveHeader << '\n';
    for (const auto& r : c.rows) {
        os << format_number(r.omega) << ',' << format_number(r.kappa_R) << ',' << format_number(r.kappa_I) << ','
           << format_number(r.atten) << ',' << format_number(r.phase_velocity) << '\n';
    }
}

inline void write_signal_csv(std::ostream& os, const GreenSignal& s) {
    os << "t,u\n";
    for (std::size_t i = 0; i < s.u.size(); ++i) os << format_number(s.t[i]) << ',' << format_number(s.u[i]) << '\n';
}

/// Reads the five-column curve format; the header row is required.
inline AttenuationCurve read_curve_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw SchemaError("curve CSV is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCurveHeader) throw SchemaError("curve CSV header must be '" + std::string(kCurveHeader) + "'");
    AttenuationCurve c;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str() || *end != '\0')
                throw SchemaError("curve CSV line " + std::to_string(lineno) + ": bad number '" + cell + "'");
            f.push_back(v);
        }
        if (f.size() != 5) throw SchemaError("curve CSV line " + std::to_string(lineno) + ": expected 5 columns");
        c.rows.push_back({f[0], f[1], f[2], f[3], f[4]});
    }
    return c;
}

} // namespace viscowave
