#pragma once

// Shared helpers for the test binaries: golden-file access and random draws.

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "enn/dct.hpp"

namespace enn::test {

inline std::string golden_path(const std::string& name) { return std::string(ENN_GOLDEN_DIR) + "/" + name; }

/// scalars.csv as name -> value.
inline const std::map<std::string, double>& golden_scalars() {
    static const std::map<std::string, double> values = [] {
        std::ifstream in(golden_path("scalars.csv"));
        if (!in) throw std::runtime_error("missing golden scalars");
        std::map<std::string, double> out;
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            if (comma == std::string::npos) continue;
            out[line.substr(0, comma)] = std::stod(line.substr(comma + 1));
        }
        return out;
    }();
    return values;
}

inline double golden(const std::string& name) { return golden_scalars().at(name); }

inline DctCoefficients golden_coefficients(const std::string& file, BasisConfig config) {
    return read_coefficients_csv(golden_path(file), config);
}

} // namespace enn::test
