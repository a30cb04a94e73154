#pragma once

#include <vector>

namespace enn {

/// One supervised pair. Classification targets are exactly +-1.
struct Sample {
    std::vector<double> x;
    double y = 0.0;

    friend bool operator==(const Sample&, const Sample&) = default;
};

} // namespace enn
