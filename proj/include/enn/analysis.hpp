#pragma once

// Explainability exports on the uniform grid over [-1,1]^2: per-neuron bumps,
// the soft response surface, the hard decision map, activation curves and
// detection of duplicated (cancelling) hidden neurons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "enn/network.hpp"
#include "enn/sample.hpp"

namespace enn {

/// R x R samples, row-major with x2 varying fastest: values[i*R + j] is the
/// value at (x1_i, x2_j), x_i = -1 + 2i/(R-1).
struct GridMap {
    std::size_t resolution = 0;
    std::vector<double> values;

    static double coordinate(std::size_t i, std::size_t resolution) {
        return -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(resolution - 1);
    }
    double x(std::size_t i) const { return coordinate(i, resolution); }
    double at(std::size_t i1, std::size_t i2) const { return values[i1 * resolution + i2]; }
};

inline constexpr std::size_t kDefaultResolution = 201;

template <class F>
GridMap sample_grid_map(std::size_t resolution, F&& f) {
    if (resolution < 2) throw std::invalid_argument("grid resolution must be >= 2");
    GridMap map{resolution, std::vector<double>(resolution * resolution)};
    for (std::size_t i = 0; i < resolution; ++i)
        for (std::size_t j = 0; j < resolution; ++j)
            map.values[i * resolution + j] = f(map.x(i), map.x(j));
    return map;
}

/// Response of hidden neuron `neuron` (0-based) over the input square.
template <class Act>
GridMap bump(const TwoLayerNetwork<Act>& model, std::size_t neuron, std::size_t resolution = kDefaultResolution) {
    if (neuron >= model.m1)
        throw std::out_of_range("bump: neuron " + std::to_string(neuron) + " out of range (m1 = " +
                                std::to_string(model.m1) + ")");
    if (model.m0 != 2) throw std::invalid_argument("bump: grid exports need a two-input model");
    const auto& act = model.hidden_activations[neuron];
    return sample_grid_map(resolution, [&](double a, double b) {
        const double x[2] = {a, b};
        return eval(act, hidden_preactivation(model, neuron, x));
    });
}

template <class Act>
GridMap response_surface(const TwoLayerNetwork<Act>& model, std::size_t resolution = kDefaultResolution) {
    if (model.m0 != 2) throw std::invalid_argument("response_surface: grid exports need a two-input model");
    ForwardTrace t;
    return sample_grid_map(resolution, [&](double a, double b) {
        const double x[2] = {a, b};
        forward_into(model, x, t);
        return t.y_hat;
    });
}

template <class Act>
GridMap decision_map(const TwoLayerNetwork<Act>& model, std::size_t resolution = kDefaultResolution) {
    GridMap map = response_surface(model, resolution);
    for (double& v : map.values) v = predict_class(v);
    return map;
}

namespace detail {
inline double pearson(std::span<const double> a, std::span<const double> b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sab / std::sqrt(saa * sbb);
}
} // namespace detail

struct RedundantPair {
    std::size_t first = 0; ///< 0-based hidden neuron
    std::size_t second = 0;
    double correlation = 0.0;
    /// sign(a_2[first] * a_2[second]); -1 means the two branches cancel.
    int weight_sign = 0;
    bool cancelling = false;
};

/// Pairs of hidden neurons whose bumps have Pearson correlation >= 1 - tol.
/// Flat bumps (zero variance) have no defined correlation and are skipped.
template <class Act>
std::vector<RedundantPair> redundancy_report(const TwoLayerNetwork<Act>& model, std::size_t resolution, double tol) {
    if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("redundancy_report: tol must be in (0, 1)");
    std::vector<GridMap> bumps;
    bumps.reserve(model.m1);
    for (std::size_t k = 0; k < model.m1; ++k) bumps.push_back(bump(model, k, resolution));

    std::vector<RedundantPair> out;
    for (std::size_t j = 0; j < model.m1; ++j) {
        for (std::size_t k = j + 1; k < model.m1; ++k) {
            const double r = detail::pearson(bumps[j].values, bumps[k].values);
            if (!(r >= 1.0 - tol)) continue;
            const double prod = model.output_weights[j + 1] * model.output_weights[k + 1];
            const int sign = prod > 0.0 ? 1 : (prod < 0.0 ? -1 : 0);
            out.push_back({j, k, r, sign, sign < 0});
        }
    }
    return out;
}

inline void write_redundancy_csv(std::ostream& os, std::span<const RedundantPair> pairs) {
    os << "neuron_a,neuron_b,correlation,weight_sign,cancelling\n" << std::setprecision(17);
    for (const auto& p : pairs)
        os << (p.first + 1) << ',' << (p.second + 1) << ',' << p.correlation << ',' << p.weight_sign << ','
           << (p.cancelling ? "true" : "false") << '\n';
}

struct ActivationCurve {
    std::string name; ///< "hidden_<k>" (1-based) or "output"
    std::vector<double> z;
    std::vector<double> values;
    /// Range of the activation's input seen on the supplied dataset
    /// (NaN when no dataset was given).
    double observed_min = std::numeric_limits<double>::quiet_NaN();
    double observed_max = std::numeric_limits<double>::quiet_NaN();
};

struct CurveRange {
    double lo = -4.0;
    double hi = 4.0;
    std::size_t points = 801;
};

template <class Act>
std::vector<ActivationCurve> activation_report(const TwoLayerNetwork<Act>& model, std::span<const Sample> data = {},
                                               CurveRange range = {}) {
    if (range.points < 2 || !(range.hi > range.lo))
        throw std::invalid_argument("activation_report: need hi > lo and at least 2 points");
    std::vector<ActivationCurve> curves(model.m1 + 1);
    for (std::size_t k = 0; k <= model.m1; ++k) {
        auto& c = curves[k];
        c.name = k < model.m1 ? "hidden_" + std::to_string(k + 1) : "output";
        const auto& act = k < model.m1 ? model.hidden_activations[k] : model.output_activation;
        c.z.resize(range.points);
        c.values.resize(range.points);
        for (std::size_t i = 0; i < range.points; ++i) {
            c.z[i] = range.lo + (range.hi - range.lo) * static_cast<double>(i) / static_cast<double>(range.points - 1);
            c.values[i] = eval(act, c.z[i]);
        }
    }
    if (!data.empty()) {
        for (auto& c : curves) {
            c.observed_min = std::numeric_limits<double>::infinity();
            c.observed_max = -std::numeric_limits<double>::infinity();
        }
        ForwardTrace t;
        for (const auto& s : data) {
            forward_into(model, s.x, t);
            for (std::size_t k = 0; k <= model.m1; ++k) {
                const double z = k < model.m1 ? t.z1[k] : t.z2;
                curves[k].observed_min = std::min(curves[k].observed_min, z);
                curves[k].observed_max = std::max(curves[k].observed_max, z);
            }
        }
    }
    return curves;
}

inline void write_curve_csv(std::ostream& os, const ActivationCurve& curve) {
    os << "z,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < curve.z.size(); ++i) os << curve.z[i] << ',' << curve.values[i] << '\n';
}

inline void write_grid_csv(std::ostream& os, const GridMap& map) {
    os << "x1,x2,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < map.resolution; ++i)
        for (std::size_t j = 0; j < map.resolution; ++j) os << map.x(i) << ',' << map.x(j) << ',' << map.at(i, j) << '\n';
}

/// Binary 8-bit PGM; values mapped affinely from [min, max] to [0, 255]
/// (all zeros for a constant map). min/max go in the comment line.
inline void write_grid_pgm(std::ostream& os, const GridMap& map) {
    const auto [lo_it, hi_it] = std::minmax_element(map.values.begin(), map.values.end());
    const double lo = *lo_it;
    const double hi = *hi_it;
    os << "P5\n# min=" << std::setprecision(17) << lo << " max=" << hi << '\n'
       << map.resolution << ' ' << map.resolution << "\n255\n";
    const double span = hi - lo;
    for (double v : map.values) {
        const double scaled = span > 0.0 ? std::round(255.0 * (v - lo) / span) : 0.0;
        os.put(static_cast<char>(static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0))));
    }
}

} // namespace enn
