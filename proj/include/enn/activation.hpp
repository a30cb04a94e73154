#pragma once

#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "enn/dct.hpp"

namespace enn {

/// Trainable nonlinearity: a truncated odd-harmonic cosine series.
struct AdaptiveActivation {
    DctCoefficients coeffs;

    friend bool operator==(const AdaptiveActivation&, const AdaptiveActivation&) = default;
};

enum class FixedKind { relu, sigmoid, identity };

struct FixedActivation {
    FixedKind kind = FixedKind::identity;

    friend bool operator==(const FixedActivation&, const FixedActivation&) = default;
};

/// Either kind; used by benchmark networks whose activations are never trained.
using Activation = std::variant<AdaptiveActivation, FixedActivation>;

/// Slope of the zero-centred benchmark sigmoid 2/(1+e^{-k z}) - 1.
inline constexpr double kSigmoidSlope = 4.0;

inline double centered_sigmoid(double z, double slope = kSigmoidSlope) {
    return 2.0 / (1.0 + std::exp(-slope * z)) - 1.0;
}

inline std::string_view to_string(FixedKind kind) {
    switch (kind) {
    case FixedKind::relu: return "relu";
    case FixedKind::sigmoid: return "sigmoid";
    case FixedKind::identity: return "identity";
    }
    return "?";
}

inline FixedKind fixed_kind_from_string(std::string_view name) {
    if (name == "relu") return FixedKind::relu;
    if (name == "sigmoid") return FixedKind::sigmoid;
    if (name == "identity") return FixedKind::identity;
    throw std::invalid_argument("unknown fixed activation `" + std::string(name) + "`");
}

inline double eval(const AdaptiveActivation& act, double z) { return synthesize(act.coeffs, z); }

inline double eval_derivative(const AdaptiveActivation& act, double z) {
    return synthesize_derivative(act.coeffs, z);
}

inline double eval(const FixedActivation& act, double z) {
    switch (act.kind) {
    case FixedKind::relu: return z > 0.0 ? z : 0.0;
    case FixedKind::sigmoid: return centered_sigmoid(z);
    case FixedKind::identity: return z;
    }
    return 0.0;
}

// ReLU'(0) := 0.
inline double eval_derivative(const FixedActivation& act, double z) {
    switch (act.kind) {
    case FixedKind::relu: return z > 0.0 ? 1.0 : 0.0;
    case FixedKind::sigmoid: {
        const double s = centered_sigmoid(z);
        return 0.5 * kSigmoidSlope * (1.0 - s * s);
    }
    case FixedKind::identity: return 1.0;
    }
    return 0.0;
}

inline double eval(const Activation& act, double z) {
    return std::visit([z](const auto& a) { return eval(a, z); }, act);
}

inline double eval_derivative(const Activation& act, double z) {
    return std::visit([z](const auto& a) { return eval_derivative(a, z); }, act);
}

/// DCT fit of f(x) = x on [-1, 1].
inline AdaptiveActivation identity_init(BasisConfig config) {
    return {analyze_function([](double x) { return x; }, config).coeffs};
}

/// DCT fit of the zero-centred sigmoid; periodic outside [-1, 1] where the
/// analytic sigmoid saturates.
inline AdaptiveActivation sigmoid_dct_init(BasisConfig config, double slope = kSigmoidSlope) {
    if (!(slope > 0.0)) throw std::invalid_argument("sigmoid_dct_init: slope must be > 0");
    return {analyze_function([slope](double x) { return centered_sigmoid(x, slope); }, config).coeffs};
}

/// Writes `z,value` rows for `points` evenly spaced z in [lo, hi].
template <class Act>
void write_curve_csv(std::ostream& os, const Act& act, double lo, double hi, std::size_t points) {
    if (points < 2) throw std::invalid_argument("write_curve_csv: need at least 2 points");
    os << "z,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < points; ++i) {
        const double z = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        os << z << ',' << eval(act, z) << '\n';
    }
}

} // namespace enn
