#pragma once

// Finite-difference audit of the closed-form LMS rules. For each random
// (model, sample) draw, every parameter delta produced by one LMS step is
// turned back into a gradient (delta / -step) and compared with the central
// difference of (y - y_hat)^2 / 2.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "enn/network.hpp"
#include "enn/random.hpp"
#include "enn/training.hpp"

namespace enn {

struct GradientCheckOptions {
    double h = 1e-6;
    double tolerance = 1e-5;
    /// Gradients below this magnitude are compared absolutely.
    double scale_floor = 1e-3;
};

struct GradientCheckResult {
    std::size_t trials = 0;
    std::size_t comparisons = 0;
    double max_deviation = 0.0;
    std::size_t worst_trial = 0;
    ParameterCoordinate worst;
    double worst_analytic = 0.0;
    double worst_numeric = 0.0;
    bool passed = true;
};

inline double gradient_deviation(double analytic, double numeric, double floor) {
    return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

/// Random but well-conditioned ENN: perturbed identity activations, weights
/// wide enough that pre-activations leave [-1, 1].
inline EnnModel random_enn(Rng& rng, BasisConfig basis = {}, std::size_t m1 = 6) {
    EnnModel model = init_model(2, m1, basis, 0);
    for (double& w : model.hidden_weights) w = rng.uniform(-1.5, 1.5);
    for (double& w : model.output_weights) w = rng.uniform(-1.0, 1.0);
    auto perturb = [&](AdaptiveActivation& act) {
        for (double& f : act.coeffs.values()) f += rng.uniform(-0.3, 0.3);
    };
    for (auto& act : model.hidden_activations) perturb(act);
    perturb(model.output_activation);
    return model;
}

struct LmsStep {
    template <class Act>
    double operator()(TwoLayerNetwork<Act>& model, const ForwardTrace& trace, double y, const LmsConfig& cfg,
                      PowerEstimates& powers) const {
        return lms_step(model, trace, y, cfg, powers);
    }
};

/// Compares one LMS step on `model` against finite differences. Coordinates
/// for which `skip(model, trace)` holds are ignored (ReLU kinks).
template <class Act, class Step = LmsStep>
void check_one(const TwoLayerNetwork<Act>& model, std::span<const double> x, double y, const LmsConfig& cfg,
               const PowerEstimates& powers, std::size_t trial, const GradientCheckOptions& opt,
               GradientCheckResult& result, Step step = {}) {
    const ForwardTrace trace = forward(model, x);
    TwoLayerNetwork<Act> updated = model;
    PowerEstimates p = powers;
    step(updated, trace, y, cfg, p);

    for (const auto& coord : trainable_parameters(model)) {
        const double mu = composite_step(coord, cfg, powers, model.basis);
        const double delta = parameter(updated, coord) - parameter(model, coord);
        const double analytic = -delta / mu;
        const double numeric = finite_difference_gradient(model, x, y, coord, opt.h);
        const double dev = gradient_deviation(analytic, numeric, opt.scale_floor);
        ++result.comparisons;
        if (std::isnan(dev) || dev > result.max_deviation || result.comparisons == 1) {
            result.max_deviation = std::isnan(dev) ? std::numeric_limits<double>::infinity() : dev;
            result.worst_trial = trial;
            result.worst = coord;
            result.worst_analytic = analytic;
            result.worst_numeric = numeric;
        }
    }
    result.passed = result.max_deviation < opt.tolerance;
}

/// `trials` random ENN draws from `seed`; each compares every parameter.
template <class Step = LmsStep>
GradientCheckResult gradient_check(std::uint64_t seed, std::size_t trials, const GradientCheckOptions& opt = {},
                                   Step step = {}) {
    Rng rng(seed);
    GradientCheckResult result;
    const LmsConfig cfg;
    for (std::size_t t = 0; t < trials; ++t) {
        const EnnModel model = random_enn(rng);
        const double x[2] = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double y = rng.uniform(-1.0, 1.0);
        const PowerEstimates powers{rng.uniform(1.0, 3.0), rng.uniform(1.0, 6.0)};
        check_one(model, x, y, cfg, powers, t, opt, result, step);
        ++result.trials;
    }
    return result;
}

} // namespace enn
