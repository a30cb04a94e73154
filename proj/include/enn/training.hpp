#pragma once

// Sample-wise LMS backpropagation for the two-layer network.
//
// Every update is plain gradient descent on the instantaneous loss
// L = (y - y_hat)^2 / 2 with a per-group step size:
//
//   output DCT coefficients   4 alpha_output_dct / Q
//   output linear weights     2 alpha_output_linear / P1
//   hidden DCT coefficients   4 alpha_hidden_dct / Q
//   hidden linear weights     2 alpha_hidden_linear / P0
//
// Q/2 is the (constant) power of the orthonormal cosine inputs; P0 and P1 are
// damped power estimates of [1; x] and [1; s1].

#include <cmath>
#include <iomanip>
#include <cstdint>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "enn/network.hpp"
#include "enn/random.hpp"
#include "enn/sample.hpp"

namespace enn {

struct LmsConfig {
    double alpha_hidden_dct = 1e-3;
    double alpha_output_dct = 1e-4;
    double alpha_hidden_linear = 5e-3;
    double alpha_output_linear = 5e-5;
    double beta = 0.999;
    std::size_t epochs = 1;
    std::uint64_t shuffle_seed = 0;

    /// Misadjustment bound sum; must stay below 0.1.
    double stability_sum(std::size_t retained = 6) const {
        const double r = static_cast<double>(retained);
        return r * alpha_hidden_dct + r * alpha_output_dct + alpha_hidden_linear + alpha_output_linear;
    }

    void validate() const {
        for (double a : {alpha_hidden_dct, alpha_output_dct, alpha_hidden_linear, alpha_output_linear})
            if (!(a > 0.0)) throw std::invalid_argument("LmsConfig: step sizes must be > 0");
        if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("LmsConfig: beta must be in [0, 1)");
        if (!(stability_sum() < 0.1))
            throw std::invalid_argument("LmsConfig: stability sum " + std::to_string(stability_sum()) +
                                        " is not below 0.1");
    }
};

struct PowerEstimates {
    double p0 = 3.0;
    double p1 = 6.0;
};

/// P0 = M0+1, P1 = Q/2.
template <class Act>
PowerEstimates initial_powers(const TwoLayerNetwork<Act>& model) {
    return {static_cast<double>(model.m0 + 1), static_cast<double>(model.basis.retained())};
}

inline double update_power(double p, std::span<const double> s, double beta) {
    const double energy = std::inner_product(s.begin(), s.end(), s.begin(), 0.0);
    return beta * p + (1.0 - beta) * energy;
}

class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParameterGroup { output_dct, output_linear, hidden_dct, hidden_linear };

/// Addresses one scalar parameter. `neuron` is only meaningful for hidden
/// groups; `index` is the coefficient (0-based, harmonic 2i+1), the output
/// weight (0 = bias) or the hidden-weight row (0 = bias).
struct ParameterCoordinate {
    ParameterGroup group = ParameterGroup::output_dct;
    std::size_t neuron = 0;
    std::size_t index = 0;

    friend bool operator==(const ParameterCoordinate&, const ParameterCoordinate&) = default;
};

inline std::string describe(const ParameterCoordinate& c) {
    std::ostringstream os;
    switch (c.group) {
    case ParameterGroup::output_dct: os << "output_dct[" << c.index << "]"; break;
    case ParameterGroup::output_linear: os << "output_weights[" << c.index << "]"; break;
    case ParameterGroup::hidden_dct: os << "hidden_dct[" << c.neuron << "][" << c.index << "]"; break;
    case ParameterGroup::hidden_linear: os << "hidden_weights[" << c.neuron << "][" << c.index << "]"; break;
    }
    return os.str();
}

template <class Act>
constexpr bool kAdaptive = std::is_same_v<Act, AdaptiveActivation>;

/// All coordinates that training updates for this network type.
template <class Act>
std::vector<ParameterCoordinate> trainable_parameters(const TwoLayerNetwork<Act>& model) {
    std::vector<ParameterCoordinate> out;
    if constexpr (kAdaptive<Act>)
        for (std::size_t i = 0; i < model.basis.retained(); ++i) out.push_back({ParameterGroup::output_dct, 0, i});
    for (std::size_t k = 0; k <= model.m1; ++k) out.push_back({ParameterGroup::output_linear, 0, k});
    for (std::size_t k = 0; k < model.m1; ++k) {
        if constexpr (kAdaptive<Act>)
            for (std::size_t i = 0; i < model.basis.retained(); ++i) out.push_back({ParameterGroup::hidden_dct, k, i});
        for (std::size_t r = 0; r <= model.m0; ++r) out.push_back({ParameterGroup::hidden_linear, k, r});
    }
    return out;
}

template <class Act>
double& parameter(TwoLayerNetwork<Act>& model, const ParameterCoordinate& c) {
    switch (c.group) {
    case ParameterGroup::output_linear: return model.output_weights.at(c.index);
    case ParameterGroup::hidden_linear: return model.hidden_weights.at(c.neuron * (model.m0 + 1) + c.index);
    case ParameterGroup::output_dct:
    case ParameterGroup::hidden_dct:
        if constexpr (kAdaptive<Act>) {
            auto& act = c.group == ParameterGroup::output_dct ? model.output_activation
                                                                : model.hidden_activations.at(c.neuron);
            return act.coeffs.values()[c.index];
        } else {
            throw std::invalid_argument("parameter: fixed activations have no coefficients");
        }
    }
    throw std::invalid_argument("parameter: bad group");
}

template <class Act>
double parameter(const TwoLayerNetwork<Act>& model, const ParameterCoordinate& c) {
    return parameter(const_cast<TwoLayerNetwork<Act>&>(model), c);
}

/// Step size the update rule applies to a coordinate's negative gradient.
inline double composite_step(const ParameterCoordinate& c, const LmsConfig& cfg, const PowerEstimates& powers,
                             const BasisConfig& basis) {
    const double q = static_cast<double>(basis.q);
    switch (c.group) {
    case ParameterGroup::output_dct: return 4.0 * cfg.alpha_output_dct / q;
    case ParameterGroup::output_linear: return 2.0 * cfg.alpha_output_linear / powers.p1;
    case ParameterGroup::hidden_dct: return 4.0 * cfg.alpha_hidden_dct / q;
    case ParameterGroup::hidden_linear: return 2.0 * cfg.alpha_hidden_linear / powers.p0;
    }
    return 0.0;
}

/// One synchronous LMS update from a trace of the current model. All partial
/// derivatives are taken at the pre-update parameters; the powers are
/// refreshed afterwards. Returns the error y - y_hat.
///
/// Activation coefficients are only adapted for EnnModel; benchmark networks
/// update their linear weights only.
template <class Act>
double lms_step(TwoLayerNetwork<Act>& model, const ForwardTrace& trace, double y, const LmsConfig& cfg,
                PowerEstimates& powers) {
    const double err = y - trace.y_hat;
    if (!std::isfinite(err)) throw DivergenceError("lms_step: non-finite error");

    if (err != 0.0) {
        const std::size_t m0 = model.m0;
        const std::size_t m1 = model.m1;
        // d y_hat / d z2
        const double out_slope = eval_derivative(model.output_activation, trace.z2);

        const double mu_out_lin = 2.0 * cfg.alpha_output_linear / powers.p1;
        const double mu_hid_lin = 2.0 * cfg.alpha_hidden_linear / powers.p0;
        const double q = static_cast<double>(model.basis.q);
        const double mu_out_dct = 4.0 * cfg.alpha_output_dct / q;
        const double mu_hid_dct = 4.0 * cfg.alpha_hidden_dct / q;
        const std::size_t n = model.basis.n;

        for (std::size_t k = 0; k < m1; ++k) {
            // d y_hat / d s1[k]
            const double back = out_slope * model.output_weights[k + 1];
            const double hidden_slope = eval_derivative(model.hidden_activations[k], trace.z1[k]);
            const double g_lin = mu_hid_lin * err * back * hidden_slope;
            for (std::size_t r = 0; r <= m0; ++r) model.hidden_weight(r, k) += g_lin * trace.s0[r];

            if constexpr (kAdaptive<Act>) {
                auto coeffs = model.hidden_activations[k].coeffs.values();
                const double g = mu_hid_dct * err * back;
                for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += g * cos_basis(i + 1, trace.z1[k], n);
            }
        }

        const double g_out = mu_out_lin * err * out_slope;
        for (std::size_t k = 0; k <= m1; ++k) model.output_weights[k] += g_out * trace.s1[k];

        if constexpr (kAdaptive<Act>) {
            auto coeffs = model.output_activation.coeffs.values();
            for (std::size_t i = 0; i < coeffs.size(); ++i)
                coeffs[i] += mu_out_dct * err * cos_basis(i + 1, trace.z2, n);
        }
    }

    powers.p0 = update_power(powers.p0, trace.s0, cfg.beta);
    powers.p1 = update_power(powers.p1, trace.s1, cfg.beta);
    return err;
}

/// Central difference of (y - y_hat)^2 / 2 with respect to one parameter.
template <class Act>
double finite_difference_gradient(const TwoLayerNetwork<Act>& model, std::span<const double> x, double y,
                                  const ParameterCoordinate& coord, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be > 0");
    TwoLayerNetwork<Act> probe = model;
    double& w = parameter(probe, coord);
    const double w0 = w;
    auto loss = [&] {
        const double e = y - forward(probe, x).y_hat;
        return 0.5 * e * e;
    };
    w = w0 + h;
    const double up = loss();
    w = w0 - h;
    const double down = loss();
    return (up - down) / (2.0 * h);
}

struct TrainReport {
    /// Mean of the pre-update squared error over each epoch.
    std::vector<double> epoch_mse;
    std::size_t iterations = 0;
    bool diverged = false;
    std::string diagnostic;
};

inline void write_report_csv(std::ostream& os, const TrainReport& report) {
    os << "epoch,running_mse\n" << std::setprecision(17);
    for (std::size_t e = 0; e < report.epoch_mse.size(); ++e) os << (e + 1) << ',' << report.epoch_mse[e] << '\n';
}

/// Sample-wise LMS over `cfg.epochs` seeded reshuffles of the dataset. On
/// divergence the model is rolled back to the last snapshot whose running
/// error was finite and the report is flagged.
template <class Act>
TrainReport train_network(TwoLayerNetwork<Act>& model, std::span<const Sample> data, const LmsConfig& cfg) {
    cfg.validate();
    model.validate();
    if (data.empty()) throw std::invalid_argument("train: empty dataset");

    constexpr std::size_t kSnapshotEvery = 4096;
    TrainReport report;
    PowerEstimates powers = initial_powers(model);
    Rng rng(cfg.shuffle_seed);
    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    TwoLayerNetwork<Act> snapshot = model;
    ForwardTrace trace;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(std::span<std::size_t>(order));
        double sq_sum = 0.0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const Sample& s = data[order[i]];
            forward_into(model, s.x, trace);
            const double err = s.y - trace.y_hat;
            sq_sum += err * err;
            if (!std::isfinite(sq_sum)) {
                model = snapshot;
                report.diverged = true;
                report.diagnostic = "running MSE became non-finite at epoch " + std::to_string(epoch + 1) +
                                    ", sample " + std::to_string(i + 1);
                report.epoch_mse.push_back(sq_sum / static_cast<double>(i + 1));
                return report;
            }
            lms_step(model, trace, s.y, cfg, powers);
            ++report.iterations;
            if (report.iterations % kSnapshotEvery == 0) snapshot = model;
        }
        report.epoch_mse.push_back(sq_sum / static_cast<double>(order.size()));
    }
    return report;
}

inline TrainReport train(EnnModel& model, std::span<const Sample> data, const LmsConfig& cfg) {
    return train_network(model, data, cfg);
}

inline TrainReport train_benchmark(BenchmarkModel& model, std::span<const Sample> data, const LmsConfig& cfg) {
    return train_network(model, data, cfg);
}

} // namespace enn
