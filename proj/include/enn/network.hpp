#pragma once

// Two-layer network  y = sigma_2( a_2^T [1; sigma_1( A_1^T [1; x] )] )  with
// one activation per hidden neuron and one at the output.

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "enn/activation.hpp"
#include "enn/random.hpp"

namespace enn {

enum class TaskKind { classification, regression };

/// Network family: the adaptive model and the three fixed-activation benchmarks.
enum class ModelKind { enn, relu, sigm, fdct };

inline std::string_view to_string(ModelKind kind) {
    switch (kind) {
    case ModelKind::enn: return "enn";
    case ModelKind::relu: return "relu";
    case ModelKind::sigm: return "sigm";
    case ModelKind::fdct: return "fdct";
    }
    return "?";
}

inline ModelKind model_kind_from_string(std::string_view name) {
    if (name == "enn") return ModelKind::enn;
    if (name == "relu") return ModelKind::relu;
    if (name == "sigm") return ModelKind::sigm;
    if (name == "fdct") return ModelKind::fdct;
    throw std::invalid_argument("unknown model kind `" + std::string(name) + "`");
}

template <class Act>
struct TwoLayerNetwork {
    std::size_t m0 = 2;
    std::size_t m1 = 6;
    BasisConfig basis;
    /// (m0+1) x m1, column-major: column k holds the bias (row 0) and input
    /// weights of hidden neuron k.
    std::vector<double> hidden_weights;
    /// m1+1 entries, bias first.
    std::vector<double> output_weights;
    std::vector<Act> hidden_activations;
    Act output_activation;

    double& hidden_weight(std::size_t row, std::size_t neuron) {
        return hidden_weights[neuron * (m0 + 1) + row];
    }
    double hidden_weight(std::size_t row, std::size_t neuron) const {
        return hidden_weights[neuron * (m0 + 1) + row];
    }
    std::span<const double> hidden_column(std::size_t neuron) const {
        return std::span<const double>(hidden_weights).subspan(neuron * (m0 + 1), m0 + 1);
    }

    void validate() const {
        if (m0 < 1 || m1 < 1) throw std::invalid_argument("network: m0 and m1 must be >= 1");
        if (hidden_weights.size() != (m0 + 1) * m1)
            throw std::invalid_argument("network: hidden weight matrix must be (m0+1) x m1");
        if (output_weights.size() != m1 + 1)
            throw std::invalid_argument("network: output weights must have m1+1 entries");
        if (hidden_activations.size() != m1)
            throw std::invalid_argument("network: need one hidden activation per neuron");
    }

    friend bool operator==(const TwoLayerNetwork&, const TwoLayerNetwork&) = default;
};

using EnnModel = TwoLayerNetwork<AdaptiveActivation>;
using BenchmarkModel = TwoLayerNetwork<Activation>;

struct ForwardTrace {
    std::vector<double> s0; ///< [1, x...]
    std::vector<double> z1; ///< hidden pre-activations
    std::vector<double> s1; ///< [1, hidden outputs...]
    double z2 = 0.0;
    double y_hat = 0.0;

    friend bool operator==(const ForwardTrace&, const ForwardTrace&) = default;
};

/// Hidden pre-activation of one neuron, a_1^{(k)T} [1; x].
template <class Act>
double hidden_preactivation(const TwoLayerNetwork<Act>& model, std::size_t neuron,
                            std::span<const double> x) {
    const auto col = model.hidden_column(neuron);
    double z = col[0];
    for (std::size_t i = 0; i < model.m0; ++i) z += col[i + 1] * x[i];
    return z;
}

template <class Act>
void forward_into(const TwoLayerNetwork<Act>& model, std::span<const double> x, ForwardTrace& t) {
    if (x.size() != model.m0)
        throw std::invalid_argument("forward: input has " + std::to_string(x.size()) +
                                    " entries, model expects " + std::to_string(model.m0));
    t.s0.resize(model.m0 + 1);
    t.z1.resize(model.m1);
    t.s1.resize(model.m1 + 1);
    t.s0[0] = 1.0;
    for (std::size_t i = 0; i < model.m0; ++i) t.s0[i + 1] = x[i];

    t.s1[0] = 1.0;
    double z2 = model.output_weights[0];
    for (std::size_t k = 0; k < model.m1; ++k) {
        const auto col = model.hidden_column(k);
        double z = 0.0;
        for (std::size_t i = 0; i <= model.m0; ++i) z += col[i] * t.s0[i];
        t.z1[k] = z;
        t.s1[k + 1] = eval(model.hidden_activations[k], z);
        z2 += model.output_weights[k + 1] * t.s1[k + 1];
    }
    t.z2 = z2;
    t.y_hat = eval(model.output_activation, z2);
}

template <class Act>
ForwardTrace forward(const TwoLayerNetwork<Act>& model, std::span<const double> x) {
    ForwardTrace t;
    forward_into(model, x, t);
    return t;
}

template <class Act>
double predict(const TwoLayerNetwork<Act>& model, std::span<const double> x) {
    return forward(model, x).y_hat;
}

/// Hard decision; ties go to +1.
inline int predict_class(double y_hat) { return y_hat >= 0.0 ? 1 : -1; }

/// Hidden-weight directions used at initialization, cycled over neurons.
/// Bias entries are zero.
inline constexpr std::array<std::array<double, 3>, 6> kInitDirections{{
    {0.0, 0.0, 1.0},
    {0.0, 1.0, 0.0},
    {0.0, 1.0, -1.0},
    {0.0, -1.0, 1.0},
    {0.0, 1.0, 1.0},
    {0.0, -1.0, -1.0},
}};

/// Identity-initialized activations everywhere, hidden columns cycled through
/// kInitDirections (M0 = 2) or unit vectors (other M0), output weights
/// (bias included) uniform on [-0.5, 0.5].
inline EnnModel init_model(std::size_t m0, std::size_t m1, BasisConfig basis, std::uint64_t seed) {
    if (m0 < 1 || m1 < 1) throw std::invalid_argument("init_model: m0 and m1 must be >= 1");
    basis.validate();
    EnnModel model;
    model.m0 = m0;
    model.m1 = m1;
    model.basis = basis;
    model.hidden_weights.assign((m0 + 1) * m1, 0.0);
    for (std::size_t k = 0; k < m1; ++k) {
        if (m0 == 2) {
            const auto& dir = kInitDirections[k % kInitDirections.size()];
            for (std::size_t r = 0; r < 3; ++r) model.hidden_weight(r, k) = dir[r];
        } else {
            model.hidden_weight(1 + k % m0, k) = 1.0;
        }
    }
    Rng rng(seed);
    model.output_weights.resize(m1 + 1);
    for (double& w : model.output_weights) w = rng.uniform(-0.5, 0.5);

    const AdaptiveActivation ident = identity_init(basis);
    model.hidden_activations.assign(m1, ident);
    model.output_activation = ident;
    return model;
}

/// Same weights as init_model(); activations per benchmark family. The output
/// activation is the sigmoid (classification) or identity (regression);
/// F-DCT uses the frozen DCT sigmoid wherever the others use the sigmoid.
inline BenchmarkModel make_benchmark(ModelKind kind, TaskKind task, std::size_t m0, std::size_t m1,
                                     BasisConfig basis, std::uint64_t seed) {
    const EnnModel base = init_model(m0, m1, basis, seed);
    BenchmarkModel model;
    model.m0 = base.m0;
    model.m1 = base.m1;
    model.basis = base.basis;
    model.hidden_weights = base.hidden_weights;
    model.output_weights = base.output_weights;

    const Activation identity = FixedActivation{FixedKind::identity};
    Activation hidden;
    Activation squash;
    switch (kind) {
    case ModelKind::relu:
        hidden = FixedActivation{FixedKind::relu};
        squash = FixedActivation{FixedKind::sigmoid};
        break;
    case ModelKind::sigm:
        hidden = FixedActivation{FixedKind::sigmoid};
        squash = FixedActivation{FixedKind::sigmoid};
        break;
    case ModelKind::fdct:
        hidden = sigmoid_dct_init(basis);
        squash = hidden;
        break;
    case ModelKind::enn:
        throw std::invalid_argument("make_benchmark: the adaptive model is built by init_model");
    }
    model.hidden_activations.assign(m1, hidden);
    model.output_activation = task == TaskKind::classification ? squash : identity;
    return model;
}

inline BenchmarkModel as_benchmark(const EnnModel& model) {
    BenchmarkModel out;
    out.m0 = model.m0;
    out.m1 = model.m1;
    out.basis = model.basis;
    out.hidden_weights = model.hidden_weights;
    out.output_weights = model.output_weights;
    out.hidden_activations.assign(model.hidden_activations.begin(), model.hidden_activations.end());
    out.output_activation = model.output_activation;
    return out;
}

// ---------------------------------------------------------------------------
// JSON snapshots. Numbers are written in shortest round-trip form, so
// load -> save reproduces the document exactly.

namespace detail {

inline std::string activation_tag(const Activation& act) {
    if (const auto* fixed = std::get_if<FixedActivation>(&act)) return std::string(to_string(fixed->kind));
    return "dct";
}
inline std::string activation_tag(const AdaptiveActivation&) { return "dct"; }

inline const DctCoefficients* coefficients_of(const Activation& act) {
    if (const auto* a = std::get_if<AdaptiveActivation>(&act)) return &a->coeffs;
    return nullptr;
}
inline const DctCoefficients* coefficients_of(const AdaptiveActivation& act) { return &act.coeffs; }

inline std::vector<double> to_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

inline Activation activation_from(const std::string& tag, const nlohmann::json* coeffs, BasisConfig basis) {
    if (tag == "dct") {
        if (coeffs == nullptr || !coeffs->is_array())
            throw std::invalid_argument("model JSON: dct activation without coefficients");
        return AdaptiveActivation{DctCoefficients(basis, coeffs->get<std::vector<double>>())};
    }
    return FixedActivation{fixed_kind_from_string(tag)};
}

} // namespace detail

template <class Act>
nlohmann::json to_json(const TwoLayerNetwork<Act>& model, std::string_view kind = "enn") {
    model.validate();
    nlohmann::json j;
    j["model"] = kind;
    j["m0"] = model.m0;
    j["m1"] = model.m1;
    j["n"] = model.basis.n;
    j["q"] = model.basis.q;
    j["hidden_weights"] = model.hidden_weights;
    j["output_weights"] = model.output_weights;

    const std::string hidden_tag = detail::activation_tag(model.hidden_activations.front());
    nlohmann::json hidden_coeffs = nlohmann::json::array();
    for (const auto& act : model.hidden_activations) {
        if (detail::activation_tag(act) != hidden_tag)
            throw std::invalid_argument("model JSON: hidden activations must share one kind");
        if (const auto* c = detail::coefficients_of(act)) hidden_coeffs.push_back(detail::to_vector(c->values()));
    }
    j["hidden_activation"] = hidden_tag;
    j["output_activation"] = detail::activation_tag(model.output_activation);
    j["hidden_coeffs"] = hidden_coeffs;
    if (const auto* c = detail::coefficients_of(model.output_activation))
        j["output_coeffs"] = detail::to_vector(c->values());
    else
        j["output_coeffs"] = nlohmann::json::array();
    return j;
}

inline BenchmarkModel network_from_json(const nlohmann::json& j) {
    BenchmarkModel model;
    model.m0 = j.at("m0").get<std::size_t>();
    model.m1 = j.at("m1").get<std::size_t>();
    model.basis = BasisConfig{j.at("n").get<std::size_t>(), j.at("q").get<std::size_t>()};
    model.basis.validate();
    model.hidden_weights = j.at("hidden_weights").get<std::vector<double>>();
    model.output_weights = j.at("output_weights").get<std::vector<double>>();

    const std::string hidden_tag = j.value("hidden_activation", std::string("dct"));
    const std::string output_tag = j.value("output_activation", std::string("dct"));
    const auto& hidden_coeffs = j.at("hidden_coeffs");
    for (std::size_t k = 0; k < model.m1; ++k) {
        const nlohmann::json* c = (hidden_tag == "dct" && k < hidden_coeffs.size()) ? &hidden_coeffs[k] : nullptr;
        model.hidden_activations.push_back(detail::activation_from(hidden_tag, c, model.basis));
    }
    model.output_activation = detail::activation_from(output_tag, &j.at("output_coeffs"), model.basis);
    model.validate();
    return model;
}

/// Strict variant for the adaptive model: every activation must be a DCT series.
inline EnnModel enn_from_json(const nlohmann::json& j) {
    const BenchmarkModel any = network_from_json(j);
    EnnModel model;
    model.m0 = any.m0;
    model.m1 = any.m1;
    model.basis = any.basis;
    model.hidden_weights = any.hidden_weights;
    model.output_weights = any.output_weights;
    for (const auto& act : any.hidden_activations) {
        const auto* a = std::get_if<AdaptiveActivation>(&act);
        if (a == nullptr) throw std::invalid_argument("model JSON: expected dct hidden activations");
        model.hidden_activations.push_back(*a);
    }
    const auto* out = std::get_if<AdaptiveActivation>(&any.output_activation);
    if (out == nullptr) throw std::invalid_argument("model JSON: expected dct output activation");
    model.output_activation = *out;
    return model;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return nlohmann::json::parse(in);
}

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << '\n';
}

} // namespace enn
